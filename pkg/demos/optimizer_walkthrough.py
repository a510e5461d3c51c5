"""Run the graph optimizer on small preparation examples and check them with the oracle."""
from pcoast import build_graph, optimize_graph, optimize_with_report
from pcoast.frame import tqe_frame
from pcoast.graph import FrameNode, Meas, Prep, Rot
from pcoast.oracle import hold_equivalent, release_equivalent
from pcoast.pauli import parse_pauli as P

THETA = 0.37


def show(title, before, after, ok) -> None:
    print(f"== {title}")
    print("  before:", [str(nd) for nd in before.nodes], "frame identity:", before.frame.is_identity())
    print("  after: ", [str(nd) for nd in after.nodes], "frame identity:", after.frame.is_identity())
    print("  oracle equivalent:", ok)


def main() -> None:
    prep = Prep(P("ZI"), P("XI"))

    g = build_graph([prep, Rot(P("ZX"), -THETA), Rot(P("IX"), THETA)])
    h = optimize_graph(g, "hold")
    show("controlled rotation after |0> cancels", g, h, hold_equivalent(g, h))

    g = build_graph([prep, Rot(P("ZX"), THETA), Rot(P("IX"), THETA)])
    h = optimize_graph(g, "hold")
    show("opposite control leaves an uncontrolled rotation", g, h, hold_equivalent(g, h))

    g = build_graph([prep], frame=tqe_frame("Z", "Z", 0, 1, 2))
    h = optimize_graph(g, "hold")
    show("CZ after |0> disappears", g, h, hold_equivalent(g, h))

    g = build_graph([prep, FrameNode(tqe_frame("Z", "X", 0, 1, 2)), Meas(P("XI"), "c0"), Meas(P("IZ"), "c1")], 2)
    rep = optimize_with_report(g, "release")
    show("release mode turns downstream measurements single-qubit", g, rep.graph,
         release_equivalent(g, rep.graph, ["c0", "c1"], 2))
    print("  remap:", rep.remap.to_dict() if rep.remap else None, "iterations:", rep.iterations)


if __name__ == "__main__":
    main()
