import random

import pytest

from pcoast.frame import PauliFrame, tqe_frame
from pcoast.graph import ClassicalRemap, FrameNode, Meas, Prep, Rot, build_graph, normalize
from pcoast.optimizer import (
    OptimizeMode,
    canonical_key,
    fixpoint_reduce,
    optimize_graph,
    optimize_with_report,
)
from pcoast.oracle import hold_equivalent, release_equivalent

from _support import P, NodeFactory, random_frame

TH = 0.37
CNOT = tqe_frame("Z", "X", 0, 1, 2)


def measured_ids(g):
    return [c for nd in g.nodes if isinstance(nd, Meas) for c in nd.cids]


def downstream_example():
    return build_graph([Prep(P("ZI"), P("XI")), FrameNode(CNOT), Meas(P("XI"), "c0"), Meas(P("IZ"), "c1")], 2)


class TestRelease:
    def test_downstream_measurements_become_single_qubit(self):
        g = downstream_example()
        rep = optimize_with_report(g, "release")
        nodes = rep.graph.nodes
        assert nodes[:3] == (Prep(P("ZI"), P("XI")), Meas(P("XI"), "q0"), Meas(P("IZ"), "q1"))
        remap = nodes[3]
        assert isinstance(remap, ClassicalRemap)
        assert remap.b == ((1, 0), (0, 1)) and remap.v == (0, 0)
        assert remap.outputs == ("c0", "c1")
        assert release_equivalent(g, rep.graph, ["c0", "c1"], 2)
        assert rep.remap is not None and rep.circuit is not None

    def test_without_measurements(self):
        g = build_graph([Prep(P("ZI"), P("XI")), Rot(P("ZX"), -TH), Rot(P("IX"), TH)], frame=CNOT)
        out = optimize_graph(g, OptimizeMode.RELEASE)
        assert out.nodes == (Prep(P("ZI"), P("XI")),)
        assert out.frame.is_identity()

    def test_nodes_after_measurements_are_dropped(self):
        g = build_graph([Meas(P("Z"), "a"), Rot(P("X"), TH)])
        out = optimize_graph(g, "release")
        assert not any(isinstance(nd, Rot) for nd in out.nodes)
        assert release_equivalent(g, out, ["a"], 1)

    def test_random_graphs(self):
        rng = random.Random(0)
        make = NodeFactory(rng)
        checked = 0
        for _ in range(60):
            n = rng.randint(1, 3)
            g = build_graph([make.any(n) for _ in range(rng.randint(2, 6))], n, random_frame(rng, n, 4))
            cids = measured_ids(g)
            if not cids:
                continue
            out = optimize_graph(g, "release")
            assert release_equivalent(g, out, cids, trials=2)
            checked += 1
        assert checked > 20


class TestHold:
    def test_random_graphs(self):
        rng = random.Random(1)
        make = NodeFactory(rng)
        for _ in range(60):
            n = rng.randint(1, 3)
            g = build_graph([make.any(n) for _ in range(rng.randint(2, 6))], n, random_frame(rng, n, 4))
            assert hold_equivalent(g, optimize_graph(g, "hold"))

    def test_keeps_nodes_unrelated_to_measurements(self):
        g = build_graph([Meas(P("ZI"), "a"), Rot(P("IX"), TH)])
        out = optimize_graph(g)
        assert Rot(P("IX"), TH) in out.nodes

    def test_trailing_preparation_shrinks_terminal_frame(self):
        g = build_graph([Prep(P("ZI"), P("XI"))], frame=tqe_frame("Z", "Z", 0, 1, 2))
        out = optimize_graph(g, "hold")
        assert out.frame.is_identity()
        assert hold_equivalent(g, out)

    def test_preparation_example(self):
        g = build_graph([Prep(P("ZI"), P("XI")), Rot(P("ZX"), -TH), Rot(P("IX"), TH)])
        assert optimize_graph(g).nodes == (Prep(P("ZI"), P("XI")),)


class TestFixpoint:
    def test_stable_input_takes_one_pass(self):
        g = normalize(build_graph([Rot(P("X"), TH), Meas(P("Z"), "c")]))
        assert fixpoint_reduce(g)[1] == 1

    def test_preparation_example_takes_two_passes(self):
        g = build_graph([Prep(P("ZI"), P("XI")), Rot(P("ZX"), -TH), Rot(P("IX"), TH)])
        out, iterations = fixpoint_reduce(g)
        assert iterations == 2
        assert out.nodes == (Prep(P("ZI"), P("XI")),)

    def test_cap(self):
        g = build_graph([Prep(P("ZI"), P("XI")), Rot(P("ZX"), -TH), Rot(P("IX"), TH)])
        with pytest.raises(RuntimeError):
            fixpoint_reduce(g, max_iterations=1)

    def test_canonical_key_ignores_order_of_commuting_nodes(self):
        a = build_graph([Rot(P("XI"), TH), Rot(P("IZ"), TH)])
        b = build_graph([Rot(P("IZ"), TH), Rot(P("XI"), TH)])
        assert canonical_key(a) == canonical_key(b)
        c = build_graph([Rot(P("XI"), TH), Rot(P("IZ"), 2 * TH)])
        assert canonical_key(a) != canonical_key(c)


def test_mode_parsing():
    assert OptimizeMode("hold") is OptimizeMode.HOLD
    with pytest.raises(ValueError):
        optimize_graph(downstream_example(), "fast")


def test_identity_frame_graph_untouched():
    g = build_graph([Rot(P("X"), TH)], frame=PauliFrame.identity(1))
    assert optimize_graph(g) == g
