"""Top-level graph optimization in hold and release modes."""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

from .circuit import Circuit, MeasSQ
from .frame import PauliFrame
from .graph import ClassicalRemap, FrameNode, Meas, PcoastGraph, Prep, Rot, normalize
from .measurement_map import MeasurementRemap, map_measurements
from .pauli import PauliOperator
from .prep_reduction import PrepSet, prep_cost, reduce_frame_by_prep, reduce_nodes_by_prep
from .stabilizer_search import find_stabilizers

__all__ = [
    "OptimizeMode",
    "OptimizeReport",
    "optimize_graph",
    "optimize_with_report",
    "fixpoint_reduce",
    "canonical_key",
]

AXIS_ORDERS = ("XYZ", "ZYX")


class OptimizeMode(str, enum.Enum):
    HOLD = "hold"
    RELEASE = "release"


@dataclass
class OptimizeReport:
    """Side information from :func:`optimize_graph`."""

    graph: PcoastGraph
    iterations: int = 0
    circuit: Circuit | None = None
    remap: MeasurementRemap | None = None


def _node_key(nd) -> tuple:
    if isinstance(nd, Rot):
        return (0, nd.P.label(), round(nd.theta, 12))
    if isinstance(nd, Meas):
        return (1, nd.P.label(), nd.cid, nd.aliases)
    if isinstance(nd, Prep):
        return (2, nd.Pz.label(), nd.Px.label())
    if isinstance(nd, FrameNode):
        return (3, repr(nd.F))
    return (4, nd.inputs, nd.outputs, nd.b, nd.v)


def canonical_key(g: PcoastGraph) -> tuple:
    """Order-independent description: the least topological sort by node key."""
    m = len(g.nodes)
    preds = [0] * m
    succ: list[list[int]] = [[] for _ in range(m)]
    for a, b in g.edges:
        preds[b] += 1
        succ[a].append(b)
    ready = [i for i in range(m) if preds[i] == 0]
    out = []
    while ready:
        ready.sort(key=lambda i: _node_key(g.nodes[i]))
        i = ready.pop(0)
        out.append(_node_key(g.nodes[i]))
        for j in succ[i]:
            preds[j] -= 1
            if preds[j] == 0:
                ready.append(j)
    return (g.n_qubits, tuple(out), g.frame)


def fixpoint_reduce(
    g: PcoastGraph, skip_terminal_meas: bool = False, max_iterations: int | None = None
) -> tuple[PcoastGraph, int]:
    """Alternate preparation-on-node rewriting and normalization until stable.

    Returns the graph and the number of passes run (a stable input takes one).
    """
    cap = max_iterations if max_iterations is not None else 10 * max(len(g.nodes), 1)
    for it in range(1, cap + 1):
        nxt = normalize(reduce_nodes_by_prep(g, skip_terminal_meas=skip_terminal_meas))
        if canonical_key(nxt) == canonical_key(g):
            return nxt, it
        g = nxt
    raise RuntimeError("fixpoint iteration cap exceeded")


def _fresh_ids(taken: set[str], count: int, prefix: str) -> list[str]:
    out, k = [], 0
    while len(out) < count:
        cid = f"{prefix}{k}"
        if cid not in taken:
            out.append(cid)
        k += 1
    return out


def _is_terminal_meas(g: PcoastGraph, i: int) -> bool:
    nd = g.nodes[i]
    return isinstance(nd, Meas) and not nd.P.is_identity() and g.out_degree(i) == 0


def _hold(g: PcoastGraph) -> PcoastGraph:
    idx = [i for i, nd in enumerate(g.nodes) if isinstance(nd, Prep) and g.out_degree(i) == 0]
    if not idx:
        return g
    pi = PrepSet.from_nodes(g.nodes[i] for i in idx)
    new_pi, new_frame = reduce_frame_by_prep(pi, g.frame)
    if new_pi == pi and new_frame == g.frame:
        return g
    rest = [nd for i, nd in enumerate(g.nodes) if i not in idx]
    return normalize(PcoastGraph(g.n_qubits, rest + new_pi.nodes(), new_frame))


def _release(g: PcoastGraph, cid_prefix: str) -> OptimizeReport:
    n = g.n_qubits
    all_meas = [i for i, nd in enumerate(g.nodes) if isinstance(nd, Meas)]
    if all_meas:
        keep = set(all_meas)
        for i in all_meas:
            keep |= g.ancestors(i)
        keep |= {i for i, nd in enumerate(g.nodes) if isinstance(nd, ClassicalRemap)}
        g = PcoastGraph(n, [nd for i, nd in enumerate(g.nodes) if i in keep])
    else:
        g = PcoastGraph(n, g.nodes)
    me_idx = [i for i in range(len(g.nodes)) if _is_terminal_meas(g, i)]
    if not me_idx:
        return OptimizeReport(g)
    me_set = set(me_idx)
    pe_idx = [
        i
        for i, nd in enumerate(g.nodes)
        if isinstance(nd, Prep) and all(j in me_set for j in g.successors(i))
    ]
    m_e = [g.nodes[i] for i in me_idx]
    pi_e = PrepSet.from_nodes(g.nodes[i] for i in pe_idx)
    rest = [nd for i, nd in enumerate(g.nodes) if i not in me_set and i not in pe_idx]

    new_ids = _fresh_ids(set(g.classical_ids()), n, cid_prefix)
    best = None
    for order in AXIS_ORDERS:
        search = find_stabilizers([nd.P for nd in m_e], "general", axis_order=order, n_qubits=n)
        W = search.frame.invert()
        pi_out, W_out = reduce_frame_by_prep(pi_e, W) if len(pi_e) else (pi_e, W)
        cost = (W_out.cost() + prep_cost(pi_out), search.circuit.tqe_count())
        if best is None or cost < best[0]:
            best = (cost, search, pi_out, W_out)
    _, search, pi_out, W_out = best

    # Relabel the searched measurements with fresh classical ids.
    meas_gates = search.circuit.measurements()
    relabel = {m.cid: new_ids[k] for k, m in enumerate(meas_gates)}
    gates = tuple(
        MeasSQ(gt.sigma, gt.qubit, relabel[gt.cid]) if isinstance(gt, MeasSQ) else gt
        for gt in search.circuit.gates
    )
    circuit = Circuit(n, gates)

    targets: list[str] = []
    paulis: list[PauliOperator] = []
    flips: list[int] = []
    for nd in m_e:
        for cid, flip in nd.outputs:
            targets.append(cid)
            paulis.append(nd.P)
            flips.append(flip)
    remap = map_measurements(paulis, circuit, search.frame, targets)
    remap = MeasurementRemap(remap.b, tuple(v ^ f for v, f in zip(remap.v, flips)), remap.sources, remap.targets)

    new_nodes = list(rest) + pi_out.nodes()
    if not W_out.is_identity():
        new_nodes.append(FrameNode(W_out))
    new_nodes += [Meas(m.pauli(n), m.cid) for m in circuit.measurements()]
    new_nodes.append(remap.to_node())
    return OptimizeReport(PcoastGraph(n, new_nodes), circuit=circuit, remap=remap)


def optimize_graph(
    g: PcoastGraph, mode: OptimizeMode | str = OptimizeMode.HOLD, cid_prefix: str = "q"
) -> PcoastGraph:
    """Optimized graph; see :func:`optimize_with_report`."""
    return optimize_with_report(g, mode, cid_prefix).graph


def optimize_with_report(
    g: PcoastGraph, mode: OptimizeMode | str = OptimizeMode.HOLD, cid_prefix: str = "q"
) -> OptimizeReport:
    """Optimize a graph and return the result with side information.

    Hold mode keeps the full channel: preparation-on-node rewriting to a
    fixpoint, then the trailing preparations are used to shrink the terminal
    frame.

    Release mode only keeps the joint statistics of the graph's measurement
    outcomes: the terminal frame is dropped, nodes that cannot influence any
    measurement are removed, and the trailing mutually commuting measurements
    are replaced by a stabilizer-search circuit (a Clifford frame followed by
    single-qubit measurements with fresh classical ids) plus a classical remap
    writing the original ids. Trailing preparations that only feed those
    measurements are folded into that frame.
    """
    mode = OptimizeMode(mode)
    g = normalize(g)
    release = mode is OptimizeMode.RELEASE
    g, iterations = fixpoint_reduce(g, skip_terminal_meas=release)
    if not release:
        return OptimizeReport(_hold(g), iterations)
    report = _release(g, cid_prefix)
    report.iterations = iterations
    return report
