"""Pauli-operator nodes, commutation rules, dependency DAG, merging and normalization.

A term is an ordered list of nodes read left to right (the first node acts
first). A :class:`PcoastGraph` keeps its nodes in a list that is always a valid
topological order, draws an edge ``i -> j`` (``i < j``) for every pair of
nodes that do not commute, and ends with a single terminal frame.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

from .frame import PauliFrame, pauli_frame, rotation_frame
from .pauli import PauliOperator, commutator_form, parse_pauli

__all__ = [
    "Rot",
    "Meas",
    "Prep",
    "FrameNode",
    "ClassicalRemap",
    "PcoastNode",
    "PcoastGraph",
    "NOT_MERGEABLE",
    "commutes_pauli_node",
    "commutes_nodes",
    "build_graph",
    "push_frame",
    "merge",
    "normalize",
    "quarter_turns",
]

ANGLE_TOL = 1e-9


# ---------------------------------------------------------------------------
# Nodes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Rot:
    """Rotation ``exp(-i theta/2 P)``."""

    P: PauliOperator
    theta: float

    def __post_init__(self):
        if not self.P.is_hermitian():
            raise ValueError("rotation axis must be Hermitian")

    @property
    def paulis(self) -> tuple[PauliOperator, ...]:
        return (self.P,)

    @property
    def is_clifford(self) -> bool:
        return quarter_turns(self.theta) is not None


@dataclass(frozen=True)
class Meas:
    """Projective measurement of ``P`` written to classical bit ``cid``.

    Bit 0 is the +1 eigenvalue. ``aliases`` lists further ``(cid, flip)``
    bits that receive the same outcome XOR ``flip``. Measuring ``±I`` is
    deterministic: ``+I`` writes 0 and ``-I`` writes 1.
    """

    P: PauliOperator
    cid: str
    aliases: tuple[tuple[str, int], ...] = ()

    def __post_init__(self):
        if not self.P.is_hermitian():
            raise ValueError("measured operator must be Hermitian")

    @property
    def paulis(self) -> tuple[PauliOperator, ...]:
        return (self.P,)

    @property
    def outputs(self) -> tuple[tuple[str, int], ...]:
        """Every ``(cid, flip)`` written by this node, primary id first."""
        return ((self.cid, 0),) + tuple(self.aliases)

    @property
    def cids(self) -> tuple[str, ...]:
        return tuple(c for c, _ in self.outputs)


@dataclass(frozen=True)
class Prep:
    """Preparation of the +1 eigenspace of ``Pz``; ``Px`` is the flip operator."""

    Pz: PauliOperator
    Px: PauliOperator

    def __post_init__(self):
        if not (self.Pz.is_hermitian() and self.Px.is_hermitian()):
            raise ValueError("preparation operators must be Hermitian")
        if commutator_form(self.Pz, self.Px) != 1:
            raise ValueError("preparation pair must anticommute")

    @property
    def paulis(self) -> tuple[PauliOperator, ...]:
        return (self.Pz, self.Px)


@dataclass(frozen=True)
class FrameNode:
    """Clifford unitary given by a Pauli frame."""

    F: PauliFrame

    @property
    def paulis(self) -> tuple[PauliOperator, ...]:
        return ()


@dataclass(frozen=True)
class ClassicalRemap:
    """Classical post-processing ``outputs = b @ inputs + v`` over GF(2)."""

    b: tuple[tuple[int, ...], ...]
    v: tuple[int, ...]
    inputs: tuple[str, ...]
    outputs: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "b", tuple(tuple(int(x) & 1 for x in row) for row in self.b))
        object.__setattr__(self, "v", tuple(int(x) & 1 for x in self.v))
        object.__setattr__(self, "inputs", tuple(self.inputs))
        object.__setattr__(self, "outputs", tuple(self.outputs))
        if len(self.b) != len(self.outputs) or len(self.v) != len(self.outputs):
            raise ValueError("remap rows must match the number of outputs")
        if any(len(row) != len(self.inputs) for row in self.b):
            raise ValueError("remap columns must match the number of inputs")

    @property
    def paulis(self) -> tuple[PauliOperator, ...]:
        return ()

    def apply(self, bits: dict[str, int]) -> dict[str, int]:
        """Return output bits computed from ``bits`` (which must hold every input)."""
        out = {}
        for r, cid in enumerate(self.outputs):
            acc = self.v[r]
            for c, src in enumerate(self.inputs):
                if self.b[r][c]:
                    acc ^= bits[src]
            out[cid] = acc
        return out

    def is_trivial(self) -> bool:
        """Identity map with ``inputs == outputs``."""
        n = len(self.inputs)
        return (
            self.inputs == self.outputs
            and not any(self.v)
            and all(self.b[r][c] == (r == c) for r in range(n) for c in range(n))
        )


PcoastNode = Union[Rot, Meas, Prep, FrameNode, ClassicalRemap]


def quarter_turns(theta: float) -> int | None:
    """``t mod 4`` when ``theta`` is within tolerance of ``t * pi/2``, else ``None``."""
    t = theta / (math.pi / 2)
    r = round(t)
    if abs(theta - r * math.pi / 2) <= ANGLE_TOL:
        return r % 4
    return None


# ---------------------------------------------------------------------------
# Commutation
# ---------------------------------------------------------------------------

def commutes_pauli_node(q: PauliOperator, n: PcoastNode) -> bool:
    """Whether the Pauli ``q`` syntactically commutes with node ``n``."""
    if isinstance(n, FrameNode):
        return n.F.forward_action(q) == q
    if isinstance(n, ClassicalRemap):
        return True
    return all(commutator_form(q, p) == 0 for p in n.paulis)


def _classical_ids(n: PcoastNode) -> set[str]:
    if isinstance(n, Meas):
        return set(n.cids)
    if isinstance(n, ClassicalRemap):
        return set(n.inputs) | set(n.outputs)
    return set()


def commutes_nodes(n1: PcoastNode, n2: PcoastNode) -> bool:
    """Syntactic commutation; not reflexive on preparations."""
    if isinstance(n1, ClassicalRemap) or isinstance(n2, ClassicalRemap):
        return not (_classical_ids(n1) & _classical_ids(n2))
    if isinstance(n1, FrameNode) and isinstance(n2, FrameNode):
        return n1.F.compose(n2.F) == n2.F.compose(n1.F)
    if isinstance(n1, FrameNode):
        n1, n2 = n2, n1
    if isinstance(n2, Meas) and isinstance(n1, Meas) and set(n1.cids) & set(n2.cids):
        return False
    return all(commutes_pauli_node(p, n2) for p in n1.paulis)


# ---------------------------------------------------------------------------
# Frame pushing
# ---------------------------------------------------------------------------

def push_frame(F: PauliFrame, n: PcoastNode) -> PcoastNode:
    """Node ``n'`` with ``F ; n`` equivalent to ``n' ; F``."""
    if isinstance(n, Rot):
        return Rot(F.backward_action(n.P), n.theta)
    if isinstance(n, Meas):
        return Meas(F.backward_action(n.P), n.cid, n.aliases)
    if isinstance(n, Prep):
        return Prep(F.backward_action(n.Pz), F.backward_action(n.Px))
    if isinstance(n, FrameNode):
        return FrameNode(F.invert().compose(n.F).compose(F))
    return n


# ---------------------------------------------------------------------------
# Graph
# ---------------------------------------------------------------------------

class PcoastGraph:
    """Dependency DAG over an ordered node list plus a terminal frame.

    Parameters
    ----------
    n_qubits : int
    nodes : sequence of PcoastNode
        Any valid topological order; the list order itself is one.
    frame : PauliFrame, optional
        Terminal frame (identity when omitted).
    """

    def __init__(self, n_qubits: int, nodes: Sequence[PcoastNode] = (), frame: PauliFrame | None = None):
        self.n_qubits = n_qubits
        self.nodes: tuple[PcoastNode, ...] = tuple(nodes)
        self.frame = frame if frame is not None else PauliFrame.identity(n_qubits)
        if self.frame.n_qubits != n_qubits:
            raise ValueError("terminal frame has the wrong size")
        for nd in self.nodes:
            for p in nd.paulis:
                if p.n_qubits != n_qubits:
                    raise ValueError("node operator has the wrong size")
            if isinstance(nd, FrameNode) and nd.F.n_qubits != n_qubits:
                raise ValueError("frame node has the wrong size")
        self._edges: list[tuple[int, int]] | None = None
        self._desc: list[int] | None = None

    def __len__(self) -> int:
        return len(self.nodes)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PcoastGraph):
            return NotImplemented
        return (self.n_qubits, self.nodes, self.frame) == (other.n_qubits, other.nodes, other.frame)

    def __repr__(self) -> str:
        return f"PcoastGraph(n={self.n_qubits}, nodes={len(self.nodes)})"

    def with_nodes(self, nodes: Sequence[PcoastNode], frame: PauliFrame | None = None) -> "PcoastGraph":
        return PcoastGraph(self.n_qubits, nodes, self.frame if frame is None else frame)

    # -- structure ---------------------------------------------------------------
    @property
    def edges(self) -> list[tuple[int, int]]:
        if self._edges is None:
            m = len(self.nodes)
            self._edges = [
                (i, j)
                for i in range(m)
                for j in range(i + 1, m)
                if not commutes_nodes(self.nodes[i], self.nodes[j])
            ]
        return self._edges

    def successors(self, i: int) -> list[int]:
        return [b for a, b in self.edges if a == i]

    def predecessors(self, j: int) -> list[int]:
        return [a for a, b in self.edges if b == j]

    def _descendant_bits(self) -> list[int]:
        if self._desc is None:
            m = len(self.nodes)
            succ: list[list[int]] = [[] for _ in range(m)]
            for a, b in self.edges:
                succ[a].append(b)
            desc = [0] * m
            for i in reversed(range(m)):
                acc = 0
                for j in succ[i]:
                    acc |= (1 << j) | desc[j]
                desc[i] = acc
            self._desc = desc
        return self._desc

    def descendants(self, i: int) -> set[int]:
        bits = self._descendant_bits()[i]
        return {j for j in range(len(self.nodes)) if bits >> j & 1}

    def ancestors(self, j: int) -> set[int]:
        d = self._descendant_bits()
        return {i for i in range(j) if d[i] >> j & 1}

    def reachable(self, i: int, j: int) -> bool:
        return bool(self._descendant_bits()[i] >> j & 1)

    def has_long_path(self, i: int, j: int) -> bool:
        """True when some path of length at least two leads from ``i`` to ``j``."""
        d = self._descendant_bits()
        return any(k != j and (d[k] >> j & 1) for k in self.successors(i))

    def out_degree(self, i: int) -> int:
        return len(self.successors(i))

    def classical_ids(self) -> list[str]:
        out: list[str] = []
        for nd in self.nodes:
            if isinstance(nd, Meas):
                out.extend(nd.cids)
            elif isinstance(nd, ClassicalRemap):
                out.extend(c for c in nd.outputs if c not in out)
        return out

    def is_frame_terminal(self) -> bool:
        return not any(isinstance(nd, FrameNode) for nd in self.nodes)

    def as_term(self) -> list[PcoastNode]:
        """Node list followed by the terminal frame (omitted when it is the identity)."""
        tail = [] if self.frame.is_identity() else [FrameNode(self.frame)]
        return list(self.nodes) + tail

    def reorder_around(self, i: int, j: int, middle: Sequence[PcoastNode]) -> "PcoastGraph":
        """Replace nodes ``i`` and ``j`` by ``middle``.

        The new order lists the common ancestors of ``i`` and ``j`` first,
        then ``middle``, then every other node in the original order.
        """
        anc = (self.ancestors(i) | self.ancestors(j)) - {i, j}
        head = [self.nodes[k] for k in sorted(anc)]
        tail = [self.nodes[k] for k in range(len(self.nodes)) if k not in anc and k not in (i, j)]
        return self.with_nodes(head + list(middle) + tail)

    # -- serialization ------------------------------------------------------------
    def to_dict(self) -> dict:
        return {
            "n": self.n_qubits,
            "nodes": [node_to_dict(nd) for nd in self.nodes],
            "edges": [list(e) for e in self.edges],
            "frame": self.frame.to_dict(),
        }

    def to_json(self, indent: int | None = None) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    @classmethod
    def from_dict(cls, data: dict) -> "PcoastGraph":
        frame = PauliFrame.from_dict(data["frame"]) if "frame" in data else None
        return cls(data["n"], [node_from_dict(d) for d in data["nodes"]], frame)

    @classmethod
    def from_json(cls, text: str) -> "PcoastGraph":
        return cls.from_dict(json.loads(text))


def node_to_dict(nd: PcoastNode) -> dict:
    if isinstance(nd, Rot):
        return {"kind": "rot", "paulis": [nd.P.label()], "theta": nd.theta}
    if isinstance(nd, Meas):
        d = {"kind": "meas", "paulis": [nd.P.label()], "cid": nd.cid}
        if nd.aliases:
            d["aliases"] = [list(a) for a in nd.aliases]
        return d
    if isinstance(nd, Prep):
        return {"kind": "prep", "paulis": [nd.Pz.label(), nd.Px.label()]}
    if isinstance(nd, FrameNode):
        return {"kind": "frame", "paulis": [], "frame": nd.F.to_dict()}
    return {
        "kind": "remap",
        "paulis": [],
        "b": [list(r) for r in nd.b],
        "v": list(nd.v),
        "inputs": list(nd.inputs),
        "outputs": list(nd.outputs),
    }


def node_from_dict(d: dict) -> PcoastNode:
    kind = d["kind"]
    ps = [parse_pauli(s) for s in d.get("paulis", [])]
    if kind == "rot":
        return Rot(ps[0], float(d["theta"]))
    if kind == "meas":
        return Meas(ps[0], d["cid"], tuple((c, int(f)) for c, f in d.get("aliases", [])))
    if kind == "prep":
        return Prep(ps[0], ps[1])
    if kind == "frame":
        return FrameNode(PauliFrame.from_dict(d["frame"]))
    if kind == "remap":
        return ClassicalRemap(d["b"], d["v"], d["inputs"], d["outputs"])
    raise ValueError(f"unknown node kind {kind!r}")


def build_graph(
    nodes: Sequence[PcoastNode], n_qubits: int | None = None, frame: PauliFrame | None = None
) -> PcoastGraph:
    """Graph whose edges follow the input order for every non-commuting pair."""
    if n_qubits is None:
        n_qubits = _infer_size(nodes, frame)
    return PcoastGraph(n_qubits, nodes, frame)


def _infer_size(nodes: Sequence[PcoastNode], frame: PauliFrame | None) -> int:
    if frame is not None:
        return frame.n_qubits
    for nd in nodes:
        if nd.paulis:
            return nd.paulis[0].n_qubits
        if isinstance(nd, FrameNode):
            return nd.F.n_qubits
    raise ValueError("cannot infer the qubit count; pass n_qubits")


# ---------------------------------------------------------------------------
# Merging
# ---------------------------------------------------------------------------

class _NotMergeable:
    def __repr__(self) -> str:
        return "NOT_MERGEABLE"

    def __bool__(self) -> bool:
        return False


NOT_MERGEABLE = _NotMergeable()


def _relative_sign(a: PauliOperator, b: PauliOperator) -> int:
    """+1 or -1 with ``b == sign * a``; 0 when they differ beyond a sign."""
    if not a.same_up_to_sign(b):
        return 0
    return 1 if a.phase == b.phase else -1


def merge(n1: PcoastNode, n2: PcoastNode):
    """Combine ``n1 ; n2`` into an equivalent shorter or simpler node list.

    Returns a tuple of replacement nodes (possibly empty) or
    :data:`NOT_MERGEABLE`.
    """
    if isinstance(n1, Rot) and isinstance(n2, Rot):
        s = _relative_sign(n1.P, n2.P)
        if not s:
            return NOT_MERGEABLE
        theta = n1.theta + s * n2.theta
        t = quarter_turns(theta)
        if t is None:
            return (Rot(n1.P, theta),)
        if t == 0:
            return ()
        return (FrameNode(rotation_frame(n1.P, t)),)

    if isinstance(n1, Rot) and isinstance(n2, Prep) and _relative_sign(n2.Pz, n1.P):
        return (n2,)
    if isinstance(n1, Prep) and isinstance(n2, Rot) and _relative_sign(n1.Pz, n2.P):
        return (n1,)

    if isinstance(n1, Meas) and isinstance(n2, Meas):
        s = _relative_sign(n1.P, n2.P)
        if not s:
            return NOT_MERGEABLE
        flip = 0 if s == 1 else 1
        extra = ((n2.cid, flip),) + tuple((c, f ^ flip) for c, f in n2.aliases)
        return (Meas(n1.P, n1.cid, n1.aliases + extra),)

    if isinstance(n1, Prep) and isinstance(n2, Prep):
        s = _relative_sign(n1.Pz, n2.Pz)
        if not s:
            return NOT_MERGEABLE
        if s == 1:
            return (n1,)
        return (n1, FrameNode(pauli_frame(n2.Px)))

    if isinstance(n1, Prep) and isinstance(n2, Meas):
        s = _relative_sign(n1.Pz, n2.P)
        if not s:
            return NOT_MERGEABLE
        ident = PauliOperator.identity(n1.Pz.n_qubits)
        return (n1, Meas(ident if s == 1 else -ident, n2.cid, n2.aliases))

    if isinstance(n1, Rot) and isinstance(n2, Meas) and _relative_sign(n1.P, n2.P):
        return (n2,)
    if isinstance(n1, Meas) and isinstance(n2, Rot) and _relative_sign(n1.P, n2.P):
        return (n1,)

    return NOT_MERGEABLE


def _merge_once(g: PcoastGraph) -> PcoastGraph | None:
    m = len(g.nodes)
    for i in range(m):
        for j in range(i + 1, m):
            res = merge(g.nodes[i], g.nodes[j])
            if res is NOT_MERGEABLE:
                continue
            if g.has_long_path(i, j):
                continue
            return g.reorder_around(i, j, res)
    return None


def push_frames_to_terminal(g: PcoastGraph) -> PcoastGraph:
    """Move every interior frame node into the terminal frame."""
    acc = PauliFrame.identity(g.n_qubits)
    out: list[PcoastNode] = []
    for nd in g.nodes:
        if isinstance(nd, FrameNode):
            acc = nd.F.compose(acc)
        else:
            out.append(push_frame(acc, nd))
    return PcoastGraph(g.n_qubits, out, g.frame.compose(acc))


def normalize(g: PcoastGraph, max_steps: int | None = None) -> PcoastGraph:
    """Frame-terminal, fully merged equivalent of ``g``.

    Interior frames are pushed into the terminal frame, then mergeable pairs
    (incomparable or joined by a single edge) are merged one at a time,
    restarting the scan after every merge, until nothing changes.
    """
    limit = max_steps if max_steps is not None else 10 * (len(g.nodes) + 1) ** 2
    g = push_frames_to_terminal(g)
    for _ in range(limit):
        nxt = _merge_once(g)
        if nxt is None:
            return g
        g = push_frames_to_terminal(nxt)
    raise RuntimeError("normalization did not converge")
