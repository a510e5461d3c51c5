"""Dense reference semantics for small registers.

Everything here works with explicit ``2^N x 2^N`` complex matrices and is
meant for verification only. Classical outcomes are tracked by splitting the
state into branches keyed by the classical assignment, so measurement nodes,
outcome aliases and classical remaps all have exact meaning.
"""
from __future__ import annotations

import math
from typing import Iterable, Sequence

import numpy as np

from .circuit import Circuit, Clifford1Q, MeasSQ, PrepSQ, RotSQ, TQE
from .frame import PauliFrame
from .graph import ClassicalRemap, FrameNode, Meas, PcoastGraph, Prep, Rot
from .pauli import PauliOperator, commutator_form

__all__ = [
    "MAX_QUBITS",
    "TOL",
    "pauli_matrix",
    "frame_unitary",
    "frames_match",
    "node_pauli_map",
    "expression_matrix",
    "circuit_to_nodes",
    "DenseChannel",
    "channel_of",
    "hold_equivalent",
    "release_equivalent",
    "outcome_distribution",
    "random_density_matrix",
]

MAX_QUBITS = 5
TOL = 1e-9
#: Branches whose entries are all below this are treated as exactly zero.
_PRUNE = 1e-14

_I2 = np.eye(2, dtype=complex)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def pauli_matrix(p: PauliOperator) -> np.ndarray:
    """Dense matrix of ``p``; qubit 0 is the most significant tensor factor."""
    out = np.array([[1]], dtype=complex)
    for q in range(p.n_qubits):
        m = _I2
        if p.x >> q & 1:
            m = _X
        if p.z >> q & 1:
            m = m @ _Z
        out = np.kron(out, m)
    return (1j ** p.phase) * out


def frame_unitary(F: PauliFrame) -> np.ndarray:
    """A unitary ``U`` (fixed up to global phase) with ``U Z_i U^dag = effZ_i``.

    Built directly from the stabilizer state ``U|0...0>``, which is the joint
    +1 eigenvector of every ``effZ_i``; column ``b`` is ``prod effX_i^{b_i}``
    applied to it.
    """
    n = F.n_qubits
    dim = 1 << n
    proj = np.eye(dim, dtype=complex)
    for i in range(n):
        proj = proj @ (np.eye(dim) + pauli_matrix(F.eff_z(i))) / 2
    seed = None
    for k in range(dim):
        v = proj[:, k]
        if np.linalg.norm(v) > 1e-6:
            seed = v / np.linalg.norm(v)
            break
    if seed is None:  # pragma: no cover - impossible for a valid frame
        raise ValueError("frame rows do not define a stabilizer state")
    xs = [pauli_matrix(F.eff_x(i)) for i in range(n)]
    cols = []
    for b in range(dim):
        v = seed
        for i in range(n):
            if b >> (n - 1 - i) & 1:
                v = xs[i] @ v
        cols.append(v)
    return np.stack(cols, axis=1)


def frames_match(F: PauliFrame, U: np.ndarray, tol: float = TOL) -> bool:
    """Whether conjugation by ``U`` sends every ``Z_i``/``X_i`` to the frame rows."""
    n = F.n_qubits
    for i in range(n):
        for axis, img in (("Z", F.eff_z(i)), ("X", F.eff_x(i))):
            src = pauli_matrix(PauliOperator.single(n, i, axis))
            if not np.allclose(U @ src @ U.conj().T, pauli_matrix(img), atol=tol):
                return False
    return True


# ---------------------------------------------------------------------------
# Pauli maps
# ---------------------------------------------------------------------------

def node_pauli_map(n, Q: PauliOperator) -> list[tuple[complex, PauliOperator]]:
    """Image of the operator ``Q`` under the node's channel as a Pauli sum."""
    if isinstance(n, Rot):
        if commutator_form(Q, n.P) == 0:
            return [(1.0, Q)]
        return [(math.cos(n.theta), Q), (-1j * math.sin(n.theta), n.P * Q)]
    if isinstance(n, Meas):
        return [(1.0, Q)] if commutator_form(Q, n.P) == 0 else []
    if isinstance(n, Prep):
        if commutator_form(Q, n.Pz) or commutator_form(Q, n.Px):
            return []
        return [(1.0, Q), (1.0, Q * n.Pz)]
    if isinstance(n, FrameNode):
        return [(1.0, n.F.forward_action(Q))]
    return [(1.0, Q)]


def expression_matrix(terms: Sequence[tuple[complex, PauliOperator]], n_qubits: int) -> np.ndarray:
    out = np.zeros((1 << n_qubits, 1 << n_qubits), dtype=complex)
    for c, p in terms:
        out = out + c * pauli_matrix(p)
    return out


# ---------------------------------------------------------------------------
# Channels
# ---------------------------------------------------------------------------

_PREP_PARTNER = {"Z": "X", "X": "Z", "Y": "Z"}


def circuit_to_nodes(c: Circuit) -> list:
    """Node list with the same channel as the gate circuit."""
    n = c.n_qubits
    out = []
    for g in c.gates:
        if isinstance(g, (TQE, Clifford1Q)):
            out.append(FrameNode(g.frame(n)))
        elif isinstance(g, MeasSQ):
            out.append(Meas(g.pauli(n), g.cid))
        elif isinstance(g, PrepSQ):
            out.append(
                Prep(
                    PauliOperator.single(n, g.qubit, g.sigma),
                    PauliOperator.single(n, g.qubit, _PREP_PARTNER[g.sigma]),
                )
            )
        else:
            out.append(Rot(PauliOperator.single(n, g.qubit, g.sigma), g.angle))
    return out


Branches = dict  # tuple(sorted((cid, bit))) -> density matrix


def _key(bits: dict[str, int]) -> tuple:
    return tuple(sorted(bits.items()))


class DenseChannel:
    """Classical-quantum channel of a node sequence on ``n_qubits`` qubits."""

    def __init__(self, n_qubits: int, nodes: Sequence):
        if n_qubits > MAX_QUBITS:
            raise ValueError(f"dense simulation is limited to {MAX_QUBITS} qubits")
        self.n_qubits = n_qubits
        self.nodes = list(nodes)
        self.dim = 1 << n_qubits
        self._cache: dict[int, np.ndarray] = {}

    def _mat(self, key, fn) -> np.ndarray:
        k = id(key)
        if k not in self._cache:
            self._cache[k] = fn()
        return self._cache[k]

    def _step(self, node, branches: Branches) -> Branches:
        out: Branches = {}

        def add(bits: dict, rho: np.ndarray) -> None:
            k = _key(bits)
            out[k] = out[k] + rho if k in out else rho

        eye = np.eye(self.dim, dtype=complex)
        if isinstance(node, Rot):
            pm = self._mat(node, lambda: pauli_matrix(node.P))
            u = math.cos(node.theta / 2) * eye - 1j * math.sin(node.theta / 2) * pm
            return {k: u @ r @ u.conj().T for k, r in branches.items()}
        if isinstance(node, FrameNode):
            u = self._mat(node, lambda: frame_unitary(node.F))
            return {k: u @ r @ u.conj().T for k, r in branches.items()}
        if isinstance(node, Prep):
            pz = pauli_matrix(node.Pz)
            px = pauli_matrix(node.Px)
            plus, minus = (eye + pz) / 2, (eye - pz) / 2
            return {
                k: plus @ r @ plus + px @ minus @ r @ minus @ px for k, r in branches.items()
            }
        if isinstance(node, Meas):
            if not node.P.is_identity():
                pm = self._mat(node, lambda: pauli_matrix(node.P))
                proj = ((eye + pm) / 2, (eye - pm) / 2)
            for k, r in branches.items():
                bits = dict(k)
                for cid in node.cids:
                    if cid in bits:
                        raise ValueError(f"classical id {cid!r} written twice")
                if node.P.is_identity():
                    outcomes = [(0 if node.P.sign == 1 else 1, r)]
                else:
                    outcomes = [(bit, pr @ r @ pr) for bit, pr in enumerate(proj)]
                for bit, rr in outcomes:
                    if not rr.any() or np.abs(rr).max() < _PRUNE:
                        # Impossible outcome; dropping it keeps branch counts small.
                        continue
                    nb = dict(bits)
                    for cid, flip in node.outputs:
                        nb[cid] = bit ^ flip
                    add(nb, rr)
            return out
        if isinstance(node, ClassicalRemap):
            for k, r in branches.items():
                bits = dict(k)
                missing = [c for c in node.inputs if c not in bits]
                if missing:
                    raise ValueError(f"remap reads unwritten classical ids {missing}")
                nb = dict(bits)
                nb.update(node.apply(bits))
                add(nb, r)
            return out
        raise TypeError(f"unsupported node {node!r}")

    def branches(self, rho: np.ndarray) -> Branches:
        """Unnormalized post-channel state for every classical assignment."""
        state: Branches = {(): np.asarray(rho, dtype=complex)}
        for nd in self.nodes:
            state = self._step(nd, state)
        return state

    def apply(self, rho: np.ndarray) -> np.ndarray:
        """Outcome-averaged output state."""
        total = np.zeros((self.dim, self.dim), dtype=complex)
        for r in self.branches(rho).values():
            total = total + r
        return total

    __call__ = apply

    def choi(self) -> np.ndarray:
        """Choi matrix of the outcome-averaged channel."""
        d = self.dim
        out = np.zeros((d * d, d * d), dtype=complex)
        for i in range(d):
            for j in range(d):
                e = np.zeros((d, d), dtype=complex)
                e[i, j] = 1
                out += np.kron(e, self.apply(e))
        return out


def _as_nodes(obj, n_qubits: int | None) -> tuple[int, list]:
    if isinstance(obj, PcoastGraph):
        return obj.n_qubits, obj.as_term()
    if isinstance(obj, Circuit):
        return obj.n_qubits, circuit_to_nodes(obj)
    nodes = list(obj)
    if n_qubits is None:
        for nd in nodes:
            if nd.paulis:
                n_qubits = nd.paulis[0].n_qubits
                break
            if isinstance(nd, FrameNode):
                n_qubits = nd.F.n_qubits
                break
    if n_qubits is None:
        raise ValueError("cannot infer the qubit count; pass n_qubits")
    return n_qubits, nodes


def channel_of(obj, n_qubits: int | None = None) -> DenseChannel:
    """Channel of a node list, a :class:`PcoastGraph` or a :class:`Circuit`."""
    n, nodes = _as_nodes(obj, n_qubits)
    return DenseChannel(n, nodes)


def _branch_diff(a: Branches, b: Branches, tol: float) -> bool:
    for k in set(a) | set(b):
        ra = a.get(k)
        rb = b.get(k)
        if ra is None:
            ra = np.zeros_like(rb)
        if rb is None:
            rb = np.zeros_like(ra)
        if not np.allclose(ra, rb, atol=tol, rtol=0):
            return False
    return True


def hold_equivalent(a, b, n_qubits: int | None = None, tol: float = TOL) -> bool:
    """Equality of the full classical-quantum channels on every matrix unit."""
    ca, cb = channel_of(a, n_qubits), channel_of(b, n_qubits)
    if ca.n_qubits != cb.n_qubits:
        raise ValueError("channels act on different registers")
    d = ca.dim
    for i in range(d):
        for j in range(d):
            e = np.zeros((d, d), dtype=complex)
            e[i, j] = 1
            if not _branch_diff(ca.branches(e), cb.branches(e), tol):
                return False
    return True


def random_density_matrix(n_qubits: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    d = 1 << n_qubits
    r = rank or d
    g = rng.normal(size=(d, r)) + 1j * rng.normal(size=(d, r))
    rho = g @ g.conj().T
    return rho / np.trace(rho)


def outcome_distribution(channel: DenseChannel, rho: np.ndarray, cids: Sequence[str]) -> dict[tuple, float]:
    """Joint distribution of the listed classical ids after ``channel``."""
    dist: dict[tuple, float] = {}
    for k, r in channel.branches(rho).items():
        bits = dict(k)
        missing = [c for c in cids if c not in bits]
        if missing:
            raise ValueError(f"classical ids {missing} are never written")
        key = tuple(bits[c] for c in cids)
        dist[key] = dist.get(key, 0.0) + float(np.real(np.trace(r)))
    return dist


def release_equivalent(
    a,
    b,
    cids: Sequence[str],
    n_qubits: int | None = None,
    trials: int = 8,
    seed: int = 0,
    tol: float = TOL,
) -> bool:
    """Equality of the joint outcome statistics of ``cids`` on random input states.

    Each side's own classical remaps are applied inside the channel, so
    ``cids`` name the measurable outputs both sides promise to deliver.
    Inputs are seeded random mixed and pure states plus every computational
    basis state.
    """
    ca, cb = channel_of(a, n_qubits), channel_of(b, n_qubits)
    if ca.n_qubits != cb.n_qubits:
        raise ValueError("channels act on different registers")
    rng = np.random.default_rng(seed)
    states = [random_density_matrix(ca.n_qubits, rng) for _ in range(trials)]
    states += [random_density_matrix(ca.n_qubits, rng, rank=1) for _ in range(trials)]
    for k in range(ca.dim):
        e = np.zeros((ca.dim, ca.dim), dtype=complex)
        e[k, k] = 1
        states.append(e)
    for rho in states:
        da = outcome_distribution(ca, rho, cids)
        db = outcome_distribution(cb, rho, cids)
        for key in set(da) | set(db):
            if abs(da.get(key, 0.0) - db.get(key, 0.0)) > tol:
                return False
    return True
