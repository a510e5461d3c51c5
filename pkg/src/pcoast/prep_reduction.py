"""Simplifications driven by preparation nodes.

A preparation ``Prep(P, Q)`` leaves the register in the +1 eigenspace of ``P``,
so right after it ``P`` acts as the identity. Two rewrites exploit this:

* :func:`reduce_frame_by_prep` replaces a Clifford frame that follows a set of
  preparations by a cheaper frame with the same effect on prepared states;
* :func:`reduce_nodes_by_prep` multiplies the Pauli of a rotation or
  measurement seen by a preparation with ``P`` when that makes it lighter or
  lets it merge with a neighbour.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .frame import PauliFrame
from .graph import (
    NOT_MERGEABLE,
    Meas,
    PcoastGraph,
    Prep,
    Rot,
    merge,
    normalize,
)
from .measurement_map import anticommuting_partner
from .pauli import PauliOperator, commutator_form
from .stabilizer_search import find_stabilizers

__all__ = [
    "PrepSet",
    "destabilizers_from",
    "stabilizer_element",
    "reduce_frame_by_prep",
    "reduce_nodes_by_prep",
    "prep_cost",
]


@dataclass(frozen=True)
class PrepSet:
    """Commuting preparations ``[(P_i, Q_i)]`` with ``lam(P_i, Q_j) = delta_ij``."""

    pairs: tuple[tuple[PauliOperator, PauliOperator], ...]

    def __post_init__(self):
        object.__setattr__(self, "pairs", tuple((p, q) for p, q in self.pairs))
        if not self.is_valid():
            raise ValueError("preparation pairs violate the commutation relations")

    @classmethod
    def from_nodes(cls, nodes: Iterable[Prep]) -> "PrepSet":
        return cls(tuple((n.Pz, n.Px) for n in nodes))

    def __len__(self) -> int:
        return len(self.pairs)

    @property
    def stabilizers(self) -> list[PauliOperator]:
        return [p for p, _ in self.pairs]

    @property
    def destabilizers(self) -> list[PauliOperator]:
        return [q for _, q in self.pairs]

    def is_valid(self) -> bool:
        for i, (pi, qi) in enumerate(self.pairs):
            if not (pi.is_hermitian() and qi.is_hermitian()):
                return False
            for j, (pj, qj) in enumerate(self.pairs):
                if commutator_form(pi, pj) or commutator_form(qi, qj):
                    return False
                if commutator_form(pi, qj) != (i == j):
                    return False
        return True

    def nodes(self) -> list[Prep]:
        return [Prep(p, q) for p, q in self.pairs]

    def cost(self) -> int:
        return prep_cost(self)


def prep_cost(pi: PrepSet) -> int:
    """Total Pauli weight of all stabilizers and destabilizers."""
    return sum(p.weight() + q.weight() for p, q in pi.pairs)


def stabilizer_element(pi: PrepSet, r: PauliOperator) -> PauliOperator:
    """Signed element of the stabilizer group whose class equals ``r``.

    Raises ``ValueError`` when ``r`` is outside the span of the stabilizers.
    """
    out = PauliOperator.identity(r.n_qubits)
    for p, q in pi.pairs:
        if commutator_form(r, q):
            out = out * p
    if not out.same_up_to_sign(r):
        raise ValueError(f"{r.label()} is not in the stabilizer span")
    return out


def destabilizers_from(
    pi: PrepSet, s_prime: Sequence[PauliOperator], f_ctx: PauliFrame
) -> list[PauliOperator]:
    """Destabilizers in ``Span({Q_j})`` paired with the new stabilizers ``s_prime``.

    Each ``s_prime[i]`` must be an entry of ``f_ctx`` (up to sign); its
    row partner ``Qt_i`` gives ``Q'_i = prod_j Q_j^{lam(Qt_i, P_j)}``.
    """
    n = f_ctx.n_qubits
    out = []
    for sp in s_prime:
        stabilizer_element(pi, sp)  # span check
        found = f_ctx.locate(sp)
        if found is None:
            raise ValueError(f"{sp.label()} is not an entry of the context frame")
        row, axis = found
        qt = f_ctx.entry(row, anticommuting_partner(axis))
        q_new = PauliOperator.identity(n)
        for p, q in pi.pairs:
            if commutator_form(qt, p):
                q_new = q_new * q
        out.append(q_new.positive())
    return out


def reduce_frame_by_prep(pi: PrepSet, F: PauliFrame) -> tuple[PrepSet, PauliFrame]:
    """Cheaper ``(Pi', F')`` with ``Prep(Pi); F`` equivalent to ``Prep(Pi'); F'``.

    ``F`` is the frame applied after the preparations. The stabilizers are
    mapped through ``F`` and brought to single-qubit form by an exact
    stabilizer search with auxiliary frame ``A``; in the coordinates of
    ``H = F^-1 o A`` every (new or old) stabilizer is a frame entry and can be
    decoupled from the rest of the frame. The input is returned unchanged when
    the result would be more expensive.
    """
    if len(pi) == 0:
        return pi, F
    n = F.n_qubits
    G = F.invert()
    s_tilde = [F.forward_action(p) for p in pi.stabilizers]
    search = find_stabilizers(s_tilde, "exact", n_qubits=n)
    A = search.frame
    meas = search.circuit.measurements()
    if len(meas) != len(pi):
        raise ValueError("preparation stabilizers are not independent")
    H = G.compose(A)

    # Candidate preparation set built from the searched single-qubit operators.
    new_stabs = [stabilizer_element(pi, H.entry(m.qubit, m.sigma)) for m in meas]
    new_destabs = destabilizers_from(pi, new_stabs, H)
    candidate = PrepSet(tuple(zip(new_stabs, new_destabs)))

    if prep_cost(candidate) < prep_cost(pi):
        result_pi = candidate
        Ht = H
        for p_new, q_new in zip(new_stabs, new_destabs):
            Ht = Ht.decouple(p_new, q_new)
    else:
        result_pi = pi
        Ht = H
        for m in meas:
            e = Ht.entry(m.qubit, m.sigma)
            match = [(p, q) for p, q in pi.pairs if p.same_up_to_sign(e)]
            if not match:  # pragma: no cover - excluded by the exact search
                raise AssertionError("decoupling target is not a stabilizer")
            Ht = Ht.decouple(*match[0])
    F_out = Ht.compose(A.invert()).invert()
    if F_out.cost() > F.cost():
        return pi, F
    return result_pi, F_out


# ---------------------------------------------------------------------------
# Node reduction
# ---------------------------------------------------------------------------

def _with_pauli(nd, r: PauliOperator):
    if isinstance(nd, Rot):
        return Rot(r, nd.theta)
    return Meas(r, nd.cid, nd.aliases)


def _is_singlet(nd) -> bool:
    return isinstance(nd, (Rot, Meas)) and not nd.paulis[0].is_identity()


def _mergeable_somewhere(g: PcoastGraph, k: int) -> bool:
    for other in range(len(g.nodes)):
        if other == k:
            continue
        i, j = (other, k) if other < k else (k, other)
        if merge(g.nodes[i], g.nodes[j]) is NOT_MERGEABLE:
            continue
        if not g.has_long_path(i, j):
            return True
    return False


def _terminal_meas(g: PcoastGraph, k: int) -> bool:
    return isinstance(g.nodes[k], Meas) and g.out_degree(k) == 0


def _rewrite_once(g: PcoastGraph, skip_terminal_meas: bool) -> PcoastGraph | None:
    for pi_idx, prep in enumerate(g.nodes):
        if not isinstance(prep, Prep):
            continue
        P = prep.Pz
        for k, nd in enumerate(g.nodes):
            if k == pi_idx or not _is_singlet(nd):
                continue
            if skip_terminal_meas and _terminal_meas(g, k):
                continue
            R = nd.paulis[0]
            if commutator_form(P, R):
                continue
            incomparable = not g.reachable(pi_idx, k) and not g.reachable(k, pi_idx)
            adjacent = k > pi_idx and (pi_idx, k) in g.edges and not g.has_long_path(pi_idx, k)
            if not (incomparable or adjacent):
                continue
            new_r = P * R
            replaced = _with_pauli(nd, new_r)
            lighter = new_r.weight() < R.weight()
            if incomparable and not lighter:
                continue
            candidate = g.reorder_around(pi_idx, k, [prep, replaced])
            if lighter:
                return candidate
            pos = len((g.ancestors(pi_idx) | g.ancestors(k)) - {pi_idx, k}) + 1
            if _mergeable_somewhere(candidate, pos):
                return normalize(candidate)
    return None


def reduce_nodes_by_prep(
    g: PcoastGraph, skip_terminal_meas: bool = False, max_rewrites: int | None = None
) -> PcoastGraph:
    """Apply preparation-on-node rewrites until none applies.

    For every ``Prep(P, Q)`` and every rotation or measurement ``n(R)`` with
    ``lam(P, R) = 0`` that is either incomparable with the preparation or its
    direct successor, ``R`` becomes ``P * R`` when that lowers the Pauli
    weight; a direct successor is also rewritten when the new node can merge.
    The rewritten node is placed right after the preparation. Ties keep ``R``.

    Parameters
    ----------
    skip_terminal_meas : bool
        Leave measurements without successors untouched.
    """
    limit = max_rewrites if max_rewrites is not None else 10 * max(len(g.nodes), 1)
    for _ in range(limit):
        nxt = _rewrite_once(g, skip_terminal_meas)
        if nxt is None:
            return g
        g = nxt
    raise RuntimeError("preparation-on-node rewriting exceeded its iteration cap")
