"""Greedy search for a TQE circuit that brings a commuting Pauli set to single-qubit form.

Given mutually commuting Paulis ``S`` the search finds a Clifford frame ``F``
such that every element of ``backward_action(F, S)`` agrees on its support at
every qubit, together with the circuit of TQE gates and single-qubit
measurements that realizes it.
"""
from __future__ import annotations

from typing import Callable, Iterable, NamedTuple, Sequence

from .circuit import Circuit, MeasSQ, TQE, max_tqe_bound
from .frame import PauliFrame, tqe_conjugate, tqe_frame
from .pauli import PauliOperator, commutator_form, mask

__all__ = [
    "AGREE_VACUOUS",
    "StabilizerResult",
    "agrees_on_support",
    "default_tqe_cost",
    "select_tqe",
    "find_stabilizers",
    "measured_paulis",
    "max_tqe_bound",
]

#: Returned by :func:`agrees_on_support` when no element touches the qubit.
AGREE_VACUOUS = "I"

_AXES = ("X", "Y", "Z")


class StabilizerResult(NamedTuple):
    circuit: Circuit
    frame: PauliFrame


def agrees_on_support(S: Iterable[PauliOperator], qubit: int) -> str | None:
    """Single-qubit axis on which every element of ``S`` agrees at ``qubit``.

    Returns ``"X"``, ``"Y"`` or ``"Z"`` when all non-identity factors at the
    qubit are that axis, :data:`AGREE_VACUOUS` when no element has support
    there and ``None`` when two elements disagree.
    """
    found = None
    for s in S:
        a = s.axis(qubit)
        if a == "I":
            continue
        if found is None:
            found = a
        elif a != found:
            return None
    return AGREE_VACUOUS if found is None else found


def _masked_weight(p: PauliOperator, qbits: int) -> int:
    return bin((p.x | p.z) & qbits).count("1")


def default_tqe_cost(gate: TQE, target: int, S: Sequence[PauliOperator], qbits: int) -> float:
    """``1 + 0.1 *`` (number of other elements whose masked support grows)."""
    grown = 0
    for k, s in enumerate(S):
        if k == target:
            continue
        t = tqe_conjugate(s, gate.sigma, gate.tau, gate.i, gate.j)
        if _masked_weight(t, qbits) > _masked_weight(s, qbits):
            grown += 1
    return 1.0 + 0.1 * grown


def _bits(qubits: Iterable[int]) -> int:
    m = 0
    for q in qubits:
        m |= 1 << q
    return m


def select_tqe(
    S: Sequence[PauliOperator],
    Q: Iterable[int],
    cost: Callable | None = None,
    axis_order: str = "XYZ",
) -> TQE:
    """Cheapest TQE gate on qubits of ``Q`` that shrinks a minimum-support element.

    The target is the first element of ``S`` whose support restricted to ``Q``
    is smallest. Candidate gates act on two qubits of that restricted
    support; ties in cost go to the first gate in ``(i, j, sigma, tau)``
    order with ``i < j`` and axes ordered by ``axis_order``.
    """
    cost = cost or default_tqe_cost
    qbits = _bits(Q)
    weights = [_masked_weight(s, qbits) for s in S]
    if not S:
        raise ValueError("empty working set")
    target = min(range(len(S)), key=lambda k: weights[k])
    s = S[target]
    if weights[target] < 2:
        raise ValueError("minimum-support element is already single-qubit")
    sup = sorted(q for q in range(s.n_qubits) if (qbits >> q & 1) and s.axis(q) != "I")
    best = None
    for a, i in enumerate(sup):
        for j in sup[a + 1 :]:
            for sigma in axis_order:
                for tau in axis_order:
                    g = TQE(sigma, tau, i, j)
                    t = tqe_conjugate(s, sigma, tau, i, j)
                    if _masked_weight(t, qbits) >= weights[target]:
                        continue
                    c = cost(g, target, S, qbits)
                    if best is None or c < best[0]:
                        best = (c, g)
    if best is None:  # pragma: no cover - a matching-axis gate always reduces support
        raise AssertionError("no support-reducing TQE gate exists")
    return best[1]


def _check_input(S: Sequence[PauliOperator]) -> list[PauliOperator]:
    out: list[PauliOperator] = []
    for s in S:
        if not s.is_hermitian():
            raise ValueError(f"{s.label()} is not Hermitian")
        if s.is_identity():
            raise ValueError("the input set contains a multiple of the identity")
        if any(s.same_up_to_sign(t) for t in out):
            continue
        out.append(s)
    for a in range(len(out)):
        for b in range(a + 1, len(out)):
            if commutator_form(out[a], out[b]):
                raise ValueError(f"{out[a].label()} and {out[b].label()} do not commute")
    return out


def find_stabilizers(
    S: Sequence[PauliOperator],
    mode: str = "general",
    *,
    literal_pseudocode: bool = False,
    axis_order: str = "XYZ",
    cost: Callable | None = None,
    n_qubits: int | None = None,
    cid_prefix: str = "m",
) -> StabilizerResult:
    """Run the stabilizer search on a mutually commuting set.

    Parameters
    ----------
    S : sequence of PauliOperator
        Mutually commuting, none proportional to the identity. Duplicates up to
        sign are dropped.
    mode : {"general", "exact"}
        ``"exact"`` measures a set spanning exactly ``Span(S)``; ``"general"``
        also measures any qubit on which the working set already agrees.
    literal_pseudocode : bool
        In general mode, scan for agreeing qubits only once before the main
        loop instead of after every gate.
    axis_order : str
        Permutation of ``"XYZ"`` used to order candidate gates for tie-breaks.
    cost : callable, optional
        ``cost(gate, target_index, working_set, qubit_mask)``.

    Returns
    -------
    StabilizerResult
        ``circuit`` holds TQE gates and single-qubit measurements in discovery
        order; ``frame`` is ``F`` with ``forward_action(F, sigma_q)`` equal to
        the pulled-back measured operator for every measured ``sigma_q``.
    """
    if mode not in ("general", "exact"):
        raise ValueError("mode must be 'general' or 'exact'")
    if sorted(axis_order) != ["X", "Y", "Z"]:
        raise ValueError("axis_order must be a permutation of XYZ")
    work = _check_input(S)
    if n_qubits is None:
        if not work:
            raise ValueError("cannot infer the qubit count of an empty set")
        n_qubits = work[0].n_qubits
    if any(s.n_qubits != n_qubits for s in work):
        raise ValueError("qubit-count mismatch in the input set")

    Q: set[int] = set()
    for s in work:
        Q |= s.support()
    F_acc = PauliFrame.identity(n_qubits)  # maps the input set onto the working set
    gates: list = []

    def measure(q: int, sigma: str) -> None:
        gates.append(MeasSQ(sigma, q, f"{cid_prefix}{sum(isinstance(g, MeasSQ) for g in gates)}"))
        Q.discard(q)

    def agreement_scan() -> None:
        for q in sorted(Q):
            a = agrees_on_support(work, q)
            if a is not None and a != AGREE_VACUOUS:
                measure(q, a)

    general = mode == "general"
    if general:
        agreement_scan()
    while Q:
        changed = True
        while changed:
            changed = False
            qbits = _bits(Q)
            kept = []
            for s in work:
                w = _masked_weight(s, qbits)
                if w == 0:
                    changed = True
                    continue
                if w == 1:
                    (q,) = [q for q in Q if s.axis(q) != "I"]
                    measure(q, s.axis(q))
                    qbits = _bits(Q)
                    changed = True
                    if _masked_weight(s, qbits) == 0:
                        continue
                kept.append(s)
            work = kept
        if not work or not Q:
            break
        g = select_tqe(work, Q, cost, axis_order)
        gates.append(g)
        work = [tqe_conjugate(s, g.sigma, g.tau, g.i, g.j) for s in work]
        F_acc = tqe_frame(g.sigma, g.tau, g.i, g.j, n_qubits).compose(F_acc)
        if general and not literal_pseudocode:
            agreement_scan()
    return StabilizerResult(Circuit(n_qubits, tuple(gates)), F_acc.invert())


def measured_paulis(result: StabilizerResult) -> list[PauliOperator]:
    """Pulled-back measured operators ``forward_action(F, sigma_q)`` in measurement order."""
    n = result.circuit.n_qubits
    return [result.frame.forward_action(m.pauli(n)) for m in result.circuit.measurements()]
