"""CNOT-ladder baseline for measuring commuting Pauli products one at a time."""
from __future__ import annotations

from typing import Sequence

import numpy as np

from .circuit import Circuit, Clifford1Q, MeasSQ, TQE
from .pauli import PauliOperator, commutator_form

__all__ = ["ladder_circuit", "ladder_statistics_check", "basis_change"]


def basis_change(axis: str, qubit: int) -> Clifford1Q | None:
    """Single-qubit Clifford taking ``axis`` to ``+Z`` (``None`` for Z)."""
    if axis == "Z":
        return None
    if axis == "X":
        return Clifford1Q.named("H", qubit)
    if axis == "Y":
        return Clifford1Q.named("HSDG", qubit)
    raise ValueError(f"no basis change for axis {axis!r}")


def _check(observables: Sequence[PauliOperator]) -> int:
    if not observables:
        raise ValueError("at least one observable is required")
    n = observables[0].n_qubits
    for a, p in enumerate(observables):
        if p.n_qubits != n:
            raise ValueError("qubit-count mismatch")
        if p.is_identity():
            raise ValueError("identity observable")
        for q in observables[a + 1 :]:
            if commutator_form(p, q):
                raise ValueError(f"{p.label()} and {q.label()} do not commute")
    return n


def ladder_circuit(
    observables: Sequence[PauliOperator], uncompute_last: bool = False, cid_prefix: str = "l"
) -> Circuit:
    """Measure each observable with a basis change, a CNOT chain and one ``MEASZ``.

    The chain runs along the support in ascending order and ends on the
    highest support qubit, which is measured. Before the next observable the
    chain and the basis changes are undone in reverse order, restoring the
    computational frame. The final observable is left uncomputed unless
    ``uncompute_last`` is set. Observable signs are ignored: outcome ``b``
    stands for the eigenvalue ``(-1)^b`` of the unsigned product.
    """
    n = _check(observables)
    return Circuit(n, tuple(_ladder_gates(observables, uncompute_last, cid_prefix)))


def _ladder_gates(observables, uncompute_last: bool, cid_prefix: str) -> list:
    gates: list = []
    for idx, p in enumerate(observables):
        sup = sorted(p.support())
        basis = [g for g in (basis_change(p.axis(q), q) for q in sup) if g is not None]
        chain = [TQE("Z", "X", a, b) for a, b in zip(sup, sup[1:])]
        gates += basis + chain
        gates.append(MeasSQ("Z", sup[-1], f"{cid_prefix}{idx}"))
        if idx + 1 < len(observables) or uncompute_last:
            gates += chain[::-1] + [g.inverse() for g in basis[::-1]]
    return gates


def _as_density(state: np.ndarray) -> np.ndarray:
    state = np.asarray(state, dtype=complex)
    if state.ndim == 1:
        state = state / np.linalg.norm(state)
        return np.outer(state, state.conj())
    return state


def ladder_statistics_check(
    observables: Sequence[PauliOperator], state: np.ndarray
) -> list[tuple[float, float]]:
    """``(sequential, direct)`` expectation pairs for every observable.

    ``sequential`` is the outcome-weighted mean of ``(-1)^b`` for the ladder
    circuit's measurement of the observable (times its sign), computed on
    the dense state with all earlier measurements applied; ``direct`` is
    ``tr(rho P)``. The observables are not checked for commutation here, so
    the check can also demonstrate where sequential measurement breaks down.
    """
    from .oracle import DenseChannel, circuit_to_nodes, pauli_matrix

    n = observables[0].n_qubits
    rho = _as_density(state)
    if rho.shape != (2**n, 2**n):
        raise ValueError("state dimension does not match the observables")
    circ = Circuit(n, tuple(_ladder_gates(observables, True, "l")))
    branches = DenseChannel(n, circuit_to_nodes(circ)).branches(rho)

    out = []
    for idx, p in enumerate(observables):
        seq = 0.0
        for key, r in branches.items():
            bit = dict(key)[f"l{idx}"]
            seq += (-1) ** bit * float(np.real(np.trace(r)))
        seq *= p.sign
        direct = float(np.real(np.trace(rho @ pauli_matrix(p))))
        out.append((seq, direct))
    return out
