"""Sorted-insertion grouping of weighted Pauli terms into commuting sets."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .pauli import PauliOperator, commutator_form, parse_pauli, parse_term

__all__ = [
    "WeightedTerm",
    "Grouping",
    "InputError",
    "sorted_insertion",
    "read_terms",
    "read_pauli_set",
]


class InputError(ValueError):
    """Malformed input file; ``line`` is 1-based."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class WeightedTerm:
    coefficient: float
    pauli: PauliOperator

    def __post_init__(self):
        if not math.isfinite(self.coefficient):
            raise ValueError("coefficient must be finite")
        if not self.pauli.is_hermitian():
            raise ValueError("term operator must be Hermitian")
        # Fold the operator's sign into the coefficient.
        if self.pauli.sign == -1:
            object.__setattr__(self, "coefficient", -self.coefficient)
            object.__setattr__(self, "pauli", -self.pauli)


@dataclass
class Grouping:
    """Commuting groups plus the summed coefficient of identity terms."""

    groups: list[list[WeightedTerm]] = field(default_factory=list)
    offset: float = 0.0

    def __len__(self) -> int:
        return len(self.groups)

    def paulis(self, index: int) -> list[PauliOperator]:
        return [t.pauli for t in self.groups[index]]

    def to_dict(self) -> dict:
        return {
            "offset": self.offset,
            "groups": [
                [{"coefficient": t.coefficient, "pauli": t.pauli.label(sign=False)} for t in grp]
                for grp in self.groups
            ],
        }


def sorted_insertion(terms: Iterable[WeightedTerm]) -> Grouping:
    """Greedy grouping by descending ``|coefficient|``.

    Each term joins the first existing group whose members it all commutes
    with (full, not qubit-wise, commutation) or opens a new group. The sort is
    stable, so equal magnitudes keep their input order. Identity terms go to
    :attr:`Grouping.offset`.
    """
    out = Grouping()
    ordered = sorted(terms, key=lambda t: -abs(t.coefficient))
    for t in ordered:
        if t.pauli.is_identity():
            out.offset += t.coefficient
            continue
        for grp in out.groups:
            if all(commutator_form(t.pauli, u.pauli) == 0 for u in grp):
                grp.append(t)
                break
        else:
            out.groups.append([t])
    return out


def _content_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def read_terms(text: str) -> list[WeightedTerm]:
    """Parse ``coefficient PAULI`` lines; ``#`` starts a comment."""
    terms: list[WeightedTerm] = []
    n = None
    for lineno, line in _content_lines(text):
        try:
            c, p = parse_term(line)
            term = WeightedTerm(c, p)
        except ValueError as exc:
            raise InputError(lineno, str(exc)) from None
        if n is not None and p.n_qubits != n:
            raise InputError(lineno, f"expected {n} qubits, found {p.n_qubits}")
        n = p.n_qubits
        terms.append(term)
    if not terms:
        raise InputError(0, "no terms found")
    return terms


def read_pauli_set(text: str) -> list[PauliOperator]:
    """Parse one signed Pauli string per line; ``#`` starts a comment."""
    out: list[PauliOperator] = []
    for lineno, line in _content_lines(text):
        try:
            p = parse_pauli(line)
        except ValueError as exc:
            raise InputError(lineno, str(exc)) from None
        if not p.is_hermitian():
            raise InputError(lineno, f"{line} is not Hermitian")
        if out and p.n_qubits != out[0].n_qubits:
            raise InputError(lineno, f"expected {out[0].n_qubits} qubits, found {p.n_qubits}")
        out.append(p)
    if not out:
        raise InputError(0, "no Pauli strings found")
    return out
