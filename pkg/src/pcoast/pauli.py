"""Exact arithmetic on the N-qubit Pauli group and its binary symplectic quotient.

A :class:`PauliOperator` stores a phase exponent ``k`` (global factor ``i**k``)
together with two bitsets ``x`` and ``z``; the operator is

    i**k * X**x * Z**z

where ``X**x`` is the tensor product of ``X`` on every qubit whose bit is set
in ``x`` (bit ``q`` is qubit ``q``). With this convention ``Y = i X Z`` so a
``Y`` factor is stored as ``x=z=1`` plus one phase increment.

Bitsets are plain Python integers, so every GF(2) operation is word-parallel
and there is no fixed upper limit on the qubit count.
"""
from __future__ import annotations

import re
from typing import Iterable, Iterator

__all__ = [
    "PauliOperator",
    "PauliSpaceVector",
    "commutator_form",
    "multiply",
    "mask",
    "parse_pauli",
    "parse_term",
    "SINGLE_QUBIT_AXES",
]

#: Canonical ordering used whenever a deterministic choice of axis is needed.
SINGLE_QUBIT_AXES = ("X", "Y", "Z")

_AXIS_BITS = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}
_BITS_AXIS = {v: k for k, v in _AXIS_BITS.items()}
_PHASE_PREFIX = {0: "+", 1: "+i", 2: "-", 3: "-i"}


def _popcount(v: int) -> int:
    return bin(v).count("1")


def _check_same_size(a, b) -> None:
    if a.n_qubits != b.n_qubits:
        raise ValueError(f"qubit-count mismatch: {a.n_qubits} vs {b.n_qubits}")


class PauliSpaceVector:
    """Phaseless Pauli: an element of the 2N-dimensional GF(2) space."""

    __slots__ = ("n_qubits", "x", "z")

    def __init__(self, n_qubits: int, x: int = 0, z: int = 0):
        limit = 1 << n_qubits
        if x < 0 or z < 0 or x >= limit or z >= limit:
            raise ValueError("bit vector does not fit in n_qubits")
        self.n_qubits = n_qubits
        self.x = x
        self.z = z

    def __add__(self, other: "PauliSpaceVector") -> "PauliSpaceVector":
        _check_same_size(self, other)
        return PauliSpaceVector(self.n_qubits, self.x ^ other.x, self.z ^ other.z)

    __xor__ = __add__

    def __eq__(self, other) -> bool:
        if not isinstance(other, PauliSpaceVector):
            return NotImplemented
        return (self.n_qubits, self.x, self.z) == (other.n_qubits, other.x, other.z)

    def __hash__(self) -> int:
        return hash(("psv", self.n_qubits, self.x, self.z))

    def __repr__(self) -> str:
        return f"PauliSpaceVector({self.embed().label(sign=False)})"

    def is_zero(self) -> bool:
        return self.x == 0 and self.z == 0

    def lam(self, other: "PauliSpaceVector") -> int:
        """Symplectic form with ``other`` (0 if the lifts commute)."""
        return commutator_form(self, other)

    def embed(self, sign: int = 1) -> "PauliOperator":
        """Canonically positive Hermitian representative, times ``sign``."""
        if sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        k = _popcount(self.x & self.z) + (0 if sign == 1 else 2)
        return PauliOperator(self.n_qubits, k, self.x, self.z)


class PauliOperator:
    """Immutable phased Pauli operator ``i**phase * X**x * Z**z``.

    Parameters
    ----------
    n_qubits : int
        Number of qubits.
    phase : int
        Exponent ``k`` of the global factor ``i**k`` (taken mod 4).
    x, z : int
        Bitsets; bit ``q`` refers to qubit ``q``.
    """

    __slots__ = ("n_qubits", "phase", "x", "z")

    def __init__(self, n_qubits: int, phase: int = 0, x: int = 0, z: int = 0):
        if n_qubits < 0:
            raise ValueError("n_qubits must be non-negative")
        limit = 1 << n_qubits
        if x < 0 or z < 0 or x >= limit or z >= limit:
            raise ValueError("bit vector does not fit in n_qubits")
        self.n_qubits = n_qubits
        self.phase = phase % 4
        self.x = x
        self.z = z

    # -- construction -----------------------------------------------------
    @classmethod
    def identity(cls, n_qubits: int) -> "PauliOperator":
        return cls(n_qubits)

    @classmethod
    def single(cls, n_qubits: int, qubit: int, axis: str) -> "PauliOperator":
        """``axis`` (one of I, X, Y, Z) acting on ``qubit``."""
        if not 0 <= qubit < n_qubits:
            raise ValueError(f"qubit {qubit} out of range for {n_qubits} qubits")
        xb, zb = _AXIS_BITS[axis]
        return cls(n_qubits, xb & zb, xb << qubit, zb << qubit)

    @classmethod
    def from_label(cls, label: str) -> "PauliOperator":
        """Parse ``[+|-][i]PAULIS`` such as ``-XYZ`` or ``+iZZ``."""
        return parse_pauli(label)

    @classmethod
    def from_sparse(cls, n_qubits: int, factors: dict[int, str], sign: int = 1) -> "PauliOperator":
        """Build from ``{qubit: axis}``, e.g. ``{0: 'Z', 3: 'X'}``."""
        p = cls(n_qubits, 0 if sign == 1 else 2)
        for q, a in factors.items():
            p = p * cls.single(n_qubits, q, a)
        return p

    # -- value semantics ---------------------------------------------------
    def __eq__(self, other) -> bool:
        if not isinstance(other, PauliOperator):
            return NotImplemented
        return (self.n_qubits, self.phase, self.x, self.z) == (
            other.n_qubits,
            other.phase,
            other.x,
            other.z,
        )

    def __hash__(self) -> int:
        return hash((self.n_qubits, self.phase, self.x, self.z))

    def __repr__(self) -> str:
        return f"PauliOperator('{self.label()}')"

    def __str__(self) -> str:
        return self.label()

    def __mul__(self, other: "PauliOperator") -> "PauliOperator":
        return multiply(self, other)

    def __neg__(self) -> "PauliOperator":
        return PauliOperator(self.n_qubits, self.phase + 2, self.x, self.z)

    def times_phase(self, k: int) -> "PauliOperator":
        """Multiply by ``i**k``."""
        return PauliOperator(self.n_qubits, self.phase + k, self.x, self.z)

    # -- queries -------------------------------------------------------------
    @property
    def label_phase(self) -> int:
        """Exponent of the phase written in front of the IXYZ label."""
        return (self.phase - _popcount(self.x & self.z)) % 4

    def is_hermitian(self) -> bool:
        return (self.phase + _popcount(self.x & self.z)) % 2 == 0

    @property
    def sign(self) -> int:
        """+1 or -1 for Hermitian operators."""
        lp = self.label_phase
        if lp % 2:
            raise ValueError(f"{self.label()} is not Hermitian")
        return 1 if lp == 0 else -1

    def is_identity(self) -> bool:
        """True when the operator is proportional to the identity."""
        return self.x == 0 and self.z == 0

    def support(self) -> frozenset[int]:
        bits = self.x | self.z
        return frozenset(q for q in range(self.n_qubits) if bits >> q & 1)

    @property
    def support_bits(self) -> int:
        return self.x | self.z

    def weight(self) -> int:
        return _popcount(self.x | self.z)

    def axis(self, qubit: int) -> str:
        """Single-qubit factor on ``qubit`` as one of I, X, Y, Z."""
        return _BITS_AXIS[(self.x >> qubit & 1, self.z >> qubit & 1)]

    def lift(self) -> PauliSpaceVector:
        return PauliSpaceVector(self.n_qubits, self.x, self.z)

    def positive(self) -> "PauliOperator":
        """Canonically positive representative of the same Pauli-space class."""
        return self.lift().embed(1)

    def commutes(self, other: "PauliOperator") -> bool:
        return commutator_form(self, other) == 0

    def same_up_to_sign(self, other: "PauliOperator") -> bool:
        return self.x == other.x and self.z == other.z and self.n_qubits == other.n_qubits

    def label(self, sign: bool = True) -> str:
        """Text form, qubit 0 leftmost, e.g. ``-XIZ`` or ``+iY``."""
        body = "".join(self.axis(q) for q in range(self.n_qubits))
        if not sign:
            return body
        return _PHASE_PREFIX[self.label_phase] + body

    def factors(self) -> Iterator[tuple[int, str]]:
        for q in sorted(self.support()):
            yield q, self.axis(q)


def multiply(p1: PauliOperator, p2: PauliOperator) -> PauliOperator:
    """Exact group product ``p1 * p2`` including the phase."""
    _check_same_size(p1, p2)
    # Z^z1 X^x2 = (-1)^{z1.x2} X^x2 Z^z1
    k = p1.phase + p2.phase + 2 * _popcount(p1.z & p2.x)
    return PauliOperator(p1.n_qubits, k, p1.x ^ p2.x, p1.z ^ p2.z)


def commutator_form(p, q) -> int:
    """λ(p, q): 0 when the operators commute, 1 when they anticommute.

    Accepts either :class:`PauliOperator` or :class:`PauliSpaceVector`.
    """
    _check_same_size(p, q)
    return _popcount((p.x & q.z) ^ (p.z & q.x)) & 1


def mask(p: PauliOperator, qubits: Iterable[int]) -> PauliOperator:
    """Restrict ``p`` to ``qubits`` while keeping its written phase.

    The result is ``phase(p)`` times the product of the single-qubit factors of
    ``p`` on the selected qubits.
    """
    m = 0
    for q in qubits:
        if not 0 <= q < p.n_qubits:
            raise ValueError(f"qubit {q} out of range for {p.n_qubits} qubits")
        m |= 1 << q
    x, z = p.x & m, p.z & m
    return PauliOperator(p.n_qubits, p.label_phase + _popcount(x & z), x, z)


_LABEL_RE = re.compile(r"^\s*([+-]?)(i?)([IXYZ]+)\s*$")


def parse_pauli(text: str) -> PauliOperator:
    """Parse a signed Pauli string like ``-XYZI`` (qubit 0 leftmost)."""
    m = _LABEL_RE.match(text)
    if not m:
        raise ValueError(f"malformed Pauli string: {text!r}")
    sign, imag, body = m.groups()
    x = z = 0
    n_y = 0
    for q, ch in enumerate(body):
        xb, zb = _AXIS_BITS[ch]
        x |= xb << q
        z |= zb << q
        n_y += xb & zb
    k = n_y + (2 if sign == "-" else 0) + (1 if imag else 0)
    return PauliOperator(len(body), k, x, z)


_TERM_RE = re.compile(
    r"^\s*([+-]?)\s*((?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?\s*([IXYZ]+)\s*$"
)


def parse_term(text: str) -> tuple[float, PauliOperator]:
    """Parse ``[sign] [coefficient] PAULIS`` such as ``-0.5 XYZI``.

    Returns the real coefficient (default 1) and the positive Pauli operator.
    """
    m = _TERM_RE.match(text)
    if not m:
        raise ValueError(f"malformed Pauli term: {text!r}")
    sign, coeff, body = m.groups()
    c = float(coeff) if coeff else 1.0
    if sign == "-":
        c = -c
    return c, parse_pauli(body)
