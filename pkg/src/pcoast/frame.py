"""Pauli frames: signed tableaus representing Clifford unitaries.

A frame on N qubits is a list of rows ``(effZ_i, effX_i)`` of signed Hermitian
Paulis obeying the canonical commutation relations. It stands for the Clifford
``U`` with ``U Z_i U^dag = effZ_i`` and ``U X_i U^dag = effX_i``; the
:meth:`PauliFrame.forward_action` of a frame is conjugation by ``U`` and the
:meth:`PauliFrame.backward_action` is conjugation by ``U^dag``.
"""
from __future__ import annotations

import json
from typing import Iterable, Sequence

from .pauli import PauliOperator, commutator_form, parse_pauli

__all__ = [
    "PauliFrame",
    "tqe_frame",
    "tqe_conjugate",
    "single_qubit_clifford",
    "pauli_frame",
    "rotation_frame",
    "frame_to_circuit",
]


class PauliFrame:
    """Immutable signed Pauli frame.

    Parameters
    ----------
    rows : sequence of (PauliOperator, PauliOperator)
        ``(effZ_i, effX_i)`` for every qubit ``i``.
    check : bool
        Validate commutation relations and Hermiticity on construction.
    """

    __slots__ = ("n_qubits", "rows", "_inverse")

    def __init__(self, rows: Sequence[tuple[PauliOperator, PauliOperator]], check: bool = True):
        rows = tuple((z, x) for z, x in rows)
        self.n_qubits = len(rows)
        self.rows = rows
        self._inverse = None
        for z, x in rows:
            if z.n_qubits != self.n_qubits or x.n_qubits != self.n_qubits:
                raise ValueError("frame entries must act on n_qubits qubits")
        if check and not self.validate():
            raise ValueError("rows violate the frame commutation relations")

    # -- construction -------------------------------------------------------
    @classmethod
    def identity(cls, n_qubits: int) -> "PauliFrame":
        return cls(
            [
                (PauliOperator.single(n_qubits, q, "Z"), PauliOperator.single(n_qubits, q, "X"))
                for q in range(n_qubits)
            ],
            check=False,
        )

    @classmethod
    def from_labels(cls, rows: Iterable[tuple[str, str]]) -> "PauliFrame":
        return cls([(parse_pauli(z), parse_pauli(x)) for z, x in rows])

    # -- value semantics ------------------------------------------------------
    def __eq__(self, other) -> bool:
        if not isinstance(other, PauliFrame):
            return NotImplemented
        return self.rows == other.rows

    def __hash__(self) -> int:
        return hash(self.rows)

    def __repr__(self) -> str:
        body = "; ".join(f"{z.label()}, {x.label()}" for z, x in self.rows)
        return f"PauliFrame({body})"

    def eff_z(self, i: int) -> PauliOperator:
        return self.rows[i][0]

    def eff_x(self, i: int) -> PauliOperator:
        return self.rows[i][1]

    def eff_y(self, i: int) -> PauliOperator:
        """``-i * effZ_i * effX_i``, the image of ``Y_i``."""
        z, x = self.rows[i]
        return (z * x).times_phase(3)

    def entry(self, i: int, axis: str) -> PauliOperator:
        """Image of the single-qubit Pauli ``axis`` on qubit ``i``."""
        if axis == "Z":
            return self.eff_z(i)
        if axis == "X":
            return self.eff_x(i)
        if axis == "Y":
            return self.eff_y(i)
        raise ValueError(f"unknown axis {axis!r}")

    def is_identity(self) -> bool:
        return self == PauliFrame.identity(self.n_qubits)

    # -- checks -----------------------------------------------------------------
    def validate(self) -> bool:
        """True iff entries are Hermitian and satisfy the canonical relations."""
        n = self.n_qubits
        for z, x in self.rows:
            if z.n_qubits != n or x.n_qubits != n:
                return False
            if not (z.is_hermitian() and x.is_hermitian()):
                return False
        for i in range(n):
            zi, xi = self.rows[i]
            for j in range(i, n):
                zj, xj = self.rows[j]
                if commutator_form(zi, zj) or commutator_form(xi, xj):
                    return False
                if commutator_form(zi, xj) != (i == j) or commutator_form(xi, zj) != (i == j):
                    return False
        return True

    # -- actions -------------------------------------------------------------------
    def forward_action(self, p: PauliOperator) -> PauliOperator:
        """Conjugation ``U p U^dag`` with signs tracked exactly."""
        if p.n_qubits != self.n_qubits:
            raise ValueError("qubit-count mismatch")
        out = PauliOperator(self.n_qubits, p.phase)
        for q in range(self.n_qubits):
            if p.x >> q & 1:
                out = out * self.rows[q][1]
        for q in range(self.n_qubits):
            if p.z >> q & 1:
                out = out * self.rows[q][0]
        return out

    def backward_action(self, p: PauliOperator) -> PauliOperator:
        """Conjugation ``U^dag p U``; the inverse of :meth:`forward_action`."""
        return self.invert().forward_action(p)

    def _preimage_class(self, p: PauliOperator) -> PauliOperator:
        # Pauli-space preimage: coefficient of [Z_i] is lam(p, effX_i), of [X_i] is lam(p, effZ_i).
        x = z = 0
        for i, (ez, ex) in enumerate(self.rows):
            if commutator_form(p, ex):
                z |= 1 << i
            if commutator_form(p, ez):
                x |= 1 << i
        return PauliOperator(self.n_qubits, bin(x & z).count("1"), x, z)

    def invert(self) -> "PauliFrame":
        """Frame whose forward action is this frame's backward action."""
        if self._inverse is None:
            n = self.n_qubits
            rows = []
            for q in range(n):
                pair = []
                for axis in ("Z", "X"):
                    target = PauliOperator.single(n, q, axis)
                    cand = self._preimage_class(target)
                    img = self.forward_action(cand)
                    # img equals target up to a phase; the phase is a sign because both are Hermitian.
                    cand = cand.times_phase(target.phase - img.phase)
                    pair.append(cand)
                rows.append(tuple(pair))
            inv = PauliFrame(rows, check=False)
            inv._inverse = self
            self._inverse = inv
        return self._inverse

    def compose(self, inner: "PauliFrame") -> "PauliFrame":
        """``self ∘ inner``: forward action of ``self`` applied to ``inner``'s rows.

        The composite forward action is ``self.forward_action(inner.forward_action(p))``;
        as unitaries this is ``U_self U_inner`` (``inner`` acts first).
        """
        if inner.n_qubits != self.n_qubits:
            raise ValueError("qubit-count mismatch")
        return PauliFrame(
            [(self.forward_action(z), self.forward_action(x)) for z, x in inner.rows], check=False
        )

    def __matmul__(self, inner: "PauliFrame") -> "PauliFrame":
        return self.compose(inner)

    # -- decoupling -----------------------------------------------------------------
    def locate(self, p: PauliOperator) -> tuple[int, str] | None:
        """Row and axis whose entry equals ``p`` up to sign, or ``None``."""
        for i in range(self.n_qubits):
            for axis in ("Z", "X", "Y"):
                if self.entry(i, axis).same_up_to_sign(p):
                    return i, axis
        return None

    def decouple(self, p: PauliOperator, q: PauliOperator) -> "PauliFrame":
        """Isolate the anticommuting pair ``(p, q)`` into a single row.

        ``p`` must be an entry of the frame up to sign; that entry ``e`` keeps
        its sign and its slot (Z, X or Y) and ``q`` becomes its partner in the
        row. Every other entry ``f`` becomes ``f * p`` (with the sign of ``p``)
        when it anticommutes with ``q``.
        """
        if not (p.is_hermitian() and q.is_hermitian()):
            raise ValueError("decouple pair must be Hermitian")
        if commutator_form(p, q) != 1:
            raise ValueError("decouple pair must anticommute")
        found = self.locate(p)
        if found is None:
            raise ValueError(f"{p.label()} is not an entry of the frame")
        row, axis = found
        e = self.entry(row, axis)
        if axis == "Z":
            pair = (e, q)
        elif axis == "X":
            pair = (q, e)
        else:
            # effY = -i effZ effX = e with effZ = q requires effX = i q e.
            pair = (q, (q * e).times_phase(1))
        new_rows = []
        for i, (ez, ex) in enumerate(self.rows):
            if i == row:
                new_rows.append(pair)
                continue
            nz = ez * p if commutator_form(ez, q) else ez
            nx = ex * p if commutator_form(ex, q) else ex
            new_rows.append((nz, nx))
        return PauliFrame(new_rows, check=False)

    # -- cost and serialization -------------------------------------------------------------
    def cost(self) -> int:
        """Total weight of all entries minus ``2N`` (zero for the identity frame)."""
        return sum(z.weight() + x.weight() for z, x in self.rows) - 2 * self.n_qubits

    def to_dict(self) -> dict:
        return {"n": self.n_qubits, "rows": [[z.label(), x.label()] for z, x in self.rows]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "PauliFrame":
        frame = cls.from_labels(data["rows"])
        if frame.n_qubits != data["n"]:
            raise ValueError("row count does not match n")
        return frame

    @classmethod
    def from_json(cls, text: str) -> "PauliFrame":
        return cls.from_dict(json.loads(text))


# ---------------------------------------------------------------------------
# Gate frames
# ---------------------------------------------------------------------------

def tqe_conjugate(p: PauliOperator, sigma: str, tau: str, i: int, j: int) -> PauliOperator:
    """Conjugate ``p`` by the TQE gate ``(I + σ_i + τ_j - σ_i τ_j)/2``.

    With ``A = σ_i`` and ``B = τ_j``: a Pauli anticommuting only with ``A``
    maps to ``p*B``, one anticommuting only with ``B`` maps to ``p*A`` and one
    anticommuting with both maps to ``-p*A*B``.
    """
    n = p.n_qubits
    a = PauliOperator.single(n, i, sigma)
    b = PauliOperator.single(n, j, tau)
    la, lb = commutator_form(p, a), commutator_form(p, b)
    if la and lb:
        return -(p * a * b)
    if la:
        return p * b
    if lb:
        return p * a
    return p


def tqe_frame(sigma: str, tau: str, i: int, j: int, n_qubits: int) -> PauliFrame:
    """Frame of the two-qubit entangling gate with axes ``σ`` on ``i`` and ``τ`` on ``j``.

    ``tqe_frame('Z', 'X', c, t, n)`` is CNOT with control ``c`` and target ``t``;
    ``('Z', 'Z')`` is CZ. Every TQE gate is self-inverse.
    """
    if i == j:
        raise ValueError("TQE gate needs two distinct qubits")
    for q in (i, j):
        if not 0 <= q < n_qubits:
            raise ValueError(f"qubit {q} out of range")
    base = PauliFrame.identity(n_qubits)
    rows = list(base.rows)
    for q in (i, j):
        z, x = rows[q]
        rows[q] = (tqe_conjugate(z, sigma, tau, i, j), tqe_conjugate(x, sigma, tau, i, j))
    return PauliFrame(rows, check=False)


#: Named single-qubit Cliffords as (image of Z, image of X) on one qubit.
_NAMED_1Q = {
    "I": ("+Z", "+X"),
    "H": ("+X", "+Z"),
    "S": ("+Z", "+Y"),
    "SDG": ("+Z", "-Y"),
    "X": ("-Z", "+X"),
    "Y": ("-Z", "-X"),
    "Z": ("+Z", "-X"),
    # Y-basis change: maps Y to Z (and Z to X); conjugation by H.S^dag.
    "HSDG": ("+X", "+Y"),
}


def single_qubit_clifford(
    qubit: int, n_qubits: int, images: tuple[str, str] | str
) -> PauliFrame:
    """Frame acting on one qubit only.

    ``images`` is either a name from ``H, S, SDG, X, Y, Z, I, HSDG`` or a pair
    of signed single-qubit labels giving the images of ``Z`` and ``X``.
    """
    if isinstance(images, str):
        images = _NAMED_1Q[images]
    zl, xl = images
    rows = list(PauliFrame.identity(n_qubits).rows)
    rows[qubit] = (_embed_1q(zl, qubit, n_qubits), _embed_1q(xl, qubit, n_qubits))
    return PauliFrame(rows)


def _embed_1q(label: str, qubit: int, n_qubits: int) -> PauliOperator:
    p = parse_pauli(label)
    if p.n_qubits != 1:
        raise ValueError("single-qubit label expected")
    return PauliOperator(n_qubits, p.phase, p.x << qubit, p.z << qubit)


def pauli_frame(p: PauliOperator) -> PauliFrame:
    """Frame of conjugation by the Pauli ``p`` (sign flips only)."""
    rows = []
    for z, x in PauliFrame.identity(p.n_qubits).rows:
        rows.append((-z if commutator_form(z, p) else z, -x if commutator_form(x, p) else x))
    return PauliFrame(rows, check=False)


def rotation_frame(p: PauliOperator, quarter_turns: int) -> PauliFrame:
    """Frame of ``exp(-i θ/2 p)`` for ``θ = quarter_turns * π/2``.

    An operator ``q`` anticommuting with ``p`` maps to ``(cos θ - i sin θ p) q``.
    """
    if not p.is_hermitian():
        raise ValueError("rotation axis must be Hermitian")
    t = quarter_turns % 4

    def image(q: PauliOperator) -> PauliOperator:
        if not commutator_form(q, p):
            return q
        if t == 0:
            return q
        if t == 2:
            return -q
        # sin θ = +1 for t == 1, -1 for t == 3
        return (p * q).times_phase(3 if t == 1 else 1)

    rows = [(image(z), image(x)) for z, x in PauliFrame.identity(p.n_qubits).rows]
    return PauliFrame(rows, check=False)


def frame_to_circuit(frame: PauliFrame):
    """Gate circuit (TQE plus single-qubit Cliffords) whose frame equals ``frame``."""
    from .circuit import synthesize_frame

    return synthesize_frame(frame)
