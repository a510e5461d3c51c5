"""Gate-level circuit IR with cost and depth statistics."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

from .frame import PauliFrame, single_qubit_clifford, tqe_frame
from .pauli import PauliOperator, commutator_form

__all__ = [
    "TQE",
    "Clifford1Q",
    "MeasSQ",
    "PrepSQ",
    "RotSQ",
    "Gate",
    "Circuit",
    "CircuitStats",
    "r2q",
    "max_tqe_bound",
    "aggregate_stats",
    "synthesize_frame",
]


@dataclass(frozen=True)
class TQE:
    """Two-qubit entangling Clifford with axis ``sigma`` on ``i`` and ``tau`` on ``j``."""

    sigma: str
    tau: str
    i: int
    j: int

    def __post_init__(self):
        if self.i == self.j:
            raise ValueError("TQE gate needs two distinct qubits")
        for a in (self.sigma, self.tau):
            if a not in ("X", "Y", "Z"):
                raise ValueError(f"bad TQE axis {a!r}")

    @property
    def qubits(self) -> tuple[int, ...]:
        return (self.i, self.j)

    def frame(self, n_qubits: int) -> PauliFrame:
        return tqe_frame(self.sigma, self.tau, self.i, self.j, n_qubits)

    def text(self) -> str:
        return f"TQE {self.sigma}{self.i} {self.tau}{self.j}"


@dataclass(frozen=True)
class Clifford1Q:
    """Single-qubit Clifford given by the signed images of Z and X."""

    qubit: int
    z_image: str
    x_image: str
    name: str = ""

    @property
    def qubits(self) -> tuple[int, ...]:
        return (self.qubit,)

    def frame(self, n_qubits: int) -> PauliFrame:
        return single_qubit_clifford(self.qubit, n_qubits, (self.z_image, self.x_image))

    def inverse(self) -> "Clifford1Q":
        f = single_qubit_clifford(0, 1, (self.z_image, self.x_image)).invert()
        z, x = f.rows[0]
        return Clifford1Q(self.qubit, z.label(), x.label())

    def text(self) -> str:
        if self.name:
            return f"{self.name} {self.qubit}"
        return f"C1 {self.qubit} Z->{self.z_image} X->{self.x_image}"

    @classmethod
    def named(cls, name: str, qubit: int) -> "Clifford1Q":
        f = single_qubit_clifford(0, 1, name)
        z, x = f.rows[0]
        return cls(qubit, z.label(), x.label(), name)


@dataclass(frozen=True)
class MeasSQ:
    """Projective single-qubit measurement of ``sigma`` recorded to ``cid``."""

    sigma: str
    qubit: int
    cid: str

    @property
    def qubits(self) -> tuple[int, ...]:
        return (self.qubit,)

    def pauli(self, n_qubits: int) -> PauliOperator:
        return PauliOperator.single(n_qubits, self.qubit, self.sigma)

    def text(self) -> str:
        return f"MEAS{self.sigma} {self.qubit} -> {self.cid}"


@dataclass(frozen=True)
class PrepSQ:
    """Reset of ``qubit`` to the +1 eigenstate of ``sigma``."""

    sigma: str
    qubit: int

    @property
    def qubits(self) -> tuple[int, ...]:
        return (self.qubit,)

    def text(self) -> str:
        return f"PREP{self.sigma} {self.qubit}"


@dataclass(frozen=True)
class RotSQ:
    """``exp(-i angle/2 sigma)`` on one qubit."""

    sigma: str
    qubit: int
    angle: float

    @property
    def qubits(self) -> tuple[int, ...]:
        return (self.qubit,)

    def text(self) -> str:
        return f"ROT{self.sigma} {self.qubit} {self.angle!r}"


Gate = Union[TQE, Clifford1Q, MeasSQ, PrepSQ, RotSQ]


@dataclass(frozen=True)
class CircuitStats:
    total_gates: int
    two_qubit_gates: int
    depth: int
    n_measurements: int

    def as_dict(self) -> dict:
        return {
            "total_gates": self.total_gates,
            "two_qubit_gates": self.two_qubit_gates,
            "depth": self.depth,
            "n_measurements": self.n_measurements,
        }


@dataclass(frozen=True)
class Circuit:
    """Ordered gate list on ``n_qubits`` qubits."""

    n_qubits: int
    gates: tuple = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        seen = set()
        for g in self.gates:
            for q in g.qubits:
                if not 0 <= q < self.n_qubits:
                    raise ValueError(f"gate {g.text()} touches qubit {q} outside the register")
            if isinstance(g, MeasSQ):
                if g.cid in seen:
                    raise ValueError(f"classical id {g.cid!r} written twice")
                seen.add(g.cid)

    def __len__(self) -> int:
        return len(self.gates)

    def __iter__(self):
        return iter(self.gates)

    def append(self, *gates: Gate) -> "Circuit":
        return Circuit(self.n_qubits, self.gates + tuple(gates))

    @property
    def classical_ids(self) -> list[str]:
        return [g.cid for g in self.gates if isinstance(g, MeasSQ)]

    def measurements(self) -> list[MeasSQ]:
        return [g for g in self.gates if isinstance(g, MeasSQ)]

    def tqe_count(self) -> int:
        return sum(isinstance(g, TQE) for g in self.gates)

    def frame(self) -> PauliFrame:
        """Frame of the unitary part (measurements and preparations are skipped)."""
        f = PauliFrame.identity(self.n_qubits)
        for g in self.gates:
            if isinstance(g, (TQE, Clifford1Q)):
                f = g.frame(self.n_qubits).compose(f)
            elif isinstance(g, RotSQ):
                raise ValueError("circuit contains a non-Clifford rotation")
        return f

    def stats(self) -> CircuitStats:
        """Gate counts and greedy per-qubit depth.

        Every gate, including measurements and preparations, occupies one layer
        on each qubit it touches.
        """
        level = [0] * self.n_qubits
        two_q = n_meas = 0
        for g in self.gates:
            qs = g.qubits
            layer = max(level[q] for q in qs) + 1
            for q in qs:
                level[q] = layer
            if len(qs) == 2:
                two_q += 1
            if isinstance(g, MeasSQ):
                n_meas += 1
        return CircuitStats(len(self.gates), two_q, max(level, default=0), n_meas)

    # -- serialization ----------------------------------------------------------
    def to_text(self) -> str:
        return "\n".join(g.text() for g in self.gates)

    def to_records(self) -> list[dict]:
        out = []
        for g in self.gates:
            if isinstance(g, TQE):
                out.append({"gate": "TQE", "sigma": g.sigma, "tau": g.tau, "i": g.i, "j": g.j})
            elif isinstance(g, Clifford1Q):
                rec = {"gate": "C1", "qubit": g.qubit, "z": g.z_image, "x": g.x_image}
                if g.name:
                    rec["name"] = g.name
                out.append(rec)
            elif isinstance(g, MeasSQ):
                out.append({"gate": "MEAS", "sigma": g.sigma, "qubit": g.qubit, "cid": g.cid})
            elif isinstance(g, PrepSQ):
                out.append({"gate": "PREP", "sigma": g.sigma, "qubit": g.qubit})
            else:
                out.append({"gate": "ROT", "sigma": g.sigma, "qubit": g.qubit, "angle": g.angle})
        return out

    def to_dict(self) -> dict:
        return {"n": self.n_qubits, "gates": self.to_records()}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "Circuit":
        gates: list[Gate] = []
        for rec in data["gates"]:
            kind = rec["gate"]
            if kind == "TQE":
                gates.append(TQE(rec["sigma"], rec["tau"], rec["i"], rec["j"]))
            elif kind == "C1":
                gates.append(Clifford1Q(rec["qubit"], rec["z"], rec["x"], rec.get("name", "")))
            elif kind == "MEAS":
                gates.append(MeasSQ(rec["sigma"], rec["qubit"], rec["cid"]))
            elif kind == "PREP":
                gates.append(PrepSQ(rec["sigma"], rec["qubit"]))
            elif kind == "ROT":
                gates.append(RotSQ(rec["sigma"], rec["qubit"], float(rec["angle"])))
            else:
                raise ValueError(f"unknown gate record {kind!r}")
        return cls(data["n"], tuple(gates))

    @classmethod
    def from_json(cls, text: str) -> "Circuit":
        return cls.from_dict(json.loads(text))


def max_tqe_bound(n_qubits: int, k: int) -> int:
    """Worst-case TQE count ``N k - k (k + 1) / 2`` of the stabilizer search."""
    if k > n_qubits or k < 0:
        raise ValueError("k must lie in [0, N]")
    return n_qubits * k - k * (k + 1) // 2


def r2q(n_qubits: float, k: float, two_qubit_gates: float) -> float | None:
    """Ratio of the worst-case TQE count to the achieved two-qubit count.

    Returns ``None`` (printed as ``-``) when no two-qubit gate was used.
    """
    if two_qubit_gates == 0:
        return None
    return (n_qubits * k - k * (k + 1) / 2) / two_qubit_gates


def aggregate_stats(n_qubits: int, rows: Sequence[dict]) -> dict:
    """Arithmetic means over per-group records with keys ``k`` and the stats fields.

    The aggregate ``r_2q`` divides the mean worst-case TQE count by the mean
    achieved two-qubit count, so groups that need no entangling gate still
    contribute to the numerator.
    """
    if not rows:
        return {"total_gates": 0.0, "two_qubit_gates": 0.0, "depth": 0.0, "k": 0.0, "r_2q": None}
    m = len(rows)
    mean = {key: sum(r[key] for r in rows) / m for key in ("total_gates", "two_qubit_gates", "depth", "k")}
    bound = sum(max_tqe_bound(n_qubits, r["k"]) for r in rows) / m
    mean["r_2q"] = None if mean["two_qubit_gates"] == 0 else bound / mean["two_qubit_gates"]
    return mean


# ---------------------------------------------------------------------------
# Frame synthesis
# ---------------------------------------------------------------------------

def _to_z_clifford(axis: str, qubit: int) -> Clifford1Q:
    # Single-qubit Clifford whose frame maps `axis` onto Z.
    return {
        "X": Clifford1Q.named("H", qubit),
        "Y": Clifford1Q(qubit, "+Y", "+X"),
    }[axis]


def synthesize_frame(frame: PauliFrame) -> Circuit:
    """Circuit of TQE and single-qubit Clifford gates realizing ``frame``.

    Row ``q`` is reduced to ``(Z_q, X_q)`` for ``q = 0, 1, ...`` by gates
    composed on the left, touching only qubits ``>= q``; TQE partners are taken
    in ascending qubit order. The circuit is the inverse of that reduction.
    """
    n = frame.n_qubits
    work = frame
    applied: list[Gate] = []

    def apply(g: Gate) -> None:
        nonlocal work
        work = g.frame(n).compose(work)
        applied.append(g)

    for q in range(n):
        # effZ_q: move support onto q, then clear the other qubits.
        ez = work.rows[q][0]
        if not (ez.support_bits >> q & 1):
            p = min(ez.support())
            a = ez.axis(p)
            tau = next(t for t in ("X", "Y", "Z") if t != a)
            apply(TQE("Z", tau, q, p))
            ez = work.rows[q][0]
        for k in sorted(ez.support() - {q}):
            ez = work.rows[q][0]
            a, b = ez.axis(q), ez.axis(k)
            sigma = next(s for s in ("X", "Y", "Z") if s != a)
            apply(TQE(sigma, b, q, k))
        ez = work.rows[q][0]
        if ez.axis(q) != "Z":
            apply(_to_z_clifford(ez.axis(q), q))
        # effX_q: clear every qubit other than q (effZ_q is now ±Z_q).
        ex = work.rows[q][1]
        for k in sorted(ex.support() - {q}):
            ex = work.rows[q][1]
            apply(TQE("Z", ex.axis(k), q, k))
        z, x = work.rows[q]
        if z != PauliOperator.single(n, q, "Z") or x != PauliOperator.single(n, q, "X"):
            local = PauliFrame(
                [(
                    PauliOperator(1, z.phase, z.x >> q & 1, z.z >> q & 1),
                    PauliOperator(1, x.phase, x.x >> q & 1, x.z >> q & 1),
                )]
            ).invert()
            lz, lx = local.rows[0]
            apply(Clifford1Q(q, lz.label(), lx.label()))
    if not work.is_identity():  # pragma: no cover - guarded by construction
        raise RuntimeError("frame synthesis did not reach the identity")
    out: list[Gate] = []
    for g in reversed(applied):
        out.append(g.inverse() if isinstance(g, Clifford1Q) else g)
    return Circuit(n, tuple(out))
