"""Express each original measurement as a signed parity of searched outcomes."""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

from .circuit import Circuit
from .frame import PauliFrame
from .graph import ClassicalRemap
from .pauli import PauliOperator, commutator_form

__all__ = ["MeasurementRemap", "SpanError", "map_measurements", "apply_remap", "anticommuting_partner"]


class SpanError(ValueError):
    """An element is not a product of the measured operators."""


def anticommuting_partner(sigma: str) -> str:
    """Least single-qubit axis (X < Y < Z) anticommuting with ``sigma``."""
    return "X" if sigma in ("Y", "Z") else "Z"


@dataclass(frozen=True)
class MeasurementRemap:
    """``target_i = v_i XOR parity(b_i . sources)``."""

    b: tuple[tuple[int, ...], ...]
    v: tuple[int, ...]
    sources: tuple[str, ...]
    targets: tuple[str, ...]

    def apply(self, outcomes: Sequence[int]) -> list[int]:
        return apply_remap(self, outcomes)

    def to_node(self) -> ClassicalRemap:
        return ClassicalRemap(self.b, self.v, self.sources, self.targets)

    def to_dict(self) -> dict:
        return {
            "b": [list(r) for r in self.b],
            "v": list(self.v),
            "sources": list(self.sources),
            "targets": list(self.targets),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> "MeasurementRemap":
        return cls(
            tuple(tuple(r) for r in d["b"]), tuple(d["v"]), tuple(d["sources"]), tuple(d["targets"])
        )


def apply_remap(r: MeasurementRemap, outcomes: Sequence[int]) -> list[int]:
    """``v + b @ outcomes`` over GF(2)."""
    if len(outcomes) != len(r.sources):
        raise ValueError(f"expected {len(r.sources)} outcome bits, got {len(outcomes)}")
    # Pack the outcomes once so each row is a masked parity.
    packed = sum((int(o) & 1) << k for k, o in enumerate(outcomes))
    out = []
    for row, vi in zip(r.b, r.v):
        m = sum(bit << k for k, bit in enumerate(row))
        out.append(vi ^ (bin(packed & m).count("1") & 1))
    return out


def map_measurements(
    S: Sequence[PauliOperator],
    C: Circuit,
    F: PauliFrame,
    targets: Sequence[str] | None = None,
) -> MeasurementRemap:
    """Rows ``b`` and signs ``v`` with ``s_i = (-1)^{v_i} prod_q F(sigma_q)^{b_iq}``.

    ``C``'s single-qubit measurements give the ``sigma_q`` and their classical
    ids become the remap sources. ``targets`` defaults to ``s0, s1, ...``.
    """
    n = F.n_qubits
    meas = C.measurements()
    pulled = [F.forward_action(m.pauli(n)) for m in meas]
    partners = [
        F.forward_action(PauliOperator.single(n, m.qubit, anticommuting_partner(m.sigma)))
        for m in meas
    ]
    rows, signs = [], []
    for s in S:
        p = PauliOperator.identity(n)
        row = []
        for pb, partner in zip(pulled, partners):
            bit = commutator_form(s, partner)
            row.append(bit)
            if bit:
                p = p * pb
        if not p.same_up_to_sign(s):
            raise SpanError(f"{s.label()} is not a product of the measured operators")
        rows.append(tuple(row))
        signs.append(0 if p == s else 1)
    if targets is None:
        targets = [f"s{i}" for i in range(len(S))]
    if len(targets) != len(S):
        raise ValueError("one target id per element is required")
    return MeasurementRemap(tuple(rows), tuple(signs), tuple(m.cid for m in meas), tuple(targets))
