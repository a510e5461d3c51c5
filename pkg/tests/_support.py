"""Random generators shared by the test modules."""
from __future__ import annotations

import math
import random

from pcoast.frame import PauliFrame, single_qubit_clifford, tqe_frame
from pcoast.graph import FrameNode, Meas, Prep, Rot
from pcoast.pauli import PauliOperator, commutator_form, parse_pauli

P = parse_pauli
AXES = "XYZ"
ONE_QUBIT = ("H", "S", "SDG", "X", "Y", "Z", "HSDG")
ANGLES = (0.3, -0.3, 1.1, math.pi / 4, -math.pi / 4, math.pi / 2)


def random_frame(rng: random.Random, n: int, depth: int = 12) -> PauliFrame:
    """Product of random TQE and named single-qubit Clifford frames."""
    f = PauliFrame.identity(n)
    for _ in range(depth):
        if n > 1 and rng.random() < 0.6:
            i, j = rng.sample(range(n), 2)
            g = tqe_frame(rng.choice(AXES), rng.choice(AXES), i, j, n)
        else:
            g = single_qubit_clifford(rng.randrange(n), n, rng.choice(ONE_QUBIT))
        f = g.compose(f)
    return f


def random_pauli(rng: random.Random, n: int, allow_identity: bool = False, signed: bool = True) -> PauliOperator:
    while True:
        p = PauliOperator(n, 0, rng.randrange(1 << n), rng.randrange(1 << n)).positive()
        if allow_identity or not p.is_identity():
            return -p if signed and rng.random() < 0.5 else p


def random_anticommuting(rng: random.Random, p: PauliOperator) -> PauliOperator:
    while True:
        q = random_pauli(rng, p.n_qubits)
        if commutator_form(p, q):
            return q


def random_commuting_set(rng: random.Random, n: int, size: int) -> list[PauliOperator]:
    """Distinct (up to sign) non-identity products of random commuting generators."""
    F = random_frame(rng, n, depth=3 * n + 2)
    k = rng.randint(1, n)
    gens = [F.eff_z(i) for i in rng.sample(range(n), k)]
    out: list[PauliOperator] = []
    for _ in range(4 * size):
        if len(out) >= size:
            break
        p = PauliOperator.identity(n)
        for g in gens:
            if rng.random() < 0.5:
                p = p * g
        if p.is_identity() or any(p.same_up_to_sign(s) for s in out):
            continue
        out.append(-p if rng.random() < 0.5 else p)
    if not out:
        out.append(gens[0])
    return out


class NodeFactory:
    """Random nodes with fresh classical ids."""

    def __init__(self, rng: random.Random):
        self.rng = rng
        self.count = 0

    def cid(self) -> str:
        self.count += 1
        return f"c{self.count}"

    def rot(self, n: int) -> Rot:
        return Rot(random_pauli(self.rng, n), self.rng.choice(ANGLES))

    def meas(self, n: int) -> Meas:
        return Meas(random_pauli(self.rng, n), self.cid())

    def prep(self, n: int) -> Prep:
        if self.rng.random() < 0.5:
            q = self.rng.randrange(n)
            return Prep(PauliOperator.single(n, q, "Z"), PauliOperator.single(n, q, "X"))
        p = random_pauli(self.rng, n)
        return Prep(p, random_anticommuting(self.rng, p))

    def frame(self, n: int) -> FrameNode:
        return FrameNode(random_frame(self.rng, n, 6))

    def any(self, n: int):
        kind = self.rng.choice(("rot", "rot", "meas", "meas", "prep", "prep", "frame"))
        return getattr(self, kind)(n)


#: One line per acceptance criterion, collected for the terminal summary.
ACCEPTANCE_LINES: list[str] = []
