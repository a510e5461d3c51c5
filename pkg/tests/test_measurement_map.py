import random

import pytest

from pcoast.graph import Meas
from pcoast.measurement_map import (
    MeasurementRemap,
    SpanError,
    anticommuting_partner,
    apply_remap,
    map_measurements,
)
from pcoast.oracle import circuit_to_nodes, release_equivalent
from pcoast.pauli import PauliOperator
from pcoast.stabilizer_search import find_stabilizers, measured_paulis

from _support import P, random_commuting_set

H2_SET = [P(s) for s in "ZZII ZIZI ZIIZ IZZI IZIZ IIZZ XXXX YYYY XXYY YYXX".split()]


def reconstruct(remap, pulled, n):
    out = []
    for row, v in zip(remap.b, remap.v):
        p = PauliOperator.identity(n)
        for bit, m in zip(row, pulled):
            if bit:
                p = p * m
        out.append(-p if v else p)
    return out


def test_partner_axis():
    assert anticommuting_partner("Z") == "X"
    assert anticommuting_partner("Y") == "X"
    assert anticommuting_partner("X") == "Z"


def test_h2_rows_reconstruct_every_operator():
    res = find_stabilizers(H2_SET)
    remap = map_measurements(H2_SET, res.circuit, res.frame)
    assert len(remap.b) == 10 and all(len(r) == 4 for r in remap.b)
    assert reconstruct(remap, measured_paulis(res), 4) == H2_SET
    assert remap.sources == ("m0", "m1", "m2", "m3")
    assert remap.targets == tuple(f"s{i}" for i in range(10))


def test_measured_element_gets_unit_row():
    res = find_stabilizers([P("ZZI"), P("IZZ")], "exact")
    pulled = measured_paulis(res)
    remap = map_measurements([pulled[0], -pulled[1]], res.circuit, res.frame)
    assert remap.b == ((1, 0), (0, 1))
    assert remap.v == (0, 1)


def test_zzz_zxx_pair_reconstructs():
    S = [P("ZZZ"), P("ZXX")]
    res = find_stabilizers(S, "exact")
    remap = map_measurements(S, res.circuit, res.frame)
    assert reconstruct(remap, measured_paulis(res), 3) == S


def test_span_error():
    res = find_stabilizers([P("ZI")])
    with pytest.raises(SpanError):
        map_measurements([P("IZ")], res.circuit, res.frame)
    with pytest.raises(ValueError):
        map_measurements([P("ZI")], res.circuit, res.frame, targets=["a", "b"])


def test_apply_remap():
    ident = MeasurementRemap(((1, 0), (0, 1)), (0, 0), ("a", "b"), ("x", "y"))
    assert apply_remap(ident, [1, 0]) == [1, 0]
    flips = MeasurementRemap(((0, 0), (0, 0)), (1, 1), ("a", "b"), ("x", "y"))
    assert flips.apply([0, 1]) == [1, 1]
    parity = MeasurementRemap(((1, 1, 1),), (0,), ("a", "b", "c"), ("x",))
    assert parity.apply([1, 1, 0]) == [0]
    with pytest.raises(ValueError):
        parity.apply([1])


def test_remap_serialization():
    r = MeasurementRemap(((1, 1),), (1,), ("a", "b"), ("x",))
    assert MeasurementRemap.from_dict(r.to_dict()) == r
    node = r.to_node()
    assert node.apply({"a": 1, "b": 0}) == {"x": 0}


def test_joint_distribution_matches_direct_measurement():
    rng = random.Random(0)
    for _ in range(40):
        n = rng.randint(1, 4)
        S = random_commuting_set(rng, n, rng.randint(1, 4))
        res = find_stabilizers(S)
        targets = [f"d{i}" for i in range(len(S))]
        remap = map_measurements(S, res.circuit, res.frame, targets)
        direct = [Meas(s, t) for s, t in zip(S, targets)]
        searched = circuit_to_nodes(res.circuit) + [remap.to_node()]
        assert release_equivalent(direct, searched, targets, n, trials=2, seed=rng.randrange(100))


def triangular_up_to_permutation(b) -> bool:
    """Peel off rows with a single remaining 1 until nothing is left."""
    rows, cols = set(range(len(b))), set(range(len(b[0])))
    while rows:
        single = [r for r in rows if sum(b[r][c] for c in cols) == 1]
        if not single:
            return False
        r = single[0]
        rows.remove(r)
        cols.remove(next(c for c in cols if b[r][c]))
    return True


def test_exact_mode_remap_is_triangular_for_independent_sets():
    rng = random.Random(4)
    for _ in range(150):
        n = rng.randint(1, 6)
        independent = []
        for s in random_commuting_set(rng, n, rng.randint(1, 2 * n)):
            if _rank(independent + [s]) > len(independent):
                independent.append(s)
        res = find_stabilizers(independent, "exact")
        remap = map_measurements(independent, res.circuit, res.frame)
        assert len(remap.b) == len(remap.b[0])
        assert triangular_up_to_permutation(remap.b)


def _rank(ps) -> int:
    rows = [p.x | (p.z << p.n_qubits) for p in ps]
    rank = 0
    while rows:
        piv = rows.pop()
        if piv:
            rank += 1
            hb = piv.bit_length() - 1
            rows = [r ^ piv if r >> hb & 1 else r for r in rows]
    return rank
