import random

import numpy as np
import pytest

from pcoast.circuit import TQE, Clifford1Q, MeasSQ
from pcoast.ladder import basis_change, ladder_circuit, ladder_statistics_check
from pcoast.oracle import pauli_matrix
from pcoast.stabilizer_search import find_stabilizers

from _support import P, random_commuting_set

CNOT01, CNOT12 = TQE("Z", "X", 0, 1), TQE("Z", "X", 1, 2)


def test_single_product():
    assert ladder_circuit([P("ZZZ")]).gates == (CNOT01, CNOT12, MeasSQ("Z", 2, "l0"))


def test_zzz_zxx_pair_gate_for_gate():
    gates = ladder_circuit([P("ZZZ"), P("ZXX")]).gates
    H1, H2 = Clifford1Q.named("H", 1), Clifford1Q.named("H", 2)
    expected = (
        CNOT01, CNOT12, MeasSQ("Z", 2, "l0"),
        CNOT12, CNOT01,
        H1, H2, CNOT01, CNOT12, MeasSQ("Z", 2, "l1"),
    )
    assert gates == expected


def test_single_qubit_observable():
    assert ladder_circuit([P("ZII")]).gates == (MeasSQ("Z", 0, "l0"),)


def test_uncompute_restores_frame():
    c = ladder_circuit([P("XYZ"), P("-YXZ")], uncompute_last=True)
    assert c.frame().is_identity()


def test_y_basis_change_maps_y_to_z():
    g = basis_change("Y", 0)
    assert g.frame(1).forward_action(P("Y")) == P("Z")
    assert basis_change("Z", 0) is None
    with pytest.raises(ValueError):
        basis_change("I", 0)


def test_computational_state():
    out = ladder_statistics_check([P("ZZZ"), P("ZXX")], np.eye(8)[0])
    assert out[0] == pytest.approx((1.0, 1.0))
    assert out[1] == pytest.approx((0.0, 0.0), abs=1e-12)


def test_random_states_match_direct_expectations():
    rng = np.random.default_rng(0)
    obs = [P("ZZZ"), P("ZXX"), P("-IYY")]
    for _ in range(20):
        psi = rng.normal(size=8) + 1j * rng.normal(size=8)
        for seq, direct in ladder_statistics_check(obs, psi):
            assert seq == pytest.approx(direct, abs=1e-12)


def test_anticommuting_pair_breaks_the_identity():
    rng = np.random.default_rng(1)
    psi = rng.normal(size=8) + 1j * rng.normal(size=8)
    out = ladder_statistics_check([P("ZZZ"), P("XII")], psi)
    assert out[0][0] == pytest.approx(out[0][1])
    assert abs(out[1][0] - out[1][1]) > 1e-3
    with pytest.raises(ValueError):
        ladder_circuit([P("ZZZ"), P("XII")])


def test_direct_expectation_is_trace():
    rho = np.eye(4) / 4
    assert ladder_statistics_check([P("XX")], rho) == [pytest.approx((0.0, 0.0))]
    assert np.trace(rho @ pauli_matrix(P("XX"))) == pytest.approx(0)


def test_input_errors():
    with pytest.raises(ValueError):
        ladder_circuit([])
    with pytest.raises(ValueError):
        ladder_circuit([P("II")])
    with pytest.raises(ValueError):
        ladder_statistics_check([P("ZZ")], np.ones(8))


def test_ladder_uses_at_least_as_many_entangling_gates_in_aggregate():
    rng = random.Random(2)
    ladder_total = search_total = 0
    for _ in range(100):
        n = rng.randint(2, 6)
        S = random_commuting_set(rng, n, rng.randint(1, 2 * n))
        ladder_total += ladder_circuit(S).tqe_count()
        search_total += find_stabilizers(S).circuit.tqe_count()
    assert ladder_total >= search_total
