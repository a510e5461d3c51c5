import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pcoast.oracle import pauli_matrix
from pcoast.pauli import (
    PauliOperator,
    PauliSpaceVector,
    commutator_form,
    mask,
    multiply,
    parse_pauli,
    parse_term,
)

P = parse_pauli

_M = {
    "I": np.eye(2),
    "X": np.array([[0, 1], [1, 0]]),
    "Y": np.array([[0, -1j], [1j, 0]]),
    "Z": np.diag([1, -1]),
}


def kron_matrix(p: PauliOperator) -> np.ndarray:
    """Phase times Kronecker product of the factor matrices, qubit 0 first."""
    m = np.eye(1)
    for q in range(p.n_qubits):
        m = np.kron(m, _M[p.axis(q)])
    return (1j ** p.label_phase) * m


paulis = st.integers(1, 3).flatmap(
    lambda n: st.builds(
        PauliOperator,
        st.just(n),
        st.integers(0, 3),
        st.integers(0, (1 << n) - 1),
        st.integers(0, (1 << n) - 1),
    )
)


class TestMultiply:
    def test_x_times_z(self):
        assert P("X") * P("Z") == P("-iY")

    def test_xx_times_zz_frozen(self):
        # Frozen from the Kronecker-product oracle.
        expected = kron_matrix(P("XX")) @ kron_matrix(P("ZZ"))
        assert np.allclose(expected, -kron_matrix(P("YY")))
        assert multiply(P("XX"), P("ZZ")) == P("-YY")

    def test_identity_is_neutral(self):
        p = P("-XYZ")
        assert p * P("III") == p
        assert P("III") * p == p

    def test_exhaustive_single_qubit_against_matrices(self):
        ops = [PauliOperator(1, k, x, z) for k in range(4) for x in (0, 1) for z in (0, 1)]
        for a, b in itertools.product(ops, ops):
            assert np.allclose(kron_matrix(a * b), kron_matrix(a) @ kron_matrix(b))

    @settings(max_examples=200, deadline=None)
    @given(st.data())
    def test_random_products_against_matrices(self, data):
        a = data.draw(paulis)
        b = PauliOperator(
            a.n_qubits,
            data.draw(st.integers(0, 3)),
            data.draw(st.integers(0, (1 << a.n_qubits) - 1)),
            data.draw(st.integers(0, (1 << a.n_qubits) - 1)),
        )
        assert np.allclose(kron_matrix(a * b), kron_matrix(a) @ kron_matrix(b))

    def test_size_mismatch(self):
        with pytest.raises(ValueError):
            P("X") * P("XX")

    def test_oracle_matrix_matches_kron(self):
        for label in ("X", "-iY", "XYZ", "-ZIY"):
            assert np.allclose(pauli_matrix(P(label)), kron_matrix(P(label)))


class TestCommutatorForm:
    def test_examples(self):
        assert commutator_form(P("X"), P("Z")) == 1
        assert commutator_form(P("XX"), P("ZZ")) == 0
        p = P("XYZ")
        assert commutator_form(p, p) == 0

    def test_agrees_with_matrix_commutator(self):
        labels = ["".join(t) for t in itertools.product("IXYZ", repeat=2)]
        for a, b in itertools.product(labels, labels):
            ma, mb = kron_matrix(P(a)), kron_matrix(P(b))
            anti = np.allclose(ma @ mb, -mb @ ma)
            assert commutator_form(P(a), P(b)) == int(anti)

    def test_bilinear_and_nondegenerate_on_two_qubits(self):
        vecs = [PauliSpaceVector(2, x, z) for x in range(4) for z in range(4)]
        for u, v, w in itertools.product(vecs, vecs, vecs):
            assert (u + v).lam(w) == u.lam(w) ^ v.lam(w)
        for u in vecs:
            if not u.is_zero():
                assert any(u.lam(v) for v in vecs)


class TestMaskSupportLift:
    def test_mask(self):
        assert mask(P("XYZ"), [0, 2]) == P("XIZ")
        p = P("-XYZ")
        assert mask(p, p.support()) == p
        assert mask(p, []) == P("-III")

    def test_mask_out_of_range(self):
        with pytest.raises(ValueError):
            mask(P("XY"), [2])

    def test_support(self):
        assert P("XIZ").support() == {0, 2}
        assert P("III").support() == frozenset()

    def test_lift_ignores_phase(self):
        assert P("-iY").lift() == P("Y").lift()
        assert P("-iY").lift() == (P("X") * P("Z")).lift()

    def test_embed(self):
        y = PauliSpaceVector(1, 1, 1).embed(1)
        assert y == P("Y")
        assert y.phase == 1 and y.x == 1 and y.z == 1
        assert PauliSpaceVector(2, 1, 0).embed(-1) == P("-XI")

    def test_lift_is_additive(self):
        rng = random.Random(4)
        for _ in range(100):
            n = rng.randint(1, 4)
            a = PauliOperator(n, rng.randrange(4), rng.randrange(1 << n), rng.randrange(1 << n))
            b = PauliOperator(n, rng.randrange(4), rng.randrange(1 << n), rng.randrange(1 << n))
            assert (a * b).lift() == a.lift() + b.lift()


class TestParsing:
    def test_roundtrip_labels(self):
        for label in ("+XYZ", "-IIY", "+I", "-ZZZZ"):
            assert P(label).label() == label

    def test_hermiticity(self):
        assert P("-XY").is_hermitian()
        assert not P("iX").is_hermitian()

    @pytest.mark.parametrize("bad", ["", "XQ", "++X", "x"])
    def test_malformed(self, bad):
        with pytest.raises(ValueError):
            P(bad)

    def test_parse_term(self):
        assert parse_term("-0.5 XYZ") == (-0.5, P("XYZ"))
        assert parse_term("ZZ") == (1.0, P("ZZ"))
        assert parse_term("1e-3 XI")[0] == pytest.approx(1e-3)
        with pytest.raises(ValueError):
            parse_term("0.5")
