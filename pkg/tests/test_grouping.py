import pytest
from hypothesis import given, strategies as st

from pcoast.data import read_data
from pcoast.grouping import (
    InputError,
    WeightedTerm,
    read_pauli_set,
    read_terms,
    sorted_insertion,
)
from pcoast.pauli import commutator_form

from _support import P


def test_h2_fixture_gives_two_groups():
    terms = read_terms(read_data("h2_jw.terms"))
    assert len(terms) == 15
    g = sorted_insertion(terms)
    assert len(g) == 2
    assert [len(grp) for grp in g.groups] == [10, 4]
    assert g.offset == pytest.approx(-0.09886397351781583)
    assert {t.pauli.label() for t in g.groups[1]} == {"+XXYY", "+XYYX", "+YXXY", "+YYXX"}


def test_diagonal_terms_share_one_group():
    terms = [WeightedTerm(c, P(s)) for c, s in [(0.5, "ZI"), (0.2, "IZ"), (-0.9, "ZZ")]]
    g = sorted_insertion(terms)
    assert len(g) == 1
    assert [t.pauli.label() for t in g.groups[0]] == ["+ZZ", "+ZI", "+IZ"]


def test_pairwise_anticommuting_terms():
    terms = [WeightedTerm(1.0, P(s)) for s in ("X", "Z", "Y")]
    g = sorted_insertion(terms)
    # Equal weights keep their input order.
    assert [grp[0].pauli.label() for grp in g.groups] == ["+X", "+Z", "+Y"]


def test_full_commutation_not_qubitwise():
    g = sorted_insertion([WeightedTerm(1.0, P("XX")), WeightedTerm(0.5, P("ZZ"))])
    assert len(g) == 1


@given(st.lists(st.tuples(st.floats(-2, 2, allow_nan=False), st.text("IXYZ", min_size=3, max_size=3)), min_size=1, max_size=12))
def test_groups_are_commuting_partitions(raw):
    terms = [WeightedTerm(c, P(s)) for c, s in raw]
    g = sorted_insertion(terms)
    non_identity = [t for t in terms if not t.pauli.is_identity()]
    assert sum(len(grp) for grp in g.groups) == len(non_identity)
    for grp in g.groups:
        for a in grp:
            for b in grp:
                assert commutator_form(a.pauli, b.pauli) == 0
        mags = [abs(t.coefficient) for t in grp]
        assert mags == sorted(mags, reverse=True)


def test_sign_folds_into_coefficient():
    t = WeightedTerm(0.5, P("-XZ"))
    assert t.coefficient == -0.5 and t.pauli == P("XZ")
    with pytest.raises(ValueError):
        WeightedTerm(float("nan"), P("X"))


def test_read_terms_reports_line_numbers():
    with pytest.raises(InputError) as err:
        read_terms("# header\n0.5 XX\n0.2 XQ\n")
    assert err.value.line == 3
    with pytest.raises(InputError) as err:
        read_terms("0.5 XX\n0.2 XXX\n")
    assert err.value.line == 2
    with pytest.raises(InputError):
        read_terms("# nothing\n")


def test_read_pauli_set():
    assert read_pauli_set("ZZZ  # comment\n-ZXX\n") == [P("ZZZ"), P("-ZXX")]
    with pytest.raises(InputError) as err:
        read_pauli_set("ZZ\n\niZZ\n")
    assert err.value.line == 3
    with pytest.raises(InputError):
        read_pauli_set("ZZ\nZ\n")
    assert len(read_pauli_set(read_data("h2_vqe_set.paulis"))) == 10


def test_grouping_dict():
    g = sorted_insertion([WeightedTerm(1.0, P("II")), WeightedTerm(-0.5, P("XI"))])
    assert g.to_dict() == {"offset": 1.0, "groups": [[{"coefficient": -0.5, "pauli": "XI"}]]}
