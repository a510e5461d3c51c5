import random

import pytest

from pcoast.frame import PauliFrame, tqe_frame
from pcoast.graph import FrameNode, Meas, Prep, Rot, build_graph, normalize
from pcoast.oracle import hold_equivalent
from pcoast.pauli import PauliOperator, commutator_form
from pcoast.prep_reduction import (
    PrepSet,
    destabilizers_from,
    prep_cost,
    reduce_frame_by_prep,
    reduce_nodes_by_prep,
    stabilizer_element,
)

from _support import P, NodeFactory, random_frame

TH = 0.37


def random_prep_set(rng, n, depth=None):
    K = random_frame(rng, n, rng.choice([0, 2, 5, 15]) if depth is None else depth)
    rows = rng.sample(range(n), rng.randint(1, n))
    pairs = tuple(((-K.eff_z(i) if rng.random() < 0.5 else K.eff_z(i)), K.eff_x(i)) for i in rows)
    return PrepSet(pairs), K, rows


class TestPrepSet:
    def test_validation(self):
        with pytest.raises(ValueError):
            PrepSet(((P("ZI"), P("ZI")),))
        with pytest.raises(ValueError):
            PrepSet(((P("ZI"), P("XI")), (P("IZ"), P("XX"))))
        pi = PrepSet(((P("ZI"), P("XI")), (P("IZ"), P("IX"))))
        assert len(pi) == 2 and prep_cost(pi) == 4
        assert pi.nodes() == [Prep(P("ZI"), P("XI")), Prep(P("IZ"), P("IX"))]
        assert PrepSet.from_nodes(pi.nodes()) == pi

    def test_stabilizer_element(self):
        pi = PrepSet(((P("-ZI"), P("XI")), (P("IZ"), P("IX"))))
        assert stabilizer_element(pi, P("ZZ")) == P("-ZZ")
        assert stabilizer_element(pi, P("IZ")) == P("IZ")
        with pytest.raises(ValueError):
            stabilizer_element(pi, P("XI"))


class TestDestabilizers:
    def test_original_stabilizers_give_original_destabilizers(self):
        rng = random.Random(0)
        for _ in range(50):
            pi, K, _ = random_prep_set(rng, rng.randint(1, 4))
            out = destabilizers_from(pi, pi.stabilizers, K)
            assert [q.positive() for q in out] == [q.positive() for q in pi.destabilizers]

    def test_sign_is_ignored(self):
        pi = PrepSet(((P("ZI"), P("XI")),))
        assert destabilizers_from(pi, [P("-ZI")], PauliFrame.identity(2)) == [P("XI")]

    def test_invariants_for_searched_stabilizers(self):
        rng = random.Random(1)
        for _ in range(100):
            n = 3
            pi, _, _ = random_prep_set(rng, n)
            F = random_frame(rng, n, 8)
            new_pi, _ = reduce_frame_by_prep(pi, F)
            assert new_pi.is_valid()
            for q in new_pi.destabilizers:
                # Destabilizers stay in the span of the original ones.
                acc = PauliOperator.identity(n)
                for p0, q0 in pi.pairs:
                    if commutator_form(q, p0):
                        acc = acc * q0
                assert acc.same_up_to_sign(q)
            for p in new_pi.stabilizers:
                stabilizer_element(pi, p)

    def test_entry_required(self):
        pi = PrepSet(((P("ZZ"), P("XI")),))
        with pytest.raises(ValueError):
            destabilizers_from(pi, [P("ZZ")], PauliFrame.identity(2))


class TestReduceFrameByPrep:
    def test_already_decoupled(self):
        pi = PrepSet(((P("ZI"), P("XI")),))
        assert reduce_frame_by_prep(pi, PauliFrame.identity(2)) == (pi, PauliFrame.identity(2))

    def test_controlled_z_after_preparation_vanishes(self):
        pi = PrepSet(((P("ZI"), P("XI")),))
        cz = tqe_frame("Z", "Z", 0, 1, 2)
        new_pi, F = reduce_frame_by_prep(pi, cz)
        assert F == PauliFrame.from_labels([("ZI", "XI"), ("IZ", "IX")])
        assert hold_equivalent(pi.nodes() + [FrameNode(cz)], new_pi.nodes() + [FrameNode(F)], 2)

    def test_random_channel_equality_and_cost(self):
        rng = random.Random(2)
        improved = 0
        for _ in range(150):
            n = rng.randint(1, 3)
            pi, _, _ = random_prep_set(rng, n)
            F = random_frame(rng, n, rng.choice([1, 3, 10]))
            new_pi, new_F = reduce_frame_by_prep(pi, F)
            assert new_F.cost() <= F.cost()
            improved += new_F.cost() < F.cost()
            assert hold_equivalent(pi.nodes() + [FrameNode(F)], new_pi.nodes() + [FrameNode(new_F)], n)
        assert improved > 20

    def test_empty_set(self):
        F = tqe_frame("Z", "X", 0, 1, 2)
        assert reduce_frame_by_prep(PrepSet(()), F) == (PrepSet(()), F)


class TestReduceNodesByPrep:
    def test_controlled_rotations_cancel(self):
        g = build_graph([Prep(P("ZI"), P("XI")), Rot(P("ZX"), -TH), Rot(P("IX"), TH)])
        h = normalize(reduce_nodes_by_prep(normalize(g)))
        assert h.nodes == (Prep(P("ZI"), P("XI")),)
        assert hold_equivalent(g, h)

    def test_opposite_sign_gives_uncontrolled_rotation(self):
        g = build_graph([Prep(P("ZI"), P("XI")), Rot(P("ZX"), TH), Rot(P("IX"), TH)])
        h = normalize(reduce_nodes_by_prep(normalize(g)))
        assert set(h.nodes) == {Prep(P("ZI"), P("XI")), Rot(P("IX"), 2 * TH)}
        assert hold_equivalent(g, h)

    def test_no_preparations_is_a_no_op(self):
        g = build_graph([Rot(P("ZX"), TH), Meas(P("XX"), "c")])
        assert reduce_nodes_by_prep(g) == g

    def test_lighter_operator_after_preparation(self):
        g = build_graph([Prep(P("ZI"), P("XI")), Meas(P("ZZ"), "c")])
        h = reduce_nodes_by_prep(g)
        assert h.nodes == (Prep(P("ZI"), P("XI")), Meas(P("IZ"), "c"))
        assert reduce_nodes_by_prep(g, skip_terminal_meas=True) == g

    def test_random_graphs_stay_equivalent(self):
        rng = random.Random(3)
        make = NodeFactory(rng)
        for _ in range(80):
            n = rng.randint(1, 3)
            g = build_graph([make.any(n) for _ in range(rng.randint(2, 6))], n)
            h = reduce_nodes_by_prep(g)
            assert hold_equivalent(g, h)

    def test_iteration_cap(self):
        g = build_graph([Prep(P("ZI"), P("XI")), Meas(P("ZZ"), "c")])
        with pytest.raises(RuntimeError):
            reduce_nodes_by_prep(g, max_rewrites=0)
