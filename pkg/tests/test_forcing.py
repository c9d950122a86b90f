import itertools
import random

import pytest
from hypothesis import given, strategies as st

from biprism.forcing import (
    EMPTY, BlockPi, Condition, Explicit, ForcingError, Pdot, Xdot, XdotLower, act_condition,
    act_name, all_conditions, check_pi_properties, compatible, decide_bit, extend_to_separate,
    extends, merge, parse_condition, random_condition, render_condition, separates, support_bound,
)

C = Condition.of
keys = st.tuples(st.integers(0, 1), st.integers(0, 3), st.integers(0, 3))
conditions = st.dictionaries(keys, st.integers(0, 1), max_size=5).map(C)
columns = st.tuples(st.integers(0, 1), st.integers(0, 3))


class TestOrder:
    def test_extends(self):
        p = C({(0, 0, 0): 1})
        assert extends(p, p)
        assert extends(C({(0, 0, 0): 1, (1, 2, 3): 0}), p)
        assert not extends(C({(0, 0, 0): 0}), p)

    def test_compatible(self):
        assert compatible(C({(0, 0, 0): 1}), C({(1, 0, 0): 0}))
        assert compatible(C({(0, 0, 0): 1}), C({(0, 0, 0): 1}))
        assert not compatible(C({(0, 0, 0): 1}), C({(0, 0, 0): 0}))

    def test_merge(self):
        p = C({(0, 1, 2): 1})
        assert merge(p, EMPTY) == p and merge(p, p) == p
        assert len(merge(C({(0, 0, 0): 1}), C({(1, 0, 0): 1}))) == 2
        with pytest.raises(ForcingError):
            merge(C({(0, 0, 0): 1}), C({(0, 0, 0): 0}))

    @given(conditions, conditions)
    def test_merge_is_a_lower_bound(self, p, q):
        if compatible(p, q):
            m = merge(p, q)
            assert extends(m, p) and extends(m, q)
        else:
            assert not any(extends(r, p) and extends(r, q) for r in (p, q))

    def test_invalid_entries(self):
        with pytest.raises(ForcingError):
            C({(2, 0, 0): 1})
        with pytest.raises(ForcingError):
            C({(0, 0, 0): 2})
        with pytest.raises(ForcingError):
            Condition((((0, 0, 0), 1), ((0, 0, 0), 0)))


class TestSerialization:
    @given(conditions)
    def test_round_trip(self, p):
        assert parse_condition(render_condition(p)) == p

    def test_format(self):
        assert render_condition(C({(1, 3, 0): 0, (0, 1, 2): 1})) == "0,1,2=1 1,3,0=0"
        assert render_condition(EMPTY) == "{}"

    def test_bad_text(self):
        with pytest.raises(ForcingError):
            parse_condition("0,1=1")


class TestPermutations:
    def test_block_pi_rule(self):
        assert act_condition(BlockPi(1), C({(0, 0, 5): 1})) == C({(1, 1, 5): 1})
        pi = BlockPi(2)
        assert [pi(0, i) for i in range(6)] == [(1, 2), (1, 3), (1, 0), (1, 1), (1, 4), (1, 5)]

    @pytest.mark.parametrize("k", range(1, 9))
    def test_involution_on_indices(self, k):
        pi = BlockPi(k)
        for e, i in itertools.product((0, 1), range(3 * k)):
            assert pi(*pi(e, i)) == (e, i)

    def test_identity_explicit(self):
        p = C({(0, 1, 2): 1})
        assert act_condition(Explicit(), p) == p

    def test_explicit_must_be_bijective(self):
        with pytest.raises(ForcingError):
            Explicit({(0, 0): (0, 1)})

    @given(conditions, conditions, st.integers(1, 4))
    def test_action_is_an_automorphism(self, p, q, k):
        pi = BlockPi(k)
        assert extends(act_condition(pi, p), act_condition(pi, q)) == extends(p, q)
        assert compatible(act_condition(pi, p), act_condition(pi, q)) == compatible(p, q)

    def test_exhaustive_automorphism_small(self):
        pis = [BlockPi(1), BlockPi(2), Explicit({(0, 0): (0, 2), (0, 2): (0, 0)}),
               Explicit({(0, 1): (1, 1), (1, 1): (0, 1)})]
        conds = list(all_conditions(2, 3, 1))
        for pi in pis:
            for p, q in itertools.product(conds, repeat=2):
                assert extends(act_condition(pi, p), act_condition(pi, q)) == extends(p, q)
                assert compatible(act_condition(pi, p), act_condition(pi, q)) == compatible(p, q)


class TestNames:
    def test_block_pi(self):
        for k in (1, 2, 5):
            assert act_name(BlockPi(k), Xdot(0)) == Xdot(1)
            assert act_name(BlockPi(k), Xdot(1)) == Xdot(0)
            assert act_name(BlockPi(k), Pdot()) == Pdot()
        assert act_name(BlockPi(2), XdotLower(0, 1)) == XdotLower(1, 3)

    def test_explicit_within_rows(self):
        pi = Explicit({(0, 0): (0, 1), (0, 1): (0, 0)})
        assert act_name(pi, Xdot(0)) == Xdot(0)
        assert act_name(pi, XdotLower(0, 0)) == XdotLower(0, 1)

    def test_explicit_across_rows_is_undefined(self):
        with pytest.raises(ForcingError):
            act_name(Explicit({(0, 0): (1, 0), (1, 0): (0, 0)}), Xdot(0))


class TestSupport:
    def test_examples(self):
        assert support_bound(EMPTY) == 0
        assert support_bound(C({(0, 0, 5): 1})) == 1
        assert support_bound(C({(1, 3, 0): 0, (0, 1, 2): 1})) == 4

    @given(conditions)
    def test_image_is_disjoint_and_compatible(self, p):
        pi = BlockPi(max(1, support_bound(p)))
        image = act_condition(pi, p)
        assert not (p.keys() & image.keys()) and compatible(p, image)


class TestSeparate:
    def test_empty(self):
        assert extend_to_separate(EMPTY, (0, 0), (1, 0)) == C({(0, 0, 0): 0, (1, 0, 0): 1})

    def test_already_separated(self):
        p = C({(0, 0, 0): 0, (1, 0, 0): 1})
        assert extend_to_separate(p, (0, 0), (1, 0)) is p

    def test_one_column_set(self):
        q = extend_to_separate(C({(0, 0, 0): 1}), (0, 0), (0, 1))
        assert q == C({(0, 0, 0): 1, (0, 1, 0): 0})

    def test_skips_agreeing_columns(self):
        p = C({(0, 0, 0): 1, (0, 1, 0): 1})
        assert extend_to_separate(p, (0, 0), (0, 1)) == merge(p, C({(0, 0, 1): 0, (0, 1, 1): 1}))

    def test_same_column(self):
        with pytest.raises(ForcingError):
            extend_to_separate(EMPTY, (0, 1), (0, 1))

    @given(conditions, columns, columns)
    def test_density(self, p, a, b):
        if a == b:
            return
        q = extend_to_separate(p, a, b)
        j = separates(q, a, b)
        assert extends(q, p) and j is not None
        assert q.get(a + (j,)) != q.get(b + (j,))

    def test_decide_bit(self):
        assert decide_bit(EMPTY, 0, 1, 2) == C({(0, 1, 2): 0})
        p = C({(0, 1, 2): 1})
        assert decide_bit(p, 0, 1, 2) is p


class TestPiReport:
    def test_k1_small(self):
        samples = [p for p in all_conditions(2, 1, 2)]
        assert check_pi_properties(1, samples).passed

    def test_k3_random(self):
        rng = random.Random(3)
        samples = [random_condition(rng, 5, 3, 4) for _ in range(10_000)]
        assert check_pi_properties(3, samples).passed

    def test_empty_condition(self):
        assert check_pi_properties(7, [EMPTY]).passed

    def test_support_precondition(self):
        with pytest.raises(ForcingError):
            check_pi_properties(1, [C({(0, 1, 0): 1})])
