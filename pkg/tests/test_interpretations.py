import itertools
import json

import pytest
from hypothesis import given, settings, strategies as st

from biprism.interpretations import (
    COMPONENTWISE, SchemeError, SchemeValidationError, TranslationScheme, apply_scheme,
    check_commutation, check_defined_isomorphism, classify, compose, dump_scheme, identity_scheme,
    scheme_from_dict, scheme_to_dict, translate_formula, validate_scheme_on,
)
from biprism.logic import Signature, TRUE, free_vars, parse_formula, render_formula
from biprism.structures import (
    FiniteStructure, all_structures, empty_structure, pointed_structure, satisfaction,
)
from biprism.toy import L_S as TOY_S, L_T as TOY_T, SIGNATURES, prop1_bundle, s_roundtrip, t_roundtrip

from helpers import L_RC, formulas, structures

L_R = Signature("L_R", {"R": 2})


def isomorphic(A: FiniteStructure, B: FiniteStructure) -> bool:
    if A.size != B.size or not A.sig.same_symbols(B.sig):
        return False
    return any(A.permuted(p) == B for p in itertools.permutations(range(A.size)))


@pytest.fixture(scope="module")
def bundle():
    return prop1_bundle()


class TestClassify:
    def test_t(self, bundle):
        f = classify(bundle.scheme_t)
        assert (f.one_dimensional, f.identity_preserving, f.unrelativized, f.direct) == (False, False, True, False)

    def test_s(self, bundle):
        f = classify(bundle.scheme_s)
        assert (f.one_dimensional, f.identity_preserving, f.unrelativized, f.direct) == (True, True, False, False)

    def test_identity(self):
        f = classify(identity_scheme(TOY_T))
        assert f.one_dimensional and f.identity_preserving and f.unrelativized and f.direct


class TestSchemeConstruction:
    def test_stray_free_variable(self):
        with pytest.raises(SchemeError):
            TranslationScheme("bad", TOY_T, TOY_T, 1, parse_formula("x1 = y1"), COMPONENTWISE)

    def test_wrong_target_symbol(self):
        with pytest.raises(SchemeError):
            TranslationScheme("bad", TOY_T, TOY_T, 1, parse_formula("x1 = c", TOY_S), COMPONENTWISE)

    def test_unknown_source_symbol(self):
        with pytest.raises(SchemeError):
            TranslationScheme("bad", TOY_T, TOY_T, 1, TRUE, COMPONENTWISE,
                              const_defs={"c": parse_formula("x1 = x1")})

    def test_dimension(self):
        with pytest.raises(SchemeError):
            TranslationScheme("bad", TOY_T, TOY_T, 0, TRUE, COMPONENTWISE)


class TestTranslate:
    def test_equality_under_t(self, bundle):
        got = translate_formula(bundle.scheme_t, parse_formula("x = y"))
        want = "(x_2 = x_3 & y_2 = y_3 & x_1 = y_1) | (!(x_2 = x_3) & !(y_2 = y_3))"
        assert got == parse_formula(want)

    def test_constant_under_t(self, bundle):
        got = translate_formula(bundle.scheme_t, parse_formula("x = c", TOY_S))
        want = parse_formula("!(x_2 = x_3)")
        vs = ("x_1", "x_2", "x_3")
        for n in range(1, 4):
            A = empty_structure(n)
            assert (satisfaction(A, got, vs) == satisfaction(A, want, vs)).all()

    def test_relativized_quantifier(self, bundle):
        got = translate_formula(bundle.scheme_s, parse_formula("exists x. x = x"))
        assert render_formula(got) == "exists x. !(x = c) & x = x"

    def test_identity_is_literal_without_constants(self):
        f = parse_formula("forall x. exists y. R(x, y) & !(x = y)", L_R)
        assert translate_formula(identity_scheme(L_R), f) == f

    @given(formulas(L_RC), structures(L_RC))
    def test_identity_preserves_meaning(self, f, A):
        g = translate_formula(identity_scheme(L_RC), f)
        vs = ("x", "y", "z")
        assert (satisfaction(A, f, vs) == satisfaction(A, g, vs)).all()

    def test_missing_definition(self):
        sch = TranslationScheme("partial", L_R, L_R, 1, TRUE, COMPONENTWISE)
        with pytest.raises(SchemeError):
            translate_formula(sch, parse_formula("R(x, y)", L_R))

    def test_source_language_enforced(self, bundle):
        with pytest.raises(Exception):
            translate_formula(bundle.scheme_s, parse_formula("x = c", TOY_S))


class TestValidate:
    @pytest.mark.parametrize("n", range(1, 5))
    def test_t_epsilon_is_an_equivalence(self, bundle, n):
        report = validate_scheme_on(bundle.scheme_t, empty_structure(n))
        names = {e.name: e.status for e in report.entries}
        assert names["epsilon reflexive"] == names["epsilon symmetric"] == names["epsilon transitive"] == "pass"
        # on one element no triple has distinct last coordinates, so c denotes nothing
        assert names["constant c unique"] == ("fail" if n == 1 else "pass")

    def test_constant_meeting_two_classes(self):
        sch = TranslationScheme("loose", TOY_S, TOY_T, 1, TRUE, COMPONENTWISE,
                                const_defs={"c": parse_formula("x1 = x1")})
        report = validate_scheme_on(sch, empty_structure(2))
        assert report.first_failure.name == "constant c unique"
        with pytest.raises(SchemeValidationError):
            apply_scheme(sch, empty_structure(2))

    def test_not_reflexive(self):
        sch = TranslationScheme("irr", TOY_T, TOY_T, 1, TRUE, parse_formula("!(x1 = y1)"))
        report = validate_scheme_on(sch, empty_structure(2))
        assert report.first_failure.name == "epsilon reflexive"

    def test_not_symmetric(self):
        sch = TranslationScheme("asym", TOY_T, L_R, 1, TRUE, parse_formula("x1 = y1 | R(x1, y1)", L_R))
        A = FiniteStructure(L_R, 2, {"R": {(0, 1)}})
        assert validate_scheme_on(sch, A).first_failure.name == "epsilon symmetric"

    def test_not_transitive(self):
        eps = parse_formula("x1 = y1 | R(x1, y1) | R(y1, x1)", L_R)
        sch = TranslationScheme("path", TOY_T, L_R, 1, TRUE, eps)
        A = FiniteStructure(L_R, 3, {"R": {(0, 1), (1, 2)}})
        report = validate_scheme_on(sch, A)
        assert report.first_failure.name == "epsilon transitive"
        assert report.first_failure.witness["but_not"] == [[0], [2]]

    def test_relation_not_invariant(self):
        sch = TranslationScheme("coarse", Signature("L_P", {"P": 1}), TOY_S, 1, TRUE,
                                parse_formula("x1 = x1 & y1 = y1"),
                                rel_defs={"P": parse_formula("x1_1 = c", TOY_S)})
        report = validate_scheme_on(sch, pointed_structure(2, 0))
        assert report.first_failure.name == "relation P invariant"

    def test_wrong_structure_language(self, bundle):
        with pytest.raises(SchemeError):
            validate_scheme_on(bundle.scheme_t, pointed_structure(2, 0))


class TestApply:
    @pytest.mark.parametrize("n", range(2, 6))
    def test_t_adds_one_element(self, bundle, n):
        I = apply_scheme(bundle.scheme_t, empty_structure(n))
        assert I.result.size == n + 1
        assert sum(len(c) for c in I.classes) == n ** 3
        assert list(I.rep) == sorted(I.rep) and all(r == min(c) for r, c in zip(I.rep, I.classes))

    def test_s_drops_the_point(self, bundle):
        I = apply_scheme(bundle.scheme_s, pointed_structure(4, 1))
        assert I.result.size == 3 and I.rep == ((0,), (2,), (3,))


class TestCompose:
    def test_dimension(self, bundle):
        assert compose(bundle.scheme_t, bundle.scheme_s).dim == 3
        assert compose(bundle.scheme_s, bundle.scheme_t).dim == 3

    def test_signature_mismatch(self, bundle):
        with pytest.raises(SchemeError):
            compose(bundle.scheme_t, bundle.scheme_t)

    @pytest.mark.parametrize("n", range(2, 4))
    def test_functor_on_T_structures(self, bundle, n):
        A = empty_structure(n)
        one = apply_scheme(t_roundtrip(), A).result
        two = apply_scheme(bundle.scheme_s, apply_scheme(bundle.scheme_t, A).result).result
        assert isomorphic(one, two)

    @pytest.mark.parametrize("n,k", [(3, 0), (3, 2), (4, 1)])
    def test_functor_on_S_structures(self, bundle, n, k):
        B = pointed_structure(n, k)
        one = apply_scheme(s_roundtrip(), B).result
        two = apply_scheme(bundle.scheme_t, apply_scheme(bundle.scheme_s, B).result).result
        assert isomorphic(one, two)

    def test_identity_law(self, bundle):
        for sch in (bundle.scheme_t, bundle.scheme_s):
            left = compose(identity_scheme(sch.target), sch)
            right = compose(sch, identity_scheme(sch.source))
            for n in range(1, 4):
                for A in all_structures(sch.target, n):
                    reports = [validate_scheme_on(x, A).passed for x in (sch, left, right)]
                    assert len(set(reports)) == 1
                    if reports[0]:
                        base = apply_scheme(sch, A).result
                        assert isomorphic(base, apply_scheme(left, A).result)
                        assert isomorphic(base, apply_scheme(right, A).result)

    @given(formulas(TOY_S, names=("x", "y"), max_leaves=5))
    @settings(max_examples=60)
    def test_translation_of_composite(self, f):
        # translating along the composite equals translating twice
        b = prop1_bundle()
        comp = compose(b.scheme_s, b.scheme_t)
        once = translate_formula(comp, f)
        twice = translate_formula(b.scheme_s, translate_formula(b.scheme_t, f))
        vs = sorted(free_vars(once) | free_vars(twice))
        for n in range(1, 4):
            for k in range(n):
                B = pointed_structure(n, k)
                assert (satisfaction(B, once, vs) == satisfaction(B, twice, vs)).all()


class TestCommutation:
    @given(formulas(TOY_S, names=("x", "y"), max_leaves=6), st.integers(2, 3))
    @settings(max_examples=80)
    def test_t(self, f, n):
        assert check_commutation(prop1_bundle().scheme_t, empty_structure(n), f).passed

    @given(formulas(TOY_T, names=("x", "y"), max_leaves=6), st.integers(2, 3), st.data())
    @settings(max_examples=80)
    def test_s(self, f, n, data):
        B = pointed_structure(n, data.draw(st.integers(0, n - 1)))
        assert check_commutation(prop1_bundle().scheme_s, B, f).passed

    @given(formulas(L_RC, names=("x", "y"), max_leaves=6), structures(L_RC))
    @settings(max_examples=80)
    def test_identity(self, f, A):
        assert check_commutation(identity_scheme(L_RC), A, f).passed

    def test_sampled_mode(self, bundle):
        f = parse_formula("x = y | y = c", TOY_S)
        report = check_commutation(bundle.scheme_t, empty_structure(3), f, trials=5, seed=7)
        assert report.passed and "5 random" in report.entries[0].detail


class TestDefinedIsomorphism:
    @pytest.mark.parametrize("n", range(1, 5))
    def test_eta(self, bundle, n):
        assert check_defined_isomorphism(empty_structure(n), t_roundtrip(), bundle.eta).passed

    @pytest.mark.parametrize("n", range(3, 5))
    def test_nu(self, bundle, n):
        for k in range(n):
            assert check_defined_isomorphism(pointed_structure(n, k), s_roundtrip(), bundle.nu).passed

    def test_wrong_formula_is_caught(self):
        bad = parse_formula("x = y2")
        report = check_defined_isomorphism(empty_structure(3), t_roundtrip(), bad)
        assert report.first_failure.name == "well-defined"

    def test_not_total(self):
        report = check_defined_isomorphism(empty_structure(3), t_roundtrip(), parse_formula("false"))
        assert report.first_failure.name == "total"

    def test_injectivity_failure(self):
        # every x is sent to the class of the R-minimal element
        L = Signature("L_R", {"R": 2})
        A = FiniteStructure(L, 2, {"R": {(0, 1)}})
        sch = compose(identity_scheme(L), identity_scheme(L))
        eta = parse_formula("y1 = y1 & (forall w. !R(w, y1))", L)
        report = check_defined_isomorphism(A, sch, eta)
        assert report.first_failure.name == "injective"


class TestSchemeFiles:
    def test_round_trip(self, bundle):
        for sch in (bundle.scheme_t, bundle.scheme_s, identity_scheme(L_RC)):
            back = scheme_from_dict(json.loads(dump_scheme(sch, SIGNATURES)), SIGNATURES)
            assert back == sch

    def test_inline_signature(self, bundle):
        data = scheme_to_dict(bundle.scheme_t)
        assert isinstance(data["source"], dict)
        assert scheme_from_dict(data) == bundle.scheme_t

    def test_missing_field(self):
        with pytest.raises(SchemeError):
            scheme_from_dict({"source": "L_T", "target": "L_T"}, SIGNATURES)

    def test_unknown_signature(self):
        with pytest.raises(SchemeError):
            scheme_from_dict({"source": "L_Q", "target": "L_T", "dim": 1}, SIGNATURES)
