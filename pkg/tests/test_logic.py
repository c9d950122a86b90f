import pytest
from hypothesis import given, strategies as st

from biprism.logic import (
    And, ArityError, Iff, Implies, Const, Equal, Exists, FALSE, ForAll, FormulaError, FormulaSyntaxError, Not,
    Or, Rel, SchemaTheory, Signature, TRUE, UnknownSymbolError, Var, all_vars, constants_of,
    depth, expand_counting, free_vars, fresh_name, is_sentence, parse_formula, parse_signature,
    parse_theory, quantifier_depth, render_formula, render_signature, render_theory, substitute,
)
from biprism.structures import empty_structure, evaluate

from helpers import L_RC, L_S, L_T, formulas

x, y, z, c = Var("x"), Var("y"), Var("z"), Const("c")


class TestParse:
    def test_constant_atom(self):
        assert parse_formula("x = c", L_S) == Equal(x, c)

    def test_nested_quantifiers(self):
        f = parse_formula("forall x. exists y. !(x = y)")
        assert f == ForAll("x", Exists("y", Not(Equal(x, y))))

    def test_unknown_relation(self):
        with pytest.raises(UnknownSymbolError):
            parse_formula("R(x)", L_T)

    def test_arity_mismatch(self):
        with pytest.raises(ArityError):
            parse_formula("R(x)", L_RC)

    def test_syntax_error_has_position(self):
        with pytest.raises(FormulaSyntaxError) as info:
            parse_formula("x = & y")
        assert info.value.position == 4

    @pytest.mark.parametrize("text", ["", "x =", "(x = y", "forall . x = x", "x = y )", "exists>= x. x = x"])
    def test_malformed(self, text):
        with pytest.raises(FormulaSyntaxError):
            parse_formula(text)

    def test_precedence(self):
        f = parse_formula("!x = y & y = z | x = z -> x = x <-> y = y")
        # <-> is loosest, then ->, then |, then &
        assert isinstance(f, Iff) and isinstance(f.left, Implies)
        assert isinstance(f.left.left, Or) and isinstance(f.left.left.left, And)
        assert render_formula(f) == "!(x = y) & y = z | x = z -> x = x <-> y = y"
        assert isinstance(parse_formula("x = y | y = z & x = z"), Or)

    def test_implication_is_right_associative(self):
        f = parse_formula("x = x -> y = y -> z = z")
        assert f.right == parse_formula("y = y -> z = z")

    def test_quantifier_body_extends_right(self):
        f = parse_formula("forall x. x = y & y = y")
        assert isinstance(f, ForAll) and isinstance(f.body, And)

    def test_counting_sugar(self):
        assert parse_formula("exists>=2 x. x = x") == expand_counting(2, "x", Equal(x, x))

    def test_true_false(self):
        assert parse_formula("true") == TRUE and parse_formula("false") == FALSE
        assert render_formula(TRUE) == "true"


class TestRender:
    def test_atoms(self):
        assert render_formula(Equal(x, y)) == "x = y"
        assert render_formula(Not(Equal(x, c))) == "!(x = c)"

    @given(formulas(L_RC))
    def test_round_trip(self, f):
        assert parse_formula(render_formula(f), L_RC) == f

    @given(formulas(L_T))
    def test_round_trip_is_idempotent_on_text(self, f):
        text = render_formula(f)
        assert render_formula(parse_formula(text)) == text


class TestSubstitute:
    def test_constant_for_variable(self):
        assert substitute(Equal(x, y), {"x": c}) == Equal(c, y)

    def test_capture_avoidance(self):
        f = parse_formula("exists y. x = y")
        assert render_formula(substitute(f, {"x": y})) == "exists y'. y = y'"

    def test_untouched(self):
        assert substitute(Equal(x, x), {"z": c}) == Equal(x, x)

    @given(formulas(L_S), st.sampled_from(["x", "y", "z"]), st.sampled_from(["x", "y", "z"]))
    def test_semantics(self, f, v, w):
        # substituting w for v is the same as evaluating with v bound to w's value
        from helpers import assignments, tarski
        from biprism.structures import pointed_structure
        A = pointed_structure(2, 1)
        g = substitute(f, {v: Var(w)})
        for a in assignments(["x", "y", "z"], 2):
            assert tarski(A, g, a) == tarski(A, f, {**a, v: a[w]})

    def test_fresh_name(self):
        assert fresh_name("y", {"y", "y'"}) == "y''"


class TestCounting:
    def test_zero_is_true(self):
        assert expand_counting(0, "x", Equal(x, x)) == TRUE

    def test_two(self):
        text = render_formula(expand_counting(2, "x", Equal(x, x)))
        assert text == "exists x1. exists x2. !(x1 = x2) & x1 = x1 & x2 = x2"

    def test_three_by_size(self):
        f = expand_counting(3, "x", Equal(x, x))
        assert [evaluate(empty_structure(n), f) for n in range(1, 6)] == [False, False, True, True, True]

    @pytest.mark.parametrize("n", range(5))
    def test_exactly_counts(self, n):
        f = expand_counting(n, "x", Equal(x, x))
        for size in range(0, 6):
            assert evaluate(empty_structure(size), f) == (size >= n)

    def test_negative(self):
        with pytest.raises(ValueError):
            expand_counting(-1, "x", TRUE)


class TestSyntaxHelpers:
    def test_vars_and_symbols(self):
        f = parse_formula("forall x. R(x, y) & x = c", L_RC)
        assert free_vars(f) == {"y"} and all_vars(f) == {"x", "y"}
        assert constants_of(f) == {"c"}
        assert not is_sentence(f)

    def test_depths(self):
        f = parse_formula("forall x. exists y. x = y & x = x")
        assert quantifier_depth(f) == 2
        assert depth(Equal(x, y)) == 0 and depth(Not(Equal(x, y))) == 1

    def test_rel_args_must_be_terms(self):
        with pytest.raises(FormulaError):
            Rel("R", ("x",))


class TestSignatureFiles:
    def test_round_trip(self):
        text = "signature L\nrelation R/2\nrelation P/1\nconstant c\n"
        sig = parse_signature(text)
        assert sig == Signature("L", {"R": 2, "P": 1}, {"c"})
        assert parse_signature(render_signature(sig)) == sig

    @pytest.mark.parametrize("text", ["relation R", "relation R/x", "widget w", "constant"])
    def test_errors(self, text):
        with pytest.raises(FormulaError):
            parse_signature(text)


class TestTheories:
    def test_instances(self):
        th = SchemaTheory.from_templates("T", L_T, [], ["exists>={n} x. x = x"])
        inst = th.instances(3)
        assert len(inst) == 4 and inst[0] == TRUE
        assert inst[3] == expand_counting(3, "x", Equal(x, x))

    def test_axioms_must_be_sentences(self):
        with pytest.raises(FormulaError):
            SchemaTheory.from_templates("bad", L_T, ["x = x"])

    def test_theory_file_round_trip(self):
        text = "theory EQ\nrelation E/2\naxiom forall x. E(x, x)\nschema exists>={n} x. x = x\n"
        th = parse_theory(text)
        back = parse_theory(render_theory(th))
        assert back.name == "EQ" and back.signature == th.signature
        assert back.instances(3) == th.instances(3)

    def test_schema_without_parameter(self):
        with pytest.raises(FormulaError):
            parse_theory("theory X\nschema forall x. x = x\n")
