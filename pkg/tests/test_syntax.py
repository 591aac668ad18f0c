import random

import pytest
from hypothesis import given, settings, strategies as st

from inclogic.parser import ParseError, parse_formula
from inclogic.suites import SUITE_SIG, gen_formula
from inclogic.syntax import (
    And,
    Anonymity,
    App,
    Bottom,
    CaptureError,
    Const,
    EMPTY_SIGNATURE,
    Equals,
    Exists,
    FormulaError,
    Inclusion,
    Not,
    Or,
    Relation,
    Signature,
    TermInclusion,
    Var,
    WeakNeg,
    alpha_equivalent,
    desugar,
    free_vars,
    pretty,
    rename_bound,
    subformulas,
    substitute,
)

SIG = SUITE_SIG


def parse(text, sig=SIG):
    return parse_formula(text, sig)


class TestParse:
    def test_inclusion_atom(self):
        assert parse("x,y <= u,v") == Inclusion(("x", "y"), ("u", "v"))

    def test_negation_requires_first_order(self):
        with pytest.raises(ParseError):
            parse("~(E x. x <= y)")

    def test_anonymity_desugars(self):
        f = parse("x,y ups z")
        expected = Exists(
            "v",
            And(Inclusion(("x", "y", "v"), ("x", "y", "z")),
                Not(Equals(Var("v"), Var("z")))),
        )
        assert f == expected

    def test_precedence(self):
        f = parse("~x = y & u = v | bot")
        assert isinstance(f, Or)
        assert isinstance(f.left, And)
        assert isinstance(f.left.left, Not)

    def test_quantifier_scopes_right(self):
        f = parse("E x. x = y & y = y")
        assert isinstance(f, Exists)
        assert isinstance(f.body, And)

    def test_relation_arity_checked(self):
        with pytest.raises(ParseError):
            parse("R(x)")

    def test_unequal_inclusion_sides(self):
        with pytest.raises(ParseError):
            parse("x,y <= u")

    def test_functions_and_constants(self):
        sig = Signature({}, {"f": 1}, frozenset(("c",)))
        f = parse_formula("f(c) = x", sig)
        assert f == Equals(App("f", (Const("c"),)), Var("x"))

    def test_reserved_words(self):
        with pytest.raises(ParseError):
            parse("E = x")

    def test_infix_lt_needs_declaration(self):
        with pytest.raises(ParseError):
            parse_formula("x < y", EMPTY_SIGNATURE)
        sig = Signature({"<": 2}, {}, frozenset())
        assert parse_formula("x < y", sig) == Relation("<", (Var("x"), Var("y")))


class TestFreeVars:
    def test_inclusion_clause(self):
        assert free_vars(parse("x <= y")) == {"x", "y"}

    def test_binder_removes(self):
        assert free_vars(parse("A x. x <= y")) == {"y"}

    def test_bottom(self):
        assert free_vars(Bottom()) == frozenset()


class TestSubstitute:
    def test_basic(self):
        sig = Signature({}, {}, frozenset(("c",)))
        f = parse_formula("x = y", sig)
        assert substitute(f, "x", Const("c")) == parse_formula("c = y", sig)

    def test_capture_rejected(self):
        f = parse("E y. x = y")
        with pytest.raises(CaptureError) as err:
            substitute(f, "x", Var("y"))
        assert err.value.binder == "y"

    def test_inclusion_needs_variables(self):
        f = parse("x <= y")
        with pytest.raises(FormulaError):
            substitute(f, "x", App("f", (Var("z"),)))

    def test_variable_rename_in_inclusion(self):
        assert substitute(parse("x <= y"), "x", Var("z")) == parse("z <= y")

    @given(st.integers(0, 10**6))
    @settings(max_examples=200, deadline=None)
    def test_free_vars_after_substitution(self, seed):
        rng = random.Random(seed)
        f = gen_formula(rng, ("x", "y", "z"), rng.randint(1, 8))
        if "x" not in free_vars(f):
            return
        try:
            g = substitute(f, "x", Var("t"))
        except FormulaError:
            return
        assert free_vars(g) == (free_vars(f) - {"x"}) | {"t"}


class TestRenameBound:
    def test_spec_examples(self):
        f = parse("(E x. x = x) & (E x. x = x)")
        g = rename_bound(f)
        assert g == parse("(E x. x = x) & (E x1. x1 = x1)")

        f = parse("A x. E x. x = x")
        assert rename_bound(f) == parse("A x. E x1. x1 = x1")

    def test_respects_reserved(self):
        f = parse("E x. x = y")
        g = rename_bound(f, reserved={"x"})
        assert isinstance(g, Exists) and g.var == "x1"

    def test_alpha_equivalent(self):
        f = parse("E x. A y. (x = y | x <= y)")
        assert alpha_equivalent(f, rename_bound(f, reserved={"x", "y"}))

    def test_semantically_equivalent(self):
        from inclogic.semantics import eval_fast
        from inclogic.suites import gen_model, gen_team

        rng = random.Random(19)
        for _ in range(300):
            f = gen_formula(rng, ("x", "y", "z"), rng.randint(1, 9))
            g = rename_bound(f, reserved={"x", "y", "z"})
            model = gen_model(rng, max_size=3)
            team = gen_team(rng, model, ("x", "y", "z"), max_rows=6)
            assert eval_fast(model, team, f) == eval_fast(model, team, g)


class TestDesugar:
    def test_term_inclusion(self):
        sig = Signature({}, {"f": 1}, frozenset(("c",)))
        f = desugar(TermInclusion((App("f", (Var("x"),)),), (Const("c"),)),
                    reserved=sig.names())
        assert f == parse_formula("E u. E w. (u = f(x) & w = c & u <= w)", sig)

    def test_anonymity_empty_left(self):
        f = desugar(Anonymity((), ("y",)))
        assert f == parse("E v. (v <= y & ~v = y)")

    def test_anonymity_empty_right(self):
        assert desugar(Anonymity(("x",), ())) == Bottom()

    def test_weak_neg_sentence(self):
        f = desugar(WeakNeg(parse("E x. x = x")))
        assert f == Not(parse("E x. x = x"))

    def test_equal_length_invariant(self):
        for form in (
            TermInclusion((Var("x"), Var("y")), (Var("u"), Var("v"))),
            Anonymity(("x",), ("y", "z")),
            WeakNeg(parse("x = y")),
        ):
            for sub in subformulas(desugar(form)):
                if isinstance(sub, Inclusion):
                    assert len(sub.lhs) == len(sub.rhs) > 0


class TestPretty:
    def test_spec_examples(self):
        assert pretty(Inclusion(("x",), ("y",))) == "x <= y"
        assert pretty(Bottom()) == "bot"
        assert pretty(parse("E x. x = x")) == "E x. x = x"

    @given(st.integers(0, 10**6))
    @settings(max_examples=300, deadline=None)
    def test_roundtrip(self, seed):
        rng = random.Random(seed)
        f = gen_formula(rng, ("x", "y", "z"), rng.randint(1, 12))
        assert alpha_equivalent(f, parse(pretty(f)))

    def test_roundtrip_bulk(self):
        rng = random.Random(42)
        for _ in range(10_000):
            f = gen_formula(rng, ("x", "y", "z"), rng.randint(1, 12))
            assert alpha_equivalent(f, parse(pretty(f)))
