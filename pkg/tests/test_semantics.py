import itertools
import random

import pytest

from inclogic.models import SINGLETON_EMPTY_DOMAIN, Team, parse_model, parse_team
from inclogic.parser import parse_formula
from inclogic.semantics import (
    EvalError,
    GuardExceeded,
    Guards,
    duplicate,
    eval_fast,
    eval_fo,
    eval_naive,
    max_subteam,
    supplement,
)
from inclogic.suites import gen_formula, gen_model, gen_team
from inclogic.syntax import free_vars

ORDER = parse_model("""
universe: 0 1 2
relation </2: (0,1) (1,2) (0,2)
""")
CYCLE = parse_model("""
universe: 0 1 2
relation </2: (0,1) (1,2) (2,0)
""")
PLAIN = parse_model("universe: 0 1 2")


def fml(text, model=ORDER):
    return parse_formula(text, model.sig)


class TestEvalFo:
    def test_spec_examples(self):
        assert eval_fo(ORDER, {"x": "0", "y": "1"}, fml("x < y"))
        assert not eval_fo(ORDER, {"x": "1", "y": "0"}, fml("x < y"))
        assert not eval_fo(ORDER, {}, fml("bot"))

    def test_rejects_unbound(self):
        with pytest.raises(EvalError):
            eval_fo(ORDER, {}, fml("x < y"))

    def test_rejects_non_fo(self):
        with pytest.raises(EvalError):
            eval_fo(ORDER, {"x": "0", "y": "0"}, fml("x <= y"))


class TestTeamOps:
    def test_duplicate_from_singleton(self):
        team = duplicate(SINGLETON_EMPTY_DOMAIN, "x", PLAIN)
        assert team.rows == {("0",), ("1",), ("2",)}

    def test_duplicate_empty(self):
        assert duplicate(Team(("y",), frozenset()), "x", PLAIN).is_empty()

    def test_duplicate_extends_rows(self):
        team = duplicate(Team(("y",), frozenset({("0",)})), "x", PLAIN)
        assert len(team) == 3 and team.domain == ("x", "y")

    def test_supplement(self):
        base = Team(("y",), frozenset({("0",)}))
        one = supplement(base, "x", {("0",): frozenset({"1"})})
        assert one.rows == {("1", "0")}
        two = supplement(base, "x", {("0",): frozenset({"0", "1"})})
        assert len(two) == 2

    def test_supplement_rejects_empty_image(self):
        base = Team(("y",), frozenset({("0",)}))
        with pytest.raises(EvalError):
            supplement(base, "x", {("0",): frozenset()})

    def test_supplement_requires_exact_rows(self):
        base = Team(("y",), frozenset({("0",)}))
        with pytest.raises(EvalError):
            supplement(base, "x", {})


class TestEvalNaive:
    def test_inclusion_atom(self):
        team = parse_team("x,y\n1,2\n2,1\n")
        assert eval_naive(PLAIN, team, fml("x <= y", PLAIN))
        assert not eval_naive(PLAIN, parse_team("x,y\n1,2\n"), fml("x <= y", PLAIN))

    def test_bottom_on_empty(self):
        assert eval_naive(PLAIN, Team((), frozenset()), fml("bot", PLAIN))
        assert not eval_naive(PLAIN, SINGLETON_EMPTY_DOMAIN, fml("bot", PLAIN))

    def test_wellfoundedness_sentence(self):
        sentence = fml("E x. E y. (y <= x & y < x)", CYCLE)
        assert eval_naive(CYCLE, SINGLETON_EMPTY_DOMAIN, sentence)
        assert not eval_naive(ORDER, SINGLETON_EMPTY_DOMAIN, sentence)

    def test_guards(self):
        team = Team(("x",), frozenset((str(i),) for i in range(3)))
        tight = Guards(max_rows=2)
        with pytest.raises(GuardExceeded):
            eval_naive(PLAIN, team, fml("x <= x", PLAIN), tight)
        deep = fml("E x. E y. E u. E v. E w. x = y", PLAIN)
        with pytest.raises(GuardExceeded):
            eval_naive(PLAIN, SINGLETON_EMPTY_DOMAIN, deep)

    def test_unbound_free_variable_is_an_error(self):
        with pytest.raises(EvalError):
            eval_naive(PLAIN, SINGLETON_EMPTY_DOMAIN, fml("x = x", PLAIN))


class TestMaxSubteam:
    def test_fo_filter(self):
        team = parse_team("x,y\n0,1\n1,0\n")
        best = max_subteam(ORDER, team, fml("x < y"))
        assert best.rows == {("0", "1")}

    def test_spec_example(self):
        team = parse_team("x,y\n1,2\n2,1\n3,1\n")
        model = parse_model("universe: 1 2 3")
        best = max_subteam(model, team, fml("x <= y", model))
        assert best.rows == {("1", "2"), ("2", "1")}

    def test_empty(self):
        assert max_subteam(PLAIN, Team(("x",), frozenset()), fml("x = x", PLAIN)).is_empty()

    def test_fixpoint_and_maximality_brute_force(self):
        rng = random.Random(7)
        for _ in range(150):
            model = gen_model(rng, max_size=3)
            f = gen_formula(rng, ("x", "y"), rng.randint(1, 6))
            fv = tuple(sorted(free_vars(f))) or ("x",)
            team = gen_team(rng, model, fv, max_rows=4)
            best = max_subteam(model, team, f)
            assert eval_fast(model, best, f)
            rows = sorted(team.rows)
            union = set()
            for k in range(len(rows) + 1):
                for combo in itertools.combinations(rows, k):
                    sub = Team(team.domain, frozenset(combo))
                    if eval_fast(model, sub, f):
                        union |= set(combo)
            assert best.rows == frozenset(union)
            for removed in team.rows - best.rows:
                bigger = Team(team.domain, best.rows | {removed})
                assert not eval_fast(model, bigger, f)


class TestEngineAgreement:
    def test_flatness_of_fo(self):
        rng = random.Random(11)
        for _ in range(200):
            model = gen_model(rng, max_size=3)
            alpha = gen_formula(rng, ("x", "y"), rng.randint(1, 5), fo_only=True,
                                quant_budget=1)
            team = gen_team(rng, model, ("x", "y"), max_rows=4)
            flat = all(eval_fo(model, s, alpha) for s in team.assignments())
            assert eval_fast(model, team, alpha) == flat

    def test_guard_free_fast_engine(self):
        team = Team(("x",), frozenset((str(i % 3),) for i in range(12)))
        assert eval_fast(PLAIN, team, fml("x <= x", PLAIN))
