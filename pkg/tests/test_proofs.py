import pytest

from inclogic.parser import parse_formula
from inclogic.proofs import (
    RuleApp,
    RuleError,
    Sequent,
    apply_rule,
    check_script,
    check_text,
    derived_raa_weakneg,
    format_script,
    mutants,
    parse_script,
)
from inclogic.proofs.transform import TransformError
from inclogic.suites import corpus_scripts
from inclogic.syntax import (
    EMPTY_SIGNATURE,
    Var,
    weak_neg_of,
)

def f(text, sig=EMPTY_SIGNATURE):
    return parse_formula(text, sig)


def seq(ctx_texts, concl_text, sig=EMPTY_SIGNATURE):
    return Sequent(frozenset(f(t, sig) for t in ctx_texts), f(concl_text, sig))


class TestApplyRule:
    def test_transitivity(self):
        out = apply_rule(RuleApp("incTrs"),
                         [seq([], "x <= y"), seq([], "y <= z")])
        assert out == seq([], "x <= z")

    def test_forallE_rejects_non_fo_body(self):
        premise = seq([], "A x. (y <= x)")
        with pytest.raises(RuleError, match="first-order"):
            apply_rule(RuleApp("forallE", {"t": Var("z")}), [premise])

    def test_orE_condition_2(self):
        major = seq([], "x = x | y = y")
        d0 = seq(["x = x", "u <= v"], "x = x")
        d1 = seq(["y = y"], "x = x")
        with pytest.raises(RuleError, match=r"condition \(2\)"):
            apply_rule(RuleApp("orE"), [major, d0, d1])

    def test_raa_classical_instance(self):
        premise = seq(["~~x = y", "~x = y"], "bot")
        out = apply_rule(RuleApp("RAA", {"alpha": f("x = y")}), [premise])
        assert out == seq(["~~x = y"], "x = y")

    def test_raa_rejects_inc_context(self):
        premise = seq(["u <= v", "~x = y"], "bot")
        with pytest.raises(RuleError, match=r"condition \(1\)"):
            apply_rule(RuleApp("RAA", {"alpha": f("x = y")}), [premise])

    def test_forallI_eigenvariable(self):
        premise = seq(["x = y"], "x = y")
        with pytest.raises(RuleError, match=r"condition \(4\)"):
            apply_rule(RuleApp("forallI", {"var": "x"}), [premise])

    def test_existsE_eigenvariable_in_conclusion(self):
        ex = seq([], "E x. x = y")
        d = seq(["x = y"], "x = y")
        with pytest.raises(RuleError, match=r"condition \(3\)"):
            apply_rule(RuleApp("existsE"), [ex, d])

    def test_incWex_condition_3(self):
        premise = seq([], "x <= y")
        with pytest.raises(RuleError, match=r"condition \(3\)"):
            apply_rule(RuleApp("incWex", {"fresh": "x", "pad": "z"}), [premise])

    def test_incCmp_pivot_closure(self):
        # a schematic formula with a stray free variable must be rejected
        inc = seq([], "y1 <= x1")
        inst = seq([], "x1 = x1")
        app = RuleApp("incCmp", {"alpha": f("p = x1"), "pivots": ("p",)})
        with pytest.raises(RuleError, match=r"condition \(1\)"):
            apply_rule(app, [inc, inst])

    def test_incSim_fresh_sequence(self):
        premise = seq([], "A v. (v = z)")
        app = RuleApp("incSim_fwd", {"count": 1, "zseq": ("z",), "yseq": ("z",)})
        with pytest.raises(RuleError, match=r"condition \(4\)"):
            apply_rule(premise and app, [premise])

    def test_incExt_freshness(self):
        premise_f = f("(E w1. (w1 <= w1 & w1 = z)) | z = z")
        premise = Sequent(frozenset((premise_f,)), premise_f)
        app = RuleApp("incExt", {"nvars": 1, "natoms": 1, "u": "z", "v": "q"})
        with pytest.raises(RuleError, match=r"condition \(5\)"):
            apply_rule(app, [premise])

    def test_unknown_rule(self):
        with pytest.raises(RuleError, match="unknown rule"):
            apply_rule(RuleApp("modusPonens"), [])

    def test_arity_mismatch(self):
        with pytest.raises(RuleError, match="premises"):
            apply_rule(RuleApp("andI"), [seq([], "x = x")])


class TestCheckScript:
    def test_rejects_wrong_stated_sequent(self):
        text = """
1: |- x = x by eqI(t = x)
2: |- y = y by andE_l from 1
qed 2
"""
        report = check_text(text)
        assert not report.accepted

    def test_alpha_conversion_not_implicit(self):
        text = """
1: A x. (x = v) assume
2: A x. (x = v) |- A y. (y = v) by forallE0 from 1
qed 2
"""
        assert not check_text(text).accepted

    def test_premise_must_precede(self):
        text = """
1: |- x = x by andE_l from 2
2: x = x assume
qed 1
"""
        with pytest.raises(Exception):
            parse_script(text)

    def test_claim_is_qed_line(self):
        report = check_text("1: x = x assume\nqed 1\n")
        assert report.accepted
        assert report.claim == seq(["x = x"], "x = x")

    def test_deterministic(self):
        name, text = corpus_scripts()[0]
        r1 = check_script(parse_script(text))
        r2 = check_script(parse_script(text))
        assert r1 == r2


class TestCorpus:
    def test_every_script_accepted(self):
        scripts = corpus_scripts()
        assert len(scripts) >= 15
        for name, text in scripts:
            report = check_script(parse_script(text))
            assert report.accepted, f"{name}: {report.failures()}"

    def test_mutants_rejected(self):
        total = 0
        for name, text in corpus_scripts():
            script = parse_script(text)
            for mutant in mutants(script):
                total += 1
                assert not check_script(mutant.script).accepted, \
                    f"{name}: {mutant.description}"
        assert total >= 100


class TestDerivedRaa:
    def _input_script(self):
        text = """
1: ~~u = v assume
2: E y. E y1. (y,y1 <= u,v & ~y = y1) assume
3: E y1. (y,y1 <= u,v & ~y = y1) assume
4: y,y1 <= u,v & ~y = y1 assume
5: y,y1 <= u,v & ~y = y1 |- y,y1 <= u,v by andE_l from 4
6: y,y1 <= u,v & ~y = y1 |- ~y = y1 by andE_r from 4
7: ~u = v assume
8: ~~u = v; ~u = v |- bot by negE(phi = bot) from 7, 1
9: ~~u = v |- u = v by RAA(alpha = u = v) from 8
10: ~~u = v; y,y1 <= u,v & ~y = y1 |- y = y1 by incCmp(alpha = p = q; pivots = p, q) from 5, 9
11: ~~u = v; y,y1 <= u,v & ~y = y1 |- bot by negE(phi = bot) from 10, 6
12: ~~u = v; E y1. (y,y1 <= u,v & ~y = y1) |- bot by existsE from 3, 11
13: ~~u = v; E y. E y1. (y,y1 <= u,v & ~y = y1) |- bot by existsE from 2, 12
qed 13
"""
        return parse_script(text)

    def test_transform_checks(self):
        script = self._input_script()
        out = derived_raa_weakneg(script, f("u = v"))
        report = check_script(out)
        assert report.accepted
        assert report.claim == seq(["~~u = v"], "u = v")
        # and the emitted concrete syntax round-trips
        assert check_script(parse_script(format_script(out))).accepted

    def test_rejects_non_fo(self):
        with pytest.raises(TransformError):
            derived_raa_weakneg(self._input_script(), f("u <= v"))

    def test_rejects_unaccepted_input(self):
        bad = parse_script("1: x = x assume\nqed 1\n")
        with pytest.raises(TransformError):
            derived_raa_weakneg(bad, f("u = v"))

    def test_sentence_alpha_rejected(self):
        with pytest.raises(TransformError):
            derived_raa_weakneg(self._input_script(), f("E x. x = x"))


def test_weak_neg_shape():
    weak = weak_neg_of(f("u = v"))
    assert weak == f("E y. E y1. (y,y1 <= u,v & ~y = y1)")
