"""Derived reductio for the weak classical negation.

Given a checked script for ``Gamma, snot alpha |- bot`` (with ``snot
alpha`` in its canonical kernel form ``E y..(y <= x & ~alpha(y/x))``),
emit an expanded script concluding ``Gamma |- alpha``: the weak-negation
assumption is rederived from the assumptions ``y <= x`` and
``~alpha(y/x)`` via andI and existsI, and the final step discharges both
through incExp.  The emitted script is checked before it is returned.
"""

from __future__ import annotations

from ..syntax import (
    And,
    Bottom,
    Exists,
    Formula,
    Inclusion,
    Var,
    free_vars,
    is_first_order,
    weak_neg_of,
)
from .kernel import RuleApp, Sequent
from .script import ProofScript, Step, check_script


class TransformError(ValueError):
    pass


def derived_raa_weakneg(script: ProofScript, alpha: Formula) -> ProofScript:
    """Turn a refutation of the weak negation of ``alpha`` into a proof of it."""
    if not is_first_order(alpha):
        raise TransformError("the conclusion must be first-order")
    xs = tuple(sorted(free_vars(alpha)))
    if not xs:
        raise TransformError("alpha must have at least one free variable")
    weak = weak_neg_of(alpha)

    report = check_script(script)
    if not report.accepted or report.claim is None:
        raise TransformError("input script is not accepted")
    if report.claim.conclusion != Bottom():
        raise TransformError("input script must conclude bot")
    if weak not in report.claim.context:
        raise TransformError("input script context does not contain snot alpha")

    # destructure E y1..yk ((y <= x) & ~alpha(y/x)) to recover the fresh names
    ys: list[str] = []
    body: Formula = weak
    while isinstance(body, Exists):
        ys.append(body.var)
        body = body.body
    assert isinstance(body, And) and isinstance(body.left, Inclusion)
    atom, negbody = body.left, body.right

    used_ids = {s.step_id for s in script.steps}

    def new_id(base: str) -> str:
        cand, k = base, 1
        while cand in used_ids:
            cand = f"{base}{k}"
            k += 1
        used_ids.add(cand)
        return cand

    intro_steps: list[Step] = []
    atom_id, neg_id = new_id("w_atom"), new_id("w_neg")
    intro_steps.append(Step(atom_id, Sequent(frozenset((atom,)), atom), None, (), 0))
    intro_steps.append(Step(neg_id, Sequent(frozenset((negbody,)), negbody), None, (), 0))
    pair_ctx = frozenset((atom, negbody))
    prev_id = new_id("w_and")
    intro_steps.append(
        Step(prev_id, Sequent(pair_ctx, body), RuleApp("andI"), (atom_id, neg_id), 0))
    current: Formula = body
    for y in reversed(ys):
        step_id = new_id(f"w_{y}")
        wrapped = Exists(y, current)
        intro_steps.append(
            Step(
                step_id,
                Sequent(pair_ctx, wrapped),
                RuleApp("existsI", {"phi": current, "var": y, "t": Var(y)}),
                (prev_id,),
                0,
            ))
        prev_id = step_id
        current = wrapped
    assert current == weak

    rewritten: list[Step] = []
    replaced_assume: str | None = None
    for step in script.steps:
        if step.rule is None and step.sequent.conclusion == weak:
            replaced_assume = step.step_id
            continue
        ctx = step.sequent.context
        if weak in ctx:
            ctx = (ctx - {weak}) | pair_ctx
        premises = tuple(prev_id if pid == replaced_assume else pid
                         for pid in step.premises)
        rewritten.append(Step(step.step_id, Sequent(ctx, step.sequent.conclusion),
                              step.rule, premises, step.lineno))
    if replaced_assume is None:
        raise TransformError("input script never assumes snot alpha")

    final_ctx = (report.claim.context - {weak}) | pair_ctx
    last_bot = next(
        (s for s in reversed(rewritten)
         if s.sequent == Sequent(final_ctx, Bottom())),
        None,
    )
    if last_bot is None:
        raise TransformError("cannot locate the transformed bot step")
    goal_ctx = report.claim.context - {weak}
    final_id = new_id("w_goal")
    final = Step(
        final_id,
        Sequent(goal_ctx, alpha),
        RuleApp("incExp", {
            "alpha": alpha,
            "pivots": xs,
            "xseq": xs,
            "yseq": tuple(ys),
        }),
        (last_bot.step_id,),
        0,
    )

    out = ProofScript(tuple(intro_steps + rewritten + [final]), final_id, script.sig)
    out_report = check_script(out)
    if not out_report.accepted:
        bad = "; ".join(f"{l.step_id}: {l.message}" for l in out_report.failures())
        raise TransformError(f"transformed script does not check: {bad}")
    return out
