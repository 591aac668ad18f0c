"""Single-point mutations of proof scripts for the rejection harness.

Every mutant perturbs exactly one rule id or one parameter while the
stated sequents stay fixed, so an accepted mutant would mean the checker
derived the same sequent from a different justification.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from ..syntax import Bottom, Not, Var
from .kernel import RuleApp, RULES
from .script import ProofScript, Step


@dataclass(frozen=True)
class Mutant:
    description: str
    script: ProofScript


_RULE_NAMES = sorted(RULES)


def _swap_rule(name: str, offset: int) -> str:
    i = _RULE_NAMES.index(name)
    return _RULE_NAMES[(i + offset) % len(_RULE_NAMES)]


def mutants(script: ProofScript, per_step: int = 4) -> Iterator[Mutant]:
    for idx, step in enumerate(script.steps):
        if step.rule is None:
            continue
        emitted = 0
        for mutated, description in _step_mutations(step):
            steps = list(script.steps)
            steps[idx] = mutated
            yield Mutant(f"step {step.step_id}: {description}",
                         ProofScript(tuple(steps), script.qed, script.sig))
            emitted += 1
            if emitted >= per_step:
                break


def _step_mutations(step: Step) -> Iterator[tuple[Step, str]]:
    rule = step.rule
    assert rule is not None
    same_arity = [
        name for name in _RULE_NAMES
        if name != rule.rule and RULES[name][0] == RULES[rule.rule][0]
    ]
    for name in same_arity[:2]:
        yield (
            Step(step.step_id, step.sequent, RuleApp(name, rule.params),
                 step.premises, step.lineno),
            f"rule {rule.rule} -> {name}",
        )
    for key in sorted(rule.params):
        value = rule.params[key]
        if isinstance(value, int):
            mutated_value: object = value + 1
        elif isinstance(value, str):
            mutated_value = value + "_mut"
        elif isinstance(value, tuple) and value and isinstance(value[0], str):
            mutated_value = (value[0] + "_mut",) + value[1:]
        elif isinstance(value, Var):
            mutated_value = Var(value.name + "_mut")
        elif value == Bottom():
            mutated_value = Not(Bottom())
        else:
            mutated_value = Bottom()
        params = dict(rule.params)
        params[key] = mutated_value
        yield (
            Step(step.step_id, step.sequent, RuleApp(rule.rule, params),
                 step.premises, step.lineno),
            f"parameter {key} perturbed",
        )
    if len(step.premises) >= 2:
        swapped = (step.premises[1], step.premises[0]) + step.premises[2:]
        yield (
            Step(step.step_id, step.sequent, rule, swapped, step.lineno),
            "premise order swapped",
        )
