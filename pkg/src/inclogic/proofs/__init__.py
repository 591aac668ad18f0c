from .kernel import RuleApp, RuleError, Sequent, apply_rule, RULES
from .script import (
    CheckReport,
    LineStatus,
    ProofScript,
    ScriptError,
    Step,
    check_script,
    check_text,
    format_script,
    parse_script,
)
from .transform import TransformError, derived_raa_weakneg
from .mutate import Mutant, mutants

__all__ = [
    "RuleApp", "RuleError", "Sequent", "apply_rule", "RULES",
    "CheckReport", "LineStatus", "ProofScript", "ScriptError", "Step",
    "check_script", "check_text", "format_script", "parse_script",
    "TransformError", "derived_raa_weakneg", "Mutant", "mutants",
]
