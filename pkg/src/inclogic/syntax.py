"""Terms, formulas, and the syntactic operations everything else builds on.

The kernel formula language is first-order logic with a built-in equality
symbol plus inclusion atoms ``x1,...,xn <= y1,...,yn`` over variables.
Negation is restricted to first-order bodies.  Surface sugar (term
inclusion, anonymity atoms, weak classical negation) is eliminated by
``desugar`` and never reaches the kernel.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Mapping, Union


class FormulaError(ValueError):
    """Malformed term or formula."""


class CaptureError(FormulaError):
    """Substitution would capture a variable; carries the offending binder."""

    def __init__(self, binder: str, var: str):
        super().__init__(f"substituting for {var!r} would be captured by binder {binder!r}")
        self.binder = binder
        self.var = var


# ---------------------------------------------------------------------------
# Signatures

@dataclass(frozen=True)
class Signature:
    """Relation/function arities and constant names; '=' is built in."""

    relations: Mapping[str, int]
    functions: Mapping[str, int]
    constants: frozenset[str]

    def __post_init__(self):
        rel, fun, con = set(self.relations), set(self.functions), set(self.constants)
        overlap = (rel & fun) | (rel & con) | (fun & con)
        if overlap:
            raise FormulaError(f"signature names used in more than one kind: {sorted(overlap)}")
        for name, k in self.relations.items():
            if k < 0:
                raise FormulaError(f"relation {name!r} has negative arity")
        for name, k in self.functions.items():
            if k < 1:
                raise FormulaError(f"function {name!r} must have arity >= 1")

    def names(self) -> frozenset[str]:
        return frozenset(self.relations) | frozenset(self.functions) | self.constants


EMPTY_SIGNATURE = Signature({}, {}, frozenset())


def signature_union(a: Signature, b: Signature) -> Signature:
    for name in set(a.relations) & set(b.relations):
        if a.relations[name] != b.relations[name]:
            raise FormulaError(f"relation {name!r} declared with two arities")
    for name in set(a.functions) & set(b.functions):
        if a.functions[name] != b.functions[name]:
            raise FormulaError(f"function {name!r} declared with two arities")
    return Signature(
        {**a.relations, **b.relations},
        {**a.functions, **b.functions},
        a.constants | b.constants,
    )


# ---------------------------------------------------------------------------
# Terms

@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Const:
    name: str


@dataclass(frozen=True)
class App:
    func: str
    args: tuple["Term", ...]


Term = Union[Var, Const, App]


def term_vars(t: Term) -> frozenset[str]:
    if isinstance(t, Var):
        return frozenset((t.name,))
    if isinstance(t, Const):
        return frozenset()
    out: frozenset[str] = frozenset()
    for a in t.args:
        out |= term_vars(a)
    return out


def term_names(t: Term) -> frozenset[str]:
    """Every identifier in the term (variables, constants, function symbols)."""
    if isinstance(t, Var) or isinstance(t, Const):
        return frozenset((t.name,))
    out = frozenset((t.func,))
    for a in t.args:
        out |= term_names(a)
    return out


def subst_term(t: Term, mapping: Mapping[str, Term]) -> Term:
    if isinstance(t, Var):
        return mapping.get(t.name, t)
    if isinstance(t, Const):
        return t
    return App(t.func, tuple(subst_term(a, mapping) for a in t.args))


# ---------------------------------------------------------------------------
# Formulas

@dataclass(frozen=True)
class Bottom:
    pass


@dataclass(frozen=True)
class Equals:
    left: Term
    right: Term


@dataclass(frozen=True)
class Relation:
    name: str
    args: tuple[Term, ...]


@dataclass(frozen=True)
class Not:
    body: "Formula"

    def __post_init__(self):
        if not is_first_order(self.body):
            raise FormulaError("negation applies to first-order formulas only")


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Exists:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class Forall:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class Inclusion:
    lhs: tuple[str, ...]
    rhs: tuple[str, ...]

    def __post_init__(self):
        if len(self.lhs) != len(self.rhs):
            raise FormulaError("inclusion atom sides must have equal length")
        if not self.lhs:
            raise FormulaError("inclusion atom sides must be nonempty")


Formula = Union[Bottom, Equals, Relation, Not, And, Or, Exists, Forall, Inclusion]


@lru_cache(maxsize=None)
def is_first_order(f: Formula) -> bool:
    if isinstance(f, (Bottom, Equals, Relation)):
        return True
    if isinstance(f, Inclusion):
        return False
    if isinstance(f, Not):
        return is_first_order(f.body)
    if isinstance(f, (And, Or)):
        return is_first_order(f.left) and is_first_order(f.right)
    return is_first_order(f.body)


TRUE: Formula = Not(Bottom())


@lru_cache(maxsize=None)
def is_quantifier_free(f: Formula) -> bool:
    if isinstance(f, (Exists, Forall)):
        return False
    if isinstance(f, (Bottom, Equals, Relation, Inclusion)):
        return True
    if isinstance(f, Not):
        return is_quantifier_free(f.body)
    return is_quantifier_free(f.left) and is_quantifier_free(f.right)


@lru_cache(maxsize=None)
def free_vars(f: Formula) -> frozenset[str]:
    if isinstance(f, Bottom):
        return frozenset()
    if isinstance(f, Equals):
        return term_vars(f.left) | term_vars(f.right)
    if isinstance(f, Relation):
        out: frozenset[str] = frozenset()
        for a in f.args:
            out |= term_vars(a)
        return out
    if isinstance(f, Inclusion):
        return frozenset(f.lhs) | frozenset(f.rhs)
    if isinstance(f, Not):
        return free_vars(f.body)
    if isinstance(f, (And, Or)):
        return free_vars(f.left) | free_vars(f.right)
    return free_vars(f.body) - {f.var}


@lru_cache(maxsize=None)
def all_names(f: Formula) -> frozenset[str]:
    """Every identifier occurring in the formula, free or bound."""
    if isinstance(f, Bottom):
        return frozenset()
    if isinstance(f, Equals):
        return term_names(f.left) | term_names(f.right)
    if isinstance(f, Relation):
        out = frozenset((f.name,))
        for a in f.args:
            out |= term_names(a)
        return out
    if isinstance(f, Inclusion):
        return frozenset(f.lhs) | frozenset(f.rhs)
    if isinstance(f, Not):
        return all_names(f.body)
    if isinstance(f, (And, Or)):
        return all_names(f.left) | all_names(f.right)
    return all_names(f.body) | {f.var}


@lru_cache(maxsize=None)
def quantifier_depth(f: Formula) -> int:
    if isinstance(f, (Bottom, Equals, Relation, Inclusion)):
        return 0
    if isinstance(f, Not):
        return quantifier_depth(f.body)
    if isinstance(f, (And, Or)):
        return max(quantifier_depth(f.left), quantifier_depth(f.right))
    return 1 + quantifier_depth(f.body)


def formula_size(f: Formula) -> int:
    if isinstance(f, (Bottom, Equals, Relation, Inclusion)):
        return 1
    if isinstance(f, Not):
        return 1 + formula_size(f.body)
    if isinstance(f, (And, Or)):
        return 1 + formula_size(f.left) + formula_size(f.right)
    return 1 + formula_size(f.body)


def subformulas(f: Formula) -> Iterator[Formula]:
    yield f
    if isinstance(f, Not):
        yield from subformulas(f.body)
    elif isinstance(f, (And, Or)):
        yield from subformulas(f.left)
        yield from subformulas(f.right)
    elif isinstance(f, (Exists, Forall)):
        yield from subformulas(f.body)


def conj(parts: Iterable[Formula]) -> Formula:
    """Left-associated conjunction of a nonempty list."""
    parts = list(parts)
    if not parts:
        raise FormulaError("empty conjunction")
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


def disj(parts: Iterable[Formula]) -> Formula:
    parts = list(parts)
    if not parts:
        raise FormulaError("empty disjunction")
    out = parts[0]
    for p in parts[1:]:
        out = Or(out, p)
    return out


def fo_implies(a: Formula, b: Formula) -> Formula:
    return Or(Not(a), b)


def fo_iff(a: Formula, b: Formula) -> Formula:
    return And(fo_implies(a, b), fo_implies(b, a))


def exists_seq(names: Iterable[str], body: Formula) -> Formula:
    for v in reversed(list(names)):
        body = Exists(v, body)
    return body


def forall_seq(names: Iterable[str], body: Formula) -> Formula:
    for v in reversed(list(names)):
        body = Forall(v, body)
    return body


# ---------------------------------------------------------------------------
# Fresh names

def fresh_name(base: str, used: set[str]) -> str:
    """Lowest unused suffix on the base name's stem; deterministic."""
    if base not in used:
        return base
    stem = base.rstrip("0123456789") or base
    i = 1
    while f"{stem}{i}" in used:
        i += 1
    return f"{stem}{i}"


def fresh_names(base: str, count: int, used: set[str]) -> list[str]:
    """Fresh variants of ``base``; extends ``used`` in place."""
    out = []
    for _ in range(count):
        v = fresh_name(base, used)
        used.add(v)
        out.append(v)
    return out


# ---------------------------------------------------------------------------
# Substitution

def substitute_parallel(f: Formula, mapping: Mapping[str, Term]) -> Formula:
    """Simultaneous capture-checked substitution of terms for variables.

    Raises CaptureError if replacement would be captured by a binder, and
    FormulaError if a non-variable term hits an inclusion atom (the caller
    should desugar to term inclusion instead).
    """
    live = {v: t for v, t in mapping.items() if not (isinstance(t, Var) and t.name == v)}
    return _subst(f, live)


def substitute(f: Formula, var: str, t: Term) -> Formula:
    return substitute_parallel(f, {var: t})


def _subst(f: Formula, mapping: Mapping[str, Term]) -> Formula:
    mapping = {v: t for v, t in mapping.items() if v in free_vars(f)}
    if not mapping:
        return f
    if isinstance(f, Equals):
        return Equals(subst_term(f.left, mapping), subst_term(f.right, mapping))
    if isinstance(f, Relation):
        return Relation(f.name, tuple(subst_term(a, mapping) for a in f.args))
    if isinstance(f, Inclusion):
        return Inclusion(_subst_varseq(f.lhs, mapping), _subst_varseq(f.rhs, mapping))
    if isinstance(f, Not):
        return Not(_subst(f.body, mapping))
    if isinstance(f, And):
        return And(_subst(f.left, mapping), _subst(f.right, mapping))
    if isinstance(f, Or):
        return Or(_subst(f.left, mapping), _subst(f.right, mapping))
    if isinstance(f, (Exists, Forall)):
        inner = {v: t for v, t in mapping.items() if v != f.var}
        for v, t in inner.items():
            if f.var in term_vars(t):
                raise CaptureError(f.var, v)
        body = _subst(f.body, inner)
        return Exists(f.var, body) if isinstance(f, Exists) else Forall(f.var, body)
    raise FormulaError(f"cannot substitute in {f!r}")


def _subst_varseq(seq: tuple[str, ...], mapping: Mapping[str, Term]) -> tuple[str, ...]:
    out = []
    for v in seq:
        t = mapping.get(v)
        if t is None:
            out.append(v)
        elif isinstance(t, Var):
            out.append(t.name)
        else:
            raise FormulaError(
                "inclusion atoms take variables only; use term-inclusion desugaring"
            )
    return tuple(out)


def rename_bound(f: Formula, reserved: Iterable[str] = ()) -> Formula:
    """Alpha-variant with pairwise-distinct bound variables.

    Bound names end up disjoint from ``reserved`` and the free variables;
    fresh names come from the deterministic gensym.
    """
    used = set(reserved) | set(free_vars(f))
    return _rename(f, {}, used)


def _rename(f: Formula, ren: Mapping[str, str], used: set[str]) -> Formula:
    if isinstance(f, Bottom):
        return f
    if isinstance(f, Equals):
        m = {v: Var(w) for v, w in ren.items()}
        return Equals(subst_term(f.left, m), subst_term(f.right, m))
    if isinstance(f, Relation):
        m = {v: Var(w) for v, w in ren.items()}
        return Relation(f.name, tuple(subst_term(a, m) for a in f.args))
    if isinstance(f, Inclusion):
        return Inclusion(
            tuple(ren.get(v, v) for v in f.lhs), tuple(ren.get(v, v) for v in f.rhs)
        )
    if isinstance(f, Not):
        return Not(_rename(f.body, ren, used))
    if isinstance(f, And):
        return And(_rename(f.left, ren, used), _rename(f.right, ren, used))
    if isinstance(f, Or):
        return Or(_rename(f.left, ren, used), _rename(f.right, ren, used))
    if isinstance(f, (Exists, Forall)):
        new = fresh_name(f.var, used)
        used.add(new)
        body = _rename(f.body, {**ren, f.var: new}, used)
        return Exists(new, body) if isinstance(f, Exists) else Forall(new, body)
    raise FormulaError(f"cannot rename in {f!r}")


def alpha_equivalent(a: Formula, b: Formula) -> bool:
    return _alpha(a, b, {}, {})


def _alpha(a: Formula, b: Formula, ra: Mapping[str, str], rb: Mapping[str, str]) -> bool:
    if type(a) is not type(b):
        return False
    if isinstance(a, Bottom):
        return True

    def tv(t: Term, r: Mapping[str, str]) -> Term:
        return subst_term(t, {v: Var(w) for v, w in r.items()})

    if isinstance(a, Equals):
        return tv(a.left, ra) == tv(b.left, rb) and tv(a.right, ra) == tv(b.right, rb)
    if isinstance(a, Relation):
        return a.name == b.name and all(
            tv(x, ra) == tv(y, rb) for x, y in zip(a.args, b.args)
        ) and len(a.args) == len(b.args)
    if isinstance(a, Inclusion):
        ren_a = tuple(ra.get(v, v) for v in a.lhs + a.rhs)
        ren_b = tuple(rb.get(v, v) for v in b.lhs + b.rhs)
        return len(a.lhs) == len(b.lhs) and ren_a == ren_b
    if isinstance(a, Not):
        return _alpha(a.body, b.body, ra, rb)
    if isinstance(a, (And, Or)):
        return _alpha(a.left, b.left, ra, rb) and _alpha(a.right, b.right, ra, rb)
    # quantifiers: map both binders onto one canonical placeholder
    mark = f"#{len(ra)}"
    return _alpha(a.body, b.body, {**ra, a.var: mark}, {**rb, b.var: mark})


# ---------------------------------------------------------------------------
# Sugar

@dataclass(frozen=True)
class TermInclusion:
    lhs: tuple[Term, ...]
    rhs: tuple[Term, ...]

    def __post_init__(self):
        if len(self.lhs) != len(self.rhs) or not self.lhs:
            raise FormulaError("term inclusion sides must be nonempty and equal length")


@dataclass(frozen=True)
class Anonymity:
    lhs: tuple[str, ...]
    rhs: tuple[str, ...]


@dataclass(frozen=True)
class WeakNeg:
    body: Formula

    def __post_init__(self):
        if not is_first_order(self.body):
            raise FormulaError("weak negation applies to first-order formulas only")


SugarForm = Union[TermInclusion, Anonymity, WeakNeg]


def desugar(s: SugarForm, reserved: Iterable[str] = ()) -> Formula:
    """Expand sugar into the kernel language with deterministic fresh names."""
    if isinstance(s, TermInclusion):
        return _desugar_term_inclusion(s, reserved)
    if isinstance(s, Anonymity):
        return _desugar_anonymity(s, reserved)
    if isinstance(s, WeakNeg):
        return _desugar_weak_neg(s, reserved)
    raise FormulaError(f"not a sugar form: {s!r}")


def _desugar_term_inclusion(s: TermInclusion, reserved: Iterable[str]) -> Formula:
    # [t1..tn] <= [t1'..tn']  ~~>  E u.. E w.. (u = t & w = t' & u <= w)
    used = set(reserved)
    for t in s.lhs + s.rhs:
        used |= term_names(t)
    us = fresh_names("u", len(s.lhs), used)
    ws = fresh_names("w", len(s.rhs), used)
    parts: list[Formula] = [Equals(Var(u), t) for u, t in zip(us, s.lhs)]
    parts += [Equals(Var(w), t) for w, t in zip(ws, s.rhs)]
    parts.append(Inclusion(tuple(us), tuple(ws)))
    return exists_seq(us + ws, conj(parts))


def _desugar_anonymity(s: Anonymity, reserved: Iterable[str]) -> Formula:
    # x ups y  ~~>  E v.. (x,v <= x,y & (v1 != y1 | ... | vm != ym));  x ups <> is bot
    if not s.rhs:
        return Bottom()
    used = set(reserved) | set(s.lhs) | set(s.rhs)
    vs = fresh_names("v", len(s.rhs), used)
    atom = Inclusion(s.lhs + tuple(vs), s.lhs + s.rhs)
    diffs = disj([Not(Equals(Var(v), Var(y))) for v, y in zip(vs, s.rhs)])
    return exists_seq(vs, And(atom, diffs))


def _desugar_weak_neg(s: WeakNeg, reserved: Iterable[str]) -> Formula:
    # snot a(x)  ~~>  E y.. (y <= x & ~a(y/x)); for sentences plain ~a is equivalent
    xs = sorted(free_vars(s.body))
    if not xs:
        return Not(s.body)
    used = set(reserved) | set(all_names(s.body))
    ys = fresh_names("y", len(xs), used)
    negated = Not(substitute_parallel(s.body, {x: Var(y) for x, y in zip(xs, ys)}))
    return exists_seq(ys, And(Inclusion(tuple(ys), tuple(xs)), negated))


def weak_neg_of(body: Formula) -> Formula:
    """The canonical kernel form of the weak classical negation of ``body``."""
    return desugar(WeakNeg(body))


# ---------------------------------------------------------------------------
# Pretty printing

_PREC_OR = 1
_PREC_AND = 2
_PREC_NOT = 3
_PREC_ATOM = 4


def pretty_term(t: Term) -> str:
    if isinstance(t, (Var, Const)):
        return t.name
    return f"{t.func}({', '.join(pretty_term(a) for a in t.args)})"


def pretty(f: Formula) -> str:
    """Concrete syntax that reparses to an alpha-equivalent formula."""
    return _pp(f, 0)


def _pp(f: Formula, ctx: int) -> str:
    if isinstance(f, Bottom):
        return "bot"
    if isinstance(f, Equals):
        return f"{pretty_term(f.left)} = {pretty_term(f.right)}"
    if isinstance(f, Relation):
        if f.name == "<" and len(f.args) == 2:
            return f"{pretty_term(f.args[0])} < {pretty_term(f.args[1])}"
        return f"{f.name}({', '.join(pretty_term(a) for a in f.args)})"
    if isinstance(f, Inclusion):
        return f"{','.join(f.lhs)} <= {','.join(f.rhs)}"
    if isinstance(f, Not):
        return _wrap(f"~{_pp(f.body, _PREC_NOT)}", _PREC_NOT, ctx)
    if isinstance(f, And):
        s = f"{_pp(f.left, _PREC_AND)} & {_pp(f.right, _PREC_AND + 1)}"
        return _wrap(s, _PREC_AND, ctx)
    if isinstance(f, Or):
        s = f"{_pp(f.left, _PREC_OR)} | {_pp(f.right, _PREC_OR + 1)}"
        return _wrap(s, _PREC_OR, ctx)
    if isinstance(f, Exists):
        return _wrap(f"E {f.var}. {_pp(f.body, 0)}", 0, ctx)
    if isinstance(f, Forall):
        return _wrap(f"A {f.var}. {_pp(f.body, 0)}", 0, ctx)
    raise FormulaError(f"cannot print {f!r}")


def _wrap(s: str, prec: int, ctx: int) -> str:
    return f"({s})" if prec < ctx else s
