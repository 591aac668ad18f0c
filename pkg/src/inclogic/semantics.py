"""Team-semantics evaluation over finite models.

Two engines:

* ``eval_naive`` follows the satisfaction definition literally — it
  searches every cover for a disjunction and every supplement function for
  a lax existential.  It is the oracle: slow, guarded, and trusted.
* ``eval_fast`` computes the maximal satisfying subteam by fixpoint
  iteration (sound because inclusion-logic formulas are closed under
  unions) and reports whether it is the whole team.

Both engines treat first-order subformulas with the flat clause
"every row satisfies it", which is itself a clause of the definition.
``eval_naive(..., fo_flat=False)`` forces team-style recursion through
first-order connectives too, which is what the flatness property tests
exercise.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Mapping

from .models import Model, Team
from .syntax import (
    And,
    Bottom,
    Const,
    Equals,
    Exists,
    Forall,
    Formula,
    Inclusion,
    Not,
    Or,
    Relation,
    Term,
    Var,
    free_vars,
    is_first_order,
    quantifier_depth,
)


class EvalError(ValueError):
    pass


class GuardExceeded(EvalError):
    """A naive-engine guard tripped; no verdict was produced."""


@dataclass(frozen=True)
class Guards:
    """Instance-size limits for the naive engine (configuration, not truth)."""

    max_rows: int = 8
    max_universe: int = 4
    max_depth: int = 4
    max_work: int = 2_000_000


DEFAULT_GUARDS = Guards()


# ---------------------------------------------------------------------------
# First-order (Tarski) evaluation

def eval_term(model: Model, s: Mapping[str, str], t: Term) -> str:
    if isinstance(t, Var):
        try:
            return s[t.name]
        except KeyError:
            raise EvalError(f"unbound variable {t.name!r}") from None
    if isinstance(t, Const):
        return model.constants[t.name]
    args = tuple(eval_term(model, s, a) for a in t.args)
    return model.functions[t.func][args]


def eval_fo(model: Model, s: Mapping[str, str], f: Formula) -> bool:
    """Classical satisfaction of a first-order formula by one assignment."""
    if not is_first_order(f):
        raise EvalError("eval_fo requires a first-order formula")
    if not free_vars(f) <= set(s):
        missing = sorted(free_vars(f) - set(s))
        raise EvalError(f"assignment does not bind {missing}")
    return _fo(model, dict(s), f)


def _fo(model: Model, s: dict[str, str], f: Formula) -> bool:
    if isinstance(f, Bottom):
        return False
    if isinstance(f, Equals):
        return eval_term(model, s, f.left) == eval_term(model, s, f.right)
    if isinstance(f, Relation):
        args = tuple(eval_term(model, s, a) for a in f.args)
        return args in model.relations[f.name]
    if isinstance(f, Not):
        return not _fo(model, s, f.body)
    if isinstance(f, And):
        return _fo(model, s, f.left) and _fo(model, s, f.right)
    if isinstance(f, Or):
        return _fo(model, s, f.left) or _fo(model, s, f.right)
    if isinstance(f, Exists):
        old = s.get(f.var)
        try:
            return any(_fo(model, {**s, f.var: a}, f.body) for a in model.universe)
        finally:
            pass
    if isinstance(f, Forall):
        return all(_fo(model, {**s, f.var: a}, f.body) for a in model.universe)
    raise EvalError(f"not first-order: {f!r}")


# ---------------------------------------------------------------------------
# Team operations

def duplicate(team: Team, var: str, model: Model) -> Team:
    """X(M/x): extend (or overwrite) ``var`` with every universe element."""
    dom, insert_at, replaced = _extended_domain(team.domain, var)
    rows = set()
    for row in team.rows:
        for a in model.universe:
            rows.add(_extend_row(row, insert_at, replaced, a))
    return Team(dom, frozenset(rows))


def supplement(team: Team, var: str, choice: Mapping[tuple[str, ...], frozenset[str]]) -> Team:
    """X(F/x) for F given per row; every image must be a nonempty set."""
    if set(choice) != set(team.rows):
        raise EvalError("supplement function must be defined on exactly the team rows")
    dom, insert_at, replaced = _extended_domain(team.domain, var)
    rows = set()
    for row in team.rows:
        image = choice[row]
        if not image:
            raise EvalError("supplement function images must be nonempty")
        for a in image:
            rows.add(_extend_row(row, insert_at, replaced, a))
    return Team(dom, frozenset(rows))


def _extended_domain(domain: tuple[str, ...], var: str) -> tuple[tuple[str, ...], int, bool]:
    if var in domain:
        return domain, domain.index(var), True
    dom = tuple(sorted(domain + (var,)))
    return dom, dom.index(var), False


def _extend_row(row: tuple[str, ...], at: int, replaced: bool, value: str) -> tuple[str, ...]:
    if replaced:
        return row[:at] + (value,) + row[at + 1:]
    return row[:at] + (value,) + row[at:]


def _check_free_vars(team: Team, f: Formula):
    missing = free_vars(f) - set(team.domain)
    if missing:
        raise EvalError(f"team domain does not cover free variables {sorted(missing)}")


def _positions(domain: tuple[str, ...], names: tuple[str, ...]) -> tuple[int, ...]:
    return tuple(domain.index(v) for v in names)


# ---------------------------------------------------------------------------
# Naive (literal) engine

def eval_naive(model: Model, team: Team, f: Formula,
               guards: Guards = DEFAULT_GUARDS, fo_flat: bool = True) -> bool:
    """Literal evaluation of the satisfaction definition, with guards."""
    _check_free_vars(team, f)
    if len(team) > guards.max_rows:
        raise GuardExceeded(f"team has {len(team)} rows > guard {guards.max_rows}")
    if len(model.universe) > guards.max_universe:
        raise GuardExceeded(
            f"universe has {len(model.universe)} elements > guard {guards.max_universe}")
    if quantifier_depth(f) > guards.max_depth:
        raise GuardExceeded(
            f"quantifier depth {quantifier_depth(f)} > guard {guards.max_depth}")
    state = _NaiveState(model, guards, fo_flat)
    return state.eval(f, team)


class _NaiveState:
    def __init__(self, model: Model, guards: Guards, fo_flat: bool):
        self.model = model
        self.guards = guards
        self.fo_flat = fo_flat
        self.memo: dict[tuple, bool] = {}
        self.work = 0

    def tick(self, amount: int = 1):
        self.work += amount
        if self.work > self.guards.max_work:
            raise GuardExceeded(f"naive work budget {self.guards.max_work} exhausted")

    def eval(self, f: Formula, team: Team) -> bool:
        key = (f, team.domain, team.rows)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        self.tick()
        out = self._eval(f, team)
        self.memo[key] = out
        return out

    def _eval(self, f: Formula, team: Team) -> bool:
        model = self.model
        if isinstance(f, Bottom):
            return team.is_empty()
        if self.fo_flat and is_first_order(f):
            self.tick(len(team))
            return all(_fo(model, dict(zip(team.domain, row)), f) for row in team.rows)
        if isinstance(f, (Equals, Relation)):
            self.tick(len(team))
            return all(_fo(model, dict(zip(team.domain, row)), f) for row in team.rows)
        if isinstance(f, Not):
            self.tick(len(team))
            return all(
                not _fo(model, dict(zip(team.domain, row)), f.body) for row in team.rows
            )
        if isinstance(f, Inclusion):
            return self._inclusion(f, team)
        if isinstance(f, And):
            return self.eval(f.left, team) and self.eval(f.right, team)
        if isinstance(f, Or):
            return self._disjunction(f, team)
        if isinstance(f, Exists):
            return self._exists(f, team)
        if isinstance(f, Forall):
            return self.eval(f.body, duplicate(team, f.var, model))
        raise EvalError(f"cannot evaluate {f!r}")

    def _inclusion(self, f: Inclusion, team: Team) -> bool:
        lpos = _positions(team.domain, f.lhs)
        rpos = _positions(team.domain, f.rhs)
        self.tick(len(team))
        rvalues = {tuple(row[i] for i in rpos) for row in team.rows}
        return all(tuple(row[i] for i in lpos) in rvalues for row in team.rows)

    def _disjunction(self, f: Or, team: Team) -> bool:
        rows = sorted(team.rows)
        n = len(rows)
        # all covers X = Y ∪ Z, factored through the satisfying subteams of
        # each disjunct (memoised, so each subteam is evaluated once)
        left_sat = []
        for bits in range(1 << n):
            self.tick()
            sub = Team(team.domain, frozenset(rows[i] for i in range(n) if bits >> i & 1))
            if self.eval(f.left, sub):
                left_sat.append(bits)
        full = (1 << n) - 1
        for bits in left_sat:
            rest = full & ~bits
            extras = [i for i in range(n) if bits >> i & 1]
            for k in range(len(extras) + 1):
                for extra in itertools.combinations(extras, k):
                    self.tick()
                    zbits = rest
                    for i in extra:
                        zbits |= 1 << i
                    sub = Team(team.domain,
                               frozenset(rows[i] for i in range(n) if zbits >> i & 1))
                    if self.eval(f.right, sub):
                        return True
        return False

    def _exists(self, f: Exists, team: Team) -> bool:
        if team.is_empty():
            # the empty supplement function yields the empty team
            return self.eval(f.body, Team(*_empty_like(team, f.var)))
        rows = sorted(team.rows)
        subsets = _nonempty_subsets(self.model.universe)
        dom, insert_at, replaced = _extended_domain(team.domain, f.var)
        # every supplement function, smallest images first
        for images in itertools.product(subsets, repeat=len(rows)):
            self.tick()
            out = set()
            for row, image in zip(rows, images):
                for a in image:
                    out.add(_extend_row(row, insert_at, replaced, a))
            if self.eval(f.body, Team(dom, frozenset(out))):
                return True
        return False


def _empty_like(team: Team, var: str) -> tuple[tuple[str, ...], frozenset]:
    dom, _, _ = _extended_domain(team.domain, var)
    return dom, frozenset()


def _nonempty_subsets(universe: tuple[str, ...]) -> list[tuple[str, ...]]:
    out = []
    for k in range(1, len(universe) + 1):
        out.extend(itertools.combinations(universe, k))
    return out


_COST_SATURATION = 1e18


def naive_cost_estimate(f: Formula, rows: int, universe: int,
                        fo_flat: bool = True) -> float:
    """Rough upper bound on naive clause expansions, saturating at 1e18;
    used to sample feasible instances for the oracle-equivalence suites."""
    rows = min(rows, 4096)
    if isinstance(f, (Bottom, Equals, Relation, Inclusion)):
        return max(rows, 1)
    if fo_flat and is_first_order(f):
        return max(rows, 1)
    if isinstance(f, Not):
        return max(rows, 1)
    if isinstance(f, And):
        return min(naive_cost_estimate(f.left, rows, universe, fo_flat)
                   + naive_cost_estimate(f.right, rows, universe, fo_flat),
                   _COST_SATURATION)
    if isinstance(f, Or):
        splits = 2.0 ** min(rows, 64)
        return min(splits * (naive_cost_estimate(f.left, rows, universe, fo_flat)
                             + naive_cost_estimate(f.right, rows, universe, fo_flat)),
                   _COST_SATURATION)
    if isinstance(f, Exists):
        choices = (2.0 ** universe - 1) ** min(rows, 64)
        return min(choices * naive_cost_estimate(f.body, rows * universe, universe,
                                                 fo_flat),
                   _COST_SATURATION)
    if isinstance(f, Forall):
        return naive_cost_estimate(f.body, rows * universe, universe, fo_flat)
    return _COST_SATURATION


# ---------------------------------------------------------------------------
# Maximal-subteam engine

def max_subteam(model: Model, team: Team, f: Formula) -> Team:
    """The largest subteam of ``team`` satisfying ``f``.

    Exists and is unique because inclusion-logic formulas are closed under
    unions of satisfying teams; computed by clause-wise greatest-fixpoint
    iteration.
    """
    _check_free_vars(team, f)
    return _MaxState(model).max(f, team)


def eval_fast(model: Model, team: Team, f: Formula) -> bool:
    """Satisfaction via the maximal-subteam engine."""
    return max_subteam(model, team, f).rows == team.rows


class _MaxState:
    def __init__(self, model: Model):
        self.model = model
        self.memo: dict[tuple, Team] = {}

    def max(self, f: Formula, team: Team) -> Team:
        key = (f, team.domain, team.rows)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        out = self._max(f, team)
        self.memo[key] = out
        return out

    def _max(self, f: Formula, team: Team) -> Team:
        model = self.model
        if isinstance(f, Bottom):
            return Team(team.domain, frozenset())
        if is_first_order(f):
            keep = frozenset(
                row for row in team.rows if _fo(model, dict(zip(team.domain, row)), f)
            )
            return Team(team.domain, keep)
        if isinstance(f, Inclusion):
            return self._inclusion(f, team)
        if isinstance(f, And):
            current = team
            while True:
                nxt = self.max(f.right, self.max(f.left, current))
                if nxt.rows == current.rows:
                    return current
                current = nxt
        if isinstance(f, Or):
            return self.max(f.left, team).union(self.max(f.right, team))
        if isinstance(f, Exists):
            dup = duplicate(team, f.var, model)
            best = self.max(f.body, dup)
            dom, insert_at, replaced = _extended_domain(team.domain, f.var)
            keep = frozenset(
                row for row in team.rows
                if any(_extend_row(row, insert_at, replaced, a) in best.rows
                       for a in model.universe)
            )
            return Team(team.domain, keep)
        if isinstance(f, Forall):
            current = team
            dom, insert_at, replaced = _extended_domain(team.domain, f.var)
            while True:
                dup = duplicate(current, f.var, model)
                best = self.max(f.body, dup)
                keep = frozenset(
                    row for row in current.rows
                    if all(_extend_row(row, insert_at, replaced, a) in best.rows
                           for a in model.universe)
                )
                if keep == current.rows:
                    return current
                current = Team(team.domain, keep)
        raise EvalError(f"cannot evaluate {f!r}")

    def _inclusion(self, f: Inclusion, team: Team) -> Team:
        lpos = _positions(team.domain, f.lhs)
        rpos = _positions(team.domain, f.rhs)
        rows = set(team.rows)
        while True:
            rvalues = {tuple(row[i] for i in rpos) for row in rows}
            keep = {row for row in rows if tuple(row[i] for i in lpos) in rvalues}
            if keep == rows:
                return Team(team.domain, frozenset(rows))
            rows = keep


def evaluate(model: Model, team: Team, f: Formula, engine: str = "fast",
             guards: Guards = DEFAULT_GUARDS) -> bool:
    """Dispatch by engine name; ``both`` asserts the engines agree."""
    if engine == "fast":
        return eval_fast(model, team, f)
    if engine == "naive":
        return eval_naive(model, team, f, guards)
    if engine == "both":
        fast = eval_fast(model, team, f)
        naive = eval_naive(model, team, f, guards)
        if fast != naive:
            raise EvalError(
                f"engine disagreement: fast={fast} naive={naive} on {f!r}")
        return fast
    raise EvalError(f"unknown engine {engine!r}")
