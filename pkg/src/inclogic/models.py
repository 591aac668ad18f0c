"""Finite first-order structures, teams, and their text file formats.

Model file format (``#`` starts a comment)::

    universe: a b c
    relation <=/2: (a,a) (a,b)
    function f/1: (a)->b (b)->a (c)->c
    constant zero: a

Team file: CSV with a header row of variable names and one row of element
ids per assignment.  An empty body is the empty team over that domain; a
file whose only content is the line ``<empty-domain>`` is the team {∅}.
"""

from __future__ import annotations

import csv
import io
import itertools
import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

from .syntax import Signature


class ModelError(ValueError):
    pass


@dataclass(frozen=True)
class Model:
    sig: Signature
    universe: tuple[str, ...]
    relations: Mapping[str, frozenset[tuple[str, ...]]]
    functions: Mapping[str, Mapping[tuple[str, ...], str]]
    constants: Mapping[str, str]

    def __post_init__(self):
        elems = set(self.universe)
        if len(self.universe) < 2:
            raise ModelError("model universe must have at least two elements")
        if len(elems) != len(self.universe):
            raise ModelError("duplicate universe elements")
        for name, arity in self.sig.relations.items():
            rows = self.relations.get(name)
            if rows is None:
                raise ModelError(f"missing table for relation {name!r}")
            for row in rows:
                if len(row) != arity or not set(row) <= elems:
                    raise ModelError(f"bad tuple {row!r} in relation {name!r}")
        for name, arity in self.sig.functions.items():
            table = self.functions.get(name)
            if table is None:
                raise ModelError(f"missing table for function {name!r}")
            for args in itertools.product(self.universe, repeat=arity):
                if args not in table:
                    raise ModelError(f"function {name!r} not total: missing {args!r}")
            for args, out in table.items():
                if len(args) != arity or not set(args) <= elems or out not in elems:
                    raise ModelError(f"bad entry {args!r}->{out!r} in function {name!r}")
        for name in self.sig.constants:
            if self.constants.get(name) not in elems:
                raise ModelError(f"constant {name!r} has no interpretation")


@dataclass(frozen=True)
class Team:
    """A set of assignments sharing a variable domain.

    Rows are tuples of element ids aligned with the sorted domain.
    ``Team((), frozenset({()}))`` is the singleton team with empty domain.
    """

    domain: tuple[str, ...]
    rows: frozenset[tuple[str, ...]]

    def __post_init__(self):
        if tuple(sorted(self.domain)) != self.domain:
            raise ModelError("team domain must be sorted")
        if len(set(self.domain)) != len(self.domain):
            raise ModelError("duplicate variables in team domain")
        for row in self.rows:
            if len(row) != len(self.domain):
                raise ModelError("team row length does not match domain")

    @staticmethod
    def from_assignments(assignments: Iterable[Mapping[str, str]],
                         domain: Iterable[str] | None = None) -> "Team":
        rows = []
        dom: tuple[str, ...] | None = tuple(sorted(domain)) if domain is not None else None
        for s in assignments:
            if dom is None:
                dom = tuple(sorted(s))
            elif set(s) != set(dom):
                raise ModelError("assignments with differing domains")
            rows.append(tuple(s[v] for v in dom))
        if dom is None:
            raise ModelError("cannot infer a domain from no assignments")
        return Team(dom, frozenset(rows))

    def assignments(self) -> Iterator[dict[str, str]]:
        for row in sorted(self.rows):
            yield dict(zip(self.domain, row))

    def is_empty(self) -> bool:
        return not self.rows

    def restrict(self, variables: Iterable[str]) -> "Team":
        keep = tuple(sorted(set(variables) & set(self.domain)))
        idx = [self.domain.index(v) for v in keep]
        return Team(keep, frozenset(tuple(row[i] for i in idx) for row in self.rows))

    def union(self, other: "Team") -> "Team":
        if self.domain != other.domain:
            raise ModelError("cannot union teams with different domains")
        return Team(self.domain, self.rows | other.rows)

    def __len__(self) -> int:
        return len(self.rows)


SINGLETON_EMPTY_DOMAIN = Team((), frozenset({()}))


# ---------------------------------------------------------------------------
# Model files

_DECL_RE = re.compile(
    r"^(universe|relation|function|constant)\s*(.*)$"
)
_NAME = r"(?:[A-Za-z_][A-Za-z0-9_']*|<)"


def parse_model(text: str) -> Model:
    """Parse a model file; the declarations define the signature."""
    universe: list[str] = []
    relations: dict[str, frozenset[tuple[str, ...]]] = {}
    rel_arities: dict[str, int] = {}
    functions: dict[str, dict[tuple[str, ...], str]] = {}
    fun_arities: dict[str, int] = {}
    constants: dict[str, str] = {}

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _DECL_RE.match(line)
        if m is None:
            raise ModelError(f"line {lineno}: unrecognized declaration {line!r}")
        kind, rest = m.group(1), m.group(2).strip()
        try:
            if kind == "universe":
                if not rest.startswith(":"):
                    raise ModelError("expected 'universe: a b c'")
                universe = rest[1:].split()
            elif kind == "relation":
                name, arity, body = _parse_decl_head(rest)
                tuples = frozenset(_parse_tuples(body, arity))
                relations[name] = tuples
                rel_arities[name] = arity
            elif kind == "function":
                name, arity, body = _parse_decl_head(rest)
                functions[name] = dict(_parse_map_entries(body, arity))
                fun_arities[name] = arity
            else:
                name, _, value = rest.partition(":")
                name, value = name.strip(), value.strip()
                if not name or not value:
                    raise ModelError("expected 'constant NAME: elem'")
                constants[name] = value
        except ModelError as e:
            raise ModelError(f"line {lineno}: {e}") from None

    sig = Signature(rel_arities, fun_arities, frozenset(constants))
    return Model(sig, tuple(universe), relations, functions, constants)


def _parse_decl_head(rest: str) -> tuple[str, int, str]:
    m = re.match(rf"^({_NAME})\s*/\s*(\d+)\s*:\s*(.*)$", rest)
    if m is None:
        raise ModelError(f"expected 'NAME/ARITY: ...', got {rest!r}")
    return m.group(1), int(m.group(2)), m.group(3)


def _parse_tuples(body: str, arity: int) -> Iterator[tuple[str, ...]]:
    for chunk in re.findall(r"\(([^()]*)\)", body):
        items = tuple(x.strip() for x in chunk.split(",")) if chunk.strip() else ()
        if len(items) != arity:
            raise ModelError(f"tuple ({chunk}) does not match arity {arity}")
        yield items
    stray = re.sub(r"\([^()]*\)", "", body).strip()
    if stray:
        raise ModelError(f"unexpected text {stray!r} in table")


def _parse_map_entries(body: str, arity: int) -> Iterator[tuple[tuple[str, ...], str]]:
    for part in body.split():
        m = re.match(r"^\(([^()]*)\)->(\S+)$", part)
        if m is None:
            raise ModelError(f"expected '(args)->value', got {part!r}")
        args = tuple(x.strip() for x in m.group(1).split(","))
        if len(args) != arity:
            raise ModelError(f"entry {part!r} does not match arity {arity}")
        yield args, m.group(2)


def format_model(model: Model) -> str:
    lines = [f"universe: {' '.join(model.universe)}"]
    for name in sorted(model.sig.relations):
        rows = " ".join(f"({','.join(t)})" for t in sorted(model.relations[name]))
        lines.append(f"relation {name}/{model.sig.relations[name]}: {rows}".rstrip())
    for name in sorted(model.sig.functions):
        entries = " ".join(
            f"({','.join(a)})->{v}" for a, v in sorted(model.functions[name].items())
        )
        lines.append(f"function {name}/{model.sig.functions[name]}: {entries}")
    for name in sorted(model.constants):
        lines.append(f"constant {name}: {model.constants[name]}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Team files

def parse_team(text: str) -> Team:
    stripped = text.strip()
    if stripped == "<empty-domain>":
        return SINGLETON_EMPTY_DOMAIN
    reader = csv.reader(io.StringIO(text))
    rows = [row for row in reader if row and any(cell.strip() for cell in row)]
    if not rows:
        raise ModelError("team file needs a header row (or the line '<empty-domain>')")
    header = [h.strip() for h in rows[0]]
    if len(set(header)) != len(header):
        raise ModelError("duplicate variables in team header")
    body = []
    for row in rows[1:]:
        if len(row) != len(header):
            raise ModelError(f"team row {row!r} does not match header")
        body.append({v: cell.strip() for v, cell in zip(header, row)})
    if not body:
        return Team(tuple(sorted(header)), frozenset())
    return Team.from_assignments(body, domain=header)


def format_team(team: Team) -> str:
    if team.domain == () and team.rows:
        return "<empty-domain>\n"
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(team.domain)
    for row in sorted(team.rows):
        writer.writerow(row)
    return out.getvalue()


def check_team_in_model(team: Team, model: Model):
    elems = set(model.universe)
    for row in team.rows:
        for value in row:
            if value not in elems:
                raise ModelError(f"team element {value!r} not in the model universe")
