"""Recursive-descent parser for the ASCII formula grammar.

Grammar reference (precedence ``~`` > ``&`` > ``|``; quantifiers scope
maximally to the right)::

    formula  := E x. formula | A x. formula | disjunction
    atom     := bot | t = t | t < t | R(t,...) | x,...,x <= y,...,y
              | xs ups ys | ~formula | snot formula
              | [t,...] <= [t,...] | ( formula )

``E``, ``A``, ``bot``, ``ups``, and ``snot`` are reserved words.  Sugar
(``ups``, ``snot``, bracketed term inclusion) is desugared at parse time;
the returned AST is always a kernel formula.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .syntax import (
    Anonymity,
    App,
    Bottom,
    Const,
    Equals,
    Exists,
    Forall,
    Formula,
    FormulaError,
    Inclusion,
    Not,
    And,
    Or,
    Relation,
    Signature,
    SugarForm,
    Term,
    TermInclusion,
    Var,
    WeakNeg,
    desugar,
    is_first_order,
)

RESERVED = {"E", "A", "bot", "ups", "snot"}

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<name>[A-Za-z_][A-Za-z0-9_']*)"
    r"|(?P<le><=)|(?P<lt><)|(?P<sym>[(),.=~&|\[\]]))"
)


class ParseError(FormulaError):
    def __init__(self, message: str, pos: int, text: str):
        super().__init__(f"{message} at position {pos}: ...{text[pos:pos + 24]!r}")
        self.pos = pos


@dataclass(frozen=True)
class _Tok:
    kind: str  # 'name' | 'le' | 'lt' | a literal symbol | 'eof'
    value: str
    pos: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            if text[pos:].strip() == "":
                break
            raise ParseError("unexpected character", pos, text)
        if m.group("name"):
            toks.append(_Tok("name", m.group("name"), m.start("name")))
        elif m.group("le"):
            toks.append(_Tok("le", "<=", m.start("le")))
        elif m.group("lt"):
            toks.append(_Tok("lt", "<", m.start("lt")))
        else:
            toks.append(_Tok(m.group("sym"), m.group("sym"), m.start("sym")))
        pos = m.end()
    toks.append(_Tok("eof", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str, sig: Signature):
        self.text = text
        self.sig = sig
        self.toks = _tokenize(text)
        self.i = 0

    # -- token helpers

    def peek(self, ahead: int = 0) -> _Tok:
        return self.toks[min(self.i + ahead, len(self.toks) - 1)]

    def next(self) -> _Tok:
        t = self.toks[self.i]
        if t.kind != "eof":
            self.i += 1
        return t

    def expect(self, kind: str) -> _Tok:
        t = self.peek()
        if t.kind != kind:
            self.fail(f"expected {kind!r}, found {t.value!r}")
        return self.next()

    def fail(self, message: str):
        raise ParseError(message, self.peek().pos, self.text)

    # -- grammar

    def formula(self) -> Formula:
        return self.disjunction()

    def disjunction(self) -> Formula:
        f = self.conjunction()
        while self.peek().kind == "|":
            self.next()
            f = Or(f, self.conjunction())
        return f

    def conjunction(self) -> Formula:
        f = self.unary()
        while self.peek().kind == "&":
            self.next()
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        t = self.peek()
        if t.kind == "~":
            self.next()
            body = self.unary()
            if not is_first_order(body):
                self.fail("negation applies to first-order formulas only")
            return Not(body)
        if t.kind == "name" and t.value == "snot":
            self.next()
            body = self.unary()
            if not is_first_order(body):
                self.fail("snot applies to first-order formulas only")
            return self._sugar(WeakNeg(body))
        if t.kind == "name" and t.value in ("E", "A"):
            self.next()
            var = self.var_name()
            self.expect(".")
            body = self.formula()  # maximal right scope
            return Exists(var, body) if t.value == "E" else Forall(var, body)
        return self.atom()

    def atom(self) -> Formula:
        t = self.peek()
        if t.kind == "(":
            self.next()
            f = self.formula()
            self.expect(")")
            return f
        if t.kind == "[":
            return self.term_inclusion()
        if t.kind == "name" and t.value == "bot":
            self.next()
            return Bottom()
        if t.kind == "name" and t.value == "ups":
            self.next()
            return self._sugar(Anonymity((), self.opt_var_seq()))
        if t.kind == "name" and t.value in self.sig.relations:
            return self.relation_atom()
        if t.kind in ("name",):
            return self.term_headed()
        self.fail(f"expected a formula, found {t.value!r}")

    def relation_atom(self) -> Formula:
        name = self.next().value
        arity = self.sig.relations[name]
        args: tuple[Term, ...] = ()
        if self.peek().kind == "(" or arity > 0:
            self.expect("(")
            if self.peek().kind != ")":
                parts = [self.term()]
                while self.peek().kind == ",":
                    self.next()
                    parts.append(self.term())
                args = tuple(parts)
            self.expect(")")
        if len(args) != arity:
            self.fail(f"relation {name!r} expects {arity} arguments, got {len(args)}")
        return Relation(name, args)

    def term_headed(self) -> Formula:
        """Atoms that start with a term: equality, infix <, inclusion, ups."""
        first = self.term()
        t = self.peek()
        if t.kind == "=":
            self.next()
            return Equals(first, self.term())
        if t.kind == "lt":
            self.next()
            if "<" not in self.sig.relations:
                self.fail("infix '<' used but relation '<' is not declared")
            return Relation("<", (first, self.term()))
        if t.kind in ("le", ",") or (t.kind == "name" and t.value == "ups"):
            lhs = [self.as_var(first)]
            while self.peek().kind == ",":
                self.next()
                lhs.append(self.var_name())
            nxt = self.peek()
            if nxt.kind == "le":
                self.next()
                rhs = self.var_seq()
                if len(lhs) != len(rhs):
                    self.fail("inclusion atom sides must have equal length")
                return Inclusion(tuple(lhs), tuple(rhs))
            if nxt.kind == "name" and nxt.value == "ups":
                self.next()
                return self._sugar(Anonymity(tuple(lhs), self.opt_var_seq()))
            self.fail("expected '<=' or 'ups' after variable sequence")
        self.fail(f"expected '=', '<', '<=', ',' or 'ups' after term, found {t.value!r}")

    def term_inclusion(self) -> Formula:
        self.expect("[")
        lhs = [self.term()]
        while self.peek().kind == ",":
            self.next()
            lhs.append(self.term())
        self.expect("]")
        self.expect("le")
        self.expect("[")
        rhs = [self.term()]
        while self.peek().kind == ",":
            self.next()
            rhs.append(self.term())
        self.expect("]")
        if len(lhs) != len(rhs):
            self.fail("term inclusion sides must have equal length")
        return self._sugar(TermInclusion(tuple(lhs), tuple(rhs)))

    def term(self) -> Term:
        t = self.peek()
        if t.kind != "name":
            self.fail(f"expected a term, found {t.value!r}")
        if t.value in RESERVED:
            self.fail(f"{t.value!r} is a reserved word")
        name = self.next().value
        if name in self.sig.functions:
            self.expect("(")
            args = [self.term()]
            while self.peek().kind == ",":
                self.next()
                args.append(self.term())
            self.expect(")")
            if len(args) != self.sig.functions[name]:
                self.fail(
                    f"function {name!r} expects {self.sig.functions[name]} arguments,"
                    f" got {len(args)}"
                )
            return App(name, tuple(args))
        if name in self.sig.constants:
            return Const(name)
        if name in self.sig.relations:
            self.fail(f"relation {name!r} used as a term")
        return Var(name)

    def var_name(self) -> str:
        t = self.peek()
        if t.kind != "name":
            self.fail(f"expected a variable, found {t.value!r}")
        if t.value in RESERVED:
            self.fail(f"{t.value!r} is a reserved word")
        if t.value in self.sig.names():
            self.fail(f"{t.value!r} is not a variable in this signature")
        return self.next().value

    def as_var(self, t: Term) -> str:
        if not isinstance(t, Var):
            self.fail("inclusion and anonymity atoms take variables only;"
                      " use [..] <= [..] for terms")
        return t.name

    def var_seq(self) -> list[str]:
        out = [self.var_name()]
        while self.peek().kind == ",":
            self.next()
            out.append(self.var_name())
        return out

    def opt_var_seq(self) -> tuple[str, ...]:
        t = self.peek()
        if t.kind == "name" and t.value not in RESERVED and t.value not in self.sig.names():
            return tuple(self.var_seq())
        return ()

    def _sugar(self, s: SugarForm) -> Formula:
        return desugar(s, self.sig.names())


def parse_formula(text: str, sig: Signature) -> Formula:
    """Parse against the signature; sugar is eliminated eagerly."""
    p = _Parser(text, sig)
    f = p.formula()
    if p.peek().kind != "eof":
        p.fail(f"unexpected trailing input {p.peek().value!r}")
    return f


def parse_term(text: str, sig: Signature) -> Term:
    p = _Parser(text, sig)
    t = p.term()
    if p.peek().kind != "eof":
        p.fail(f"unexpected trailing input {p.peek().value!r}")
    return t
