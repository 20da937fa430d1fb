"""Text syntax for terms, types, contexts and typings.

Terms::

    term ::= atom+                      (left-associative application)
    atom ::= NAT | '\\.' term | '(' term ')'

Types and contexts::

    T   ::= VAR | U '->' T              ('->' is right-associative)
    U   ::= 'w' | T | U '/\\' U          ('/\\' binds tighter than '->')
    VAR ::= 'a' NAT
    ctx ::= 'nil' | U '.' ctx
    typing ::= ctx '|-' T

The printers emit a canonical form that parses back to the same value.
"""
from __future__ import annotations

import re

from .itypes import OMEGA, Arrow, Context, TVar, TypeT, TypeU, Typing
from .terms import Abs, App, Index, Term


class ParseError(ValueError):
    def __init__(self, text: str, pos: int, expected: set[str] | str):
        if isinstance(expected, str):
            expected = {expected}
        self.text = text
        self.pos = pos
        self.expected = frozenset(expected)
        got = text[pos:pos + 10] or "end of input"
        super().__init__(f"at position {pos}: expected {' or '.join(sorted(self.expected))}, got {got!r}")


_TOKEN = re.compile(r"\s*(?:(?P<nat>\d+)|(?P<var>a\d+)|(?P<sym>->|/\\|\|-|\\|λ|[().w])|(?P<nil>nil))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            raise ParseError(text, pos, "a token")
        start = m.start(m.lastgroup)
        kind = m.lastgroup
        value = m.group(kind)
        if kind == "sym" and value == "λ":
            value = "\\"
        tokens.append((kind, value, start))
        pos = m.end()
    tokens.append(("eof", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    @property
    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.i]

    def at(self, value: str) -> bool:
        kind, val, _ = self.peek
        return val == value and kind != "eof"

    def expect(self, value: str) -> None:
        if not self.at(value):
            raise ParseError(self.text, self.peek[2], repr(value))
        self.i += 1

    def fail(self, expected) -> ParseError:
        return ParseError(self.text, self.peek[2], expected)

    def end(self) -> None:
        if self.peek[0] != "eof":
            raise self.fail("end of input")

    # terms

    def term(self) -> Term:
        result = self.atom()
        while self.starts_atom():
            result = App(result, self.atom())
        return result

    def starts_atom(self) -> bool:
        kind, value, _ = self.peek
        return kind == "nat" or value in ("\\", "(")

    def atom(self) -> Term:
        kind, value, pos = self.peek
        if kind == "nat":
            self.i += 1
            n = int(value)
            if n < 1:
                raise ParseError(self.text, pos, "an index >= 1")
            return Index(n)
        if value == "\\":
            self.i += 1
            self.expect(".")
            return Abs(self.term())
        if value == "(":
            self.i += 1
            t = self.term()
            self.expect(")")
            return t
        raise self.fail({"index", "'\\.'", "'('"})

    # types

    def layer(self) -> TypeU:
        """Parse ``U`` possibly followed by ``-> T``; returns the layer."""
        members = list(self.u_atom())
        while self.at("/\\"):
            self.i += 1
            members.extend(self.u_atom())
        if self.at("->"):
            self.i += 1
            right = self.layer()
            if right.single is None:
                raise self.fail("a type (not an intersection) right of '->'")
            return TypeU((Arrow(TypeU(tuple(members)), right.single),))
        return TypeU(tuple(members))

    def u_atom(self) -> tuple[TypeT, ...]:
        kind, value, _ = self.peek
        if kind == "var":
            self.i += 1
            return (TVar(int(value[1:])),)
        if value == "w":
            self.i += 1
            return ()
        if value == "(":
            self.i += 1
            inner = self.layer()
            self.expect(")")
            return inner.items
        raise self.fail({"type variable", "'w'", "'('"})

    def type_(self) -> TypeT:
        pos = self.peek[2]
        layer = self.layer()
        if layer.single is None:
            raise ParseError(self.text, pos, "a type (omega and intersections are not types)")
        return layer.single

    def context(self) -> Context:
        entries = []
        while self.peek[0] != "nil":
            if self.peek[0] == "eof":
                raise self.fail("'nil'")
            entries.append(self.layer())
            self.expect(".")
        self.i += 1
        return tuple(entries)


def parse_term(text: str) -> Term:
    p = _Parser(text)
    t = p.term()
    p.end()
    return t


def parse_type(text: str) -> TypeT:
    p = _Parser(text)
    t = p.type_()
    p.end()
    return t


def parse_u(text: str) -> TypeU:
    p = _Parser(text)
    layer = p.layer()
    p.end()
    return layer


def parse_context(text: str) -> Context:
    p = _Parser(text)
    g = p.context()
    p.end()
    return g


def parse_typing(text: str) -> Typing:
    p = _Parser(text)
    g = p.context()
    p.expect("|-")
    t = p.type_()
    p.end()
    return Typing(g, t)


def print_term(m: Term) -> str:
    if isinstance(m, Index):
        return str(m.n)
    if isinstance(m, Abs):
        return "\\. " + _body(m.body)
    parts = []
    fun = m
    args = []
    while isinstance(fun, App):
        args.append(fun.arg)
        fun = fun.fun
    args.reverse()
    parts.append(_paren(fun) if isinstance(fun, Abs) else print_term(fun))
    for i, a in enumerate(args):
        last = i == len(args) - 1
        if isinstance(a, App) or (isinstance(a, Abs) and not last):
            parts.append(_paren(a))
        else:
            parts.append(print_term(a))
    return " ".join(parts)


def _body(m: Term) -> str:
    return _paren(m) if isinstance(m, App) else print_term(m)


def _paren(m: Term) -> str:
    return f"({print_term(m)})"


def print_type(t: TypeT) -> str:
    if isinstance(t, TVar):
        return f"a{t.id}"
    left = t.left
    if left.is_omega:
        ls = "w"
    else:
        ls = " /\\ ".join(f"({print_type(x)})" if isinstance(x, Arrow) else print_type(x)
                          for x in left.items)
    return f"{ls} -> {print_type(t.right)}"


def print_u(v: TypeU) -> str:
    if v.is_omega:
        return "w"
    return " /\\ ".join(f"({print_type(x)})" if isinstance(x, Arrow) and len(v) > 1 else print_type(x)
                        for x in v.items)


def print_context(g: Context) -> str:
    parts = []
    for entry in g:
        s = print_u(entry)
        parts.append(f"({s})" if " " in s else s)
    parts.append("nil")
    return ".".join(parts)


def print_typing(t: Typing) -> str:
    return f"{print_context(t.context)} |- {print_type(t.ty)}"
