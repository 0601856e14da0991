"""Concrete syntax: a small recursive-descent parser and a canonical printer.

Grammar, loosest first::

    orlist := relation ("or" relation)* | "no" "solutions"
    relation := sum ["=" sum]
    sum    := term (("+"|"-") term)*
    term   := factor (("*"|"/") factor)*
    factor := atom ["^" atom]
    atom   := int | var | "sqrt" "(" sum ")" | "(" sum ")" | "-" factor

"or" operands must be relations. Whitespace is insignificant. The parser
accepts the Unicode aliases sqrt-radical and or-vee; the printer never
emits them. Printing uses minimal parentheses, so parse(print(e)) == e
for every constructible term.
"""

from __future__ import annotations

from dataclasses import dataclass

from .terms import (
    Add,
    Div,
    Eq,
    Expr,
    ImaginaryUnit,
    IntLit,
    MetaVar,
    Mul,
    Neg,
    OrList,
    Pow,
    Sqrt,
    Sub,
    Var,
)


class ParseError(Exception):
    def __init__(self, message: str, position: int) -> None:
        super().__init__(f"{message} (at position {position})")
        self.position = position


_KEYWORDS = {"or", "sqrt", "no", "solutions"}

_ALIASES = {"√": "sqrt", "∨": "or", "−": "-", "·": "*"}


@dataclass(frozen=True)
class _Token:
    kind: str  # "int" | "name" | "meta" | symbol itself
    text: str
    pos: int


def _tokenize(text: str) -> list[_Token]:
    out: list[_Token] = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in _ALIASES:
            alias = _ALIASES[ch]
            kind = "name" if alias.isalpha() else alias
            out.append(_Token(kind, alias, i))
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            out.append(_Token("int", text[i:j], i))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            out.append(_Token("name", text[i:j], i))
            i = j
            continue
        if ch == "?":
            j = i + 1
            if j >= n or not (text[j].isalpha() or text[j] == "_"):
                raise ParseError("expected a name after '?'", i)
            k = j
            while k < n and (text[k].isalnum() or text[k] == "_"):
                k += 1
            out.append(_Token("meta", text[j:k], i))
            i = k
            continue
        if ch in "+-*/^=()":
            out.append(_Token(ch, ch, i))
            i += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", i)
    out.append(_Token("end", "", n))
    return out


class _Parser:
    def __init__(self, tokens: list[_Token], allow_meta: bool) -> None:
        self.tokens = tokens
        self.pos = 0
        self.allow_meta = allow_meta

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def next(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str) -> _Token:
        tok = self.peek()
        if tok.kind != kind:
            raise ParseError(f"expected {kind!r}, found {tok.text or 'end of input'!r}", tok.pos)
        return self.next()

    def at_name(self, word: str) -> bool:
        tok = self.peek()
        return tok.kind == "name" and tok.text == word

    def orlist(self) -> Expr:
        if self.at_name("no"):
            start = self.next()
            tok = self.peek()
            if not self.at_name("solutions"):
                raise ParseError("expected 'solutions' after 'no'", tok.pos)
            self.next()
            return OrList(())
        first = self.relation()
        if not self.at_name("or"):
            return first
        parts = [first]
        while self.at_name("or"):
            tok = self.next()
            if not isinstance(first, Eq):
                raise ParseError("'or' operands must be equations", tok.pos)
            nxt = self.relation()
            if not isinstance(nxt, Eq):
                raise ParseError("'or' operands must be equations", tok.pos)
            parts.append(nxt)
        return OrList(tuple(parts))

    def relation(self) -> Expr:
        left = self.sum()
        if self.peek().kind == "=":
            self.next()
            right = self.sum()
            return Eq(left, right)
        return left

    def sum(self) -> Expr:
        e = self.term()
        while self.peek().kind in ("+", "-"):
            op = self.next()
            rhs = self.term()
            e = Add(e, rhs) if op.kind == "+" else Sub(e, rhs)
        return e

    def term(self) -> Expr:
        e = self.factor()
        while self.peek().kind in ("*", "/"):
            op = self.next()
            rhs = self.factor()
            e = Mul(e, rhs) if op.kind == "*" else Div(e, rhs)
        return e

    def factor(self) -> Expr:
        base = self.atom()
        if self.peek().kind == "^":
            self.next()
            return Pow(base, self.atom())
        return base

    def atom(self) -> Expr:
        tok = self.peek()
        if tok.kind == "int":
            self.next()
            return IntLit(int(tok.text))
        if tok.kind == "meta":
            self.next()
            if not self.allow_meta:
                raise ParseError("pattern variables are not allowed here", tok.pos)
            return MetaVar(tok.text)
        if tok.kind == "name":
            if tok.text == "sqrt":
                self.next()
                self.expect("(")
                inner = self.sum()
                self.expect(")")
                return Sqrt(inner)
            if tok.text in _KEYWORDS:
                raise ParseError(f"unexpected keyword {tok.text!r}", tok.pos)
            self.next()
            return Var(tok.text)
        if tok.kind == "(":
            self.next()
            inner = self.sum()
            self.expect(")")
            return inner
        if tok.kind == "-":
            self.next()
            return Neg(self.factor())
        raise ParseError(f"unexpected {tok.text or 'end of input'!r}", tok.pos)


def parse(text: str, *, allow_meta: bool = False) -> Expr:
    parser = _Parser(_tokenize(text), allow_meta)
    result = parser.orlist()
    trailing = parser.peek()
    if trailing.kind != "end":
        raise ParseError(f"unexpected trailing input {trailing.text!r}", trailing.pos)
    return result


def parse_pattern(text: str) -> Expr:
    return parse(text, allow_meta=True)


# Syntactic categories, tighter binds higher. Neg sits between Pow and the
# true atoms: it may appear anywhere a factor may, but never as a Pow base.
_OR, _EQ, _SUM, _TERM, _POW, _NEGATOM, _ATOM = range(7)


def _category(e: Expr) -> int:
    match e:
        case OrList():
            return _OR
        case Eq():
            return _EQ
        case Add() | Sub():
            return _SUM
        case Mul() | Div():
            return _TERM
        case Pow():
            return _POW
        case Neg():
            return _NEGATOM
        case _:
            return _ATOM


def _render(e: Expr, level: int) -> str:
    text = _bare(e)
    if _category(e) < level:
        return f"({text})"
    return text


def _bare(e: Expr) -> str:
    match e:
        case IntLit(n):
            return str(n)
        case Var(name):
            return name
        case MetaVar(name):
            return f"?{name}"
        case Neg(a):
            return f"-{_render(a, _POW)}"
        case Add(l, r):
            return f"{_render(l, _SUM)} + {_render(r, _TERM)}"
        case Sub(l, r):
            return f"{_render(l, _SUM)} - {_render(r, _TERM)}"
        case Mul(l, r):
            return f"{_render(l, _TERM)}*{_render(r, _POW)}"
        case Div(l, r):
            return f"{_render(l, _TERM)}/{_render(r, _POW)}"
        case Pow(b, x):
            return f"{_render(b, _ATOM)}^{_render(x, _NEGATOM)}"
        case Sqrt(a):
            return f"sqrt({_render(a, _SUM)})"
        case Eq(l, r):
            return f"{_render(l, _SUM)} = {_render(r, _SUM)}"
        case OrList(cs):
            if not cs:
                return "no solutions"
            return " or ".join(_render(c, _EQ) for c in cs)
        case ImaginaryUnit():
            return "i"
        case _:
            raise ValueError(f"cannot print {type(e).__name__}")


def to_text(e: Expr) -> str:
    """Deterministic rendering with minimal parentheses."""
    return _bare(e)
