"""Expression trees for school algebra, with paths and exact evaluation.

Terms are immutable. Integers are unbounded, rational values are exact
``fractions.Fraction``; no floating point anywhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

Rational = Fraction

Path = tuple[int, ...]


class TermError(Exception):
    """Base class for term-level errors."""


class InvalidPathError(TermError):
    pass


class UnboundVariableError(TermError):
    pass


@dataclass(frozen=True)
class Expr:
    """Base class; concrete constructors below."""

    __match_args__ = ()


@dataclass(frozen=True)
class IntLit(Expr):
    """Non-negative integer literal; negatives are spelled Neg(IntLit(n))."""

    value: int
    __match_args__ = ("value",)

    def __post_init__(self) -> None:
        if self.value < 0:
            raise TermError(f"negative literal: {self.value}")


@dataclass(frozen=True)
class Var(Expr):
    name: str
    __match_args__ = ("name",)


@dataclass(frozen=True)
class MetaVar(Expr):
    """Quantified pattern variable (?A); only valid inside rule patterns."""

    name: str
    __match_args__ = ("name",)


@dataclass(frozen=True)
class Neg(Expr):
    arg: Expr
    __match_args__ = ("arg",)


@dataclass(frozen=True)
class Add(Expr):
    left: Expr
    right: Expr
    __match_args__ = ("left", "right")


@dataclass(frozen=True)
class Sub(Expr):
    left: Expr
    right: Expr
    __match_args__ = ("left", "right")


@dataclass(frozen=True)
class Mul(Expr):
    left: Expr
    right: Expr
    __match_args__ = ("left", "right")


@dataclass(frozen=True)
class Div(Expr):
    left: Expr
    right: Expr
    __match_args__ = ("left", "right")


@dataclass(frozen=True)
class Pow(Expr):
    base: Expr
    exponent: Expr
    __match_args__ = ("base", "exponent")


@dataclass(frozen=True)
class Sqrt(Expr):
    arg: Expr
    __match_args__ = ("arg",)


@dataclass(frozen=True)
class ImaginaryUnit(Expr):
    """Reserved for complex extensions; not produced by any shipped rule."""


@dataclass(frozen=True)
class Eq(Expr):
    left: Expr
    right: Expr
    __match_args__ = ("left", "right")


@dataclass(frozen=True)
class OrList(Expr):
    """Disjunction of relations. Empty means "no solutions"; never nests."""

    children: tuple[Expr, ...]
    __match_args__ = ("children",)

    def __post_init__(self) -> None:
        flat: list[Expr] = []
        for child in self.children:
            if isinstance(child, OrList):
                flat.extend(child.children)
            else:
                flat.append(child)
        object.__setattr__(self, "children", tuple(flat))


def disjunction(items: list[Expr] | tuple[Expr, ...]) -> Expr:
    """Build a disjunction, collapsing the single-relation case to the relation."""
    flat = OrList(tuple(items)).children
    if len(flat) == 1:
        return flat[0]
    return OrList(flat)


BINARY = (Add, Sub, Mul, Div, Pow, Eq)


def children(e: Expr) -> tuple[Expr, ...]:
    match e:
        case Neg(a) | Sqrt(a):
            return (a,)
        case Add(l, r) | Sub(l, r) | Mul(l, r) | Div(l, r) | Pow(l, r) | Eq(l, r):
            return (l, r)
        case OrList(cs):
            return cs
        case _:
            return ()


def rebuild(e: Expr, parts: tuple[Expr, ...]) -> Expr:
    match e:
        case Neg():
            return Neg(*parts)
        case Sqrt():
            return Sqrt(*parts)
        case Add():
            return Add(*parts)
        case Sub():
            return Sub(*parts)
        case Mul():
            return Mul(*parts)
        case Div():
            return Div(*parts)
        case Pow():
            return Pow(*parts)
        case Eq():
            return Eq(*parts)
        case OrList():
            return OrList(parts)
        case _:
            if parts:
                raise InvalidPathError(f"{type(e).__name__} has no children")
            return e


def subterm(e: Expr, path: Path) -> Expr:
    """pre: path is valid in e."""
    cur = e
    for i in path:
        cs = children(cur)
        if not 0 <= i < len(cs):
            raise InvalidPathError(f"index {i} invalid at {type(cur).__name__}")
        cur = cs[i]
    return cur


def replace_at(e: Expr, path: Path, new: Expr) -> Expr:
    if not path:
        return new
    i, rest = path[0], path[1:]
    cs = children(e)
    if not 0 <= i < len(cs):
        raise InvalidPathError(f"index {i} invalid at {type(e).__name__}")
    parts = cs[:i] + (replace_at(cs[i], rest, new),) + cs[i + 1 :]
    return rebuild(e, parts)


def all_paths(e: Expr) -> Iterator[Path]:
    """Preorder enumeration; preorder coincides with lexicographic path order."""

    def walk(t: Expr, prefix: Path) -> Iterator[Path]:
        yield prefix
        for i, c in enumerate(children(t)):
            yield from walk(c, prefix + (i,))

    return walk(e, ())


def size(e: Expr) -> int:
    return 1 + sum(size(c) for c in children(e))


def free_vars(e: Expr) -> frozenset[str]:
    match e:
        case Var(name):
            return frozenset((name,))
        case _:
            out: frozenset[str] = frozenset()
            for c in children(e):
                out |= free_vars(c)
            return out


def contains_meta(e: Expr) -> bool:
    if isinstance(e, MetaVar):
        return True
    return any(contains_meta(c) for c in children(e))


def int_lit(n: int) -> Expr:
    """Integer as a term; negatives come out as Neg(IntLit(-n))."""
    return IntLit(n) if n >= 0 else Neg(IntLit(-n))


Value = Fraction | bool | None


def _sqrt_exact(q: Fraction) -> Fraction | None:
    if q < 0:
        return None
    np, dp = q.numerator, q.denominator
    rn, rd = math.isqrt(np), math.isqrt(dp)
    if rn * rn == np and rd * rd == dp:
        return Fraction(rn, rd)
    return None


def eval_at(e: Expr, env: dict[str, Fraction]) -> Value:
    """Exact evaluation. Undefined results (None) propagate.

    pre: all free variables of e are bound in env.
    Division by zero, sqrt of a non-square or negative rational, and
    non-integer exponents yield None. Eq and OrList yield booleans.
    """
    match e:
        case IntLit(n):
            return Fraction(n)
        case Var(name):
            if name not in env:
                raise UnboundVariableError(name)
            return env[name]
        case MetaVar(name):
            raise UnboundVariableError(f"?{name}")
        case Neg(a):
            v = eval_at(a, env)
            return -v if isinstance(v, Fraction) else None
        case Add(l, r):
            lv, rv = eval_at(l, env), eval_at(r, env)
            if isinstance(lv, Fraction) and isinstance(rv, Fraction):
                return lv + rv
            return None
        case Sub(l, r):
            lv, rv = eval_at(l, env), eval_at(r, env)
            if isinstance(lv, Fraction) and isinstance(rv, Fraction):
                return lv - rv
            return None
        case Mul(l, r):
            lv, rv = eval_at(l, env), eval_at(r, env)
            if isinstance(lv, Fraction) and isinstance(rv, Fraction):
                return lv * rv
            return None
        case Div(l, r):
            lv, rv = eval_at(l, env), eval_at(r, env)
            if isinstance(lv, Fraction) and isinstance(rv, Fraction) and rv != 0:
                return lv / rv
            return None
        case Pow(b, x):
            bv, xv = eval_at(b, env), eval_at(x, env)
            if not (isinstance(bv, Fraction) and isinstance(xv, Fraction)):
                return None
            if xv.denominator != 1:
                return None
            n = xv.numerator
            if n >= 0:
                return bv**n
            if bv == 0:
                return None
            return Fraction(1) / bv ** (-n)
        case Sqrt(a):
            av = eval_at(a, env)
            if not isinstance(av, Fraction):
                return None
            return _sqrt_exact(av)
        case Eq(l, r):
            lv, rv = eval_at(l, env), eval_at(r, env)
            if lv is None or rv is None:
                return None
            return lv == rv
        case OrList(cs):
            vals = [eval_at(c, env) for c in cs]
            if any(v is None for v in vals):
                return None
            return any(v is True for v in vals)
        case ImaginaryUnit():
            return None
        case _:
            raise TermError(f"cannot evaluate {type(e).__name__}")
