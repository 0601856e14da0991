"""Exact polynomial and surd arithmetic shared by views, rules and the
solution-set oracle. Everything here is internal plumbing; the public
vocabulary lives in views.py and exercises.py.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .terms import (
    Add,
    Div,
    Eq,
    Expr,
    IntLit,
    Mul,
    Neg,
    OrList,
    Pow,
    Sqrt,
    Sub,
    Var,
    eval_at,
    free_vars,
)


def as_fraction(e: Expr) -> Fraction | None:
    """Exact value of a constant expression, or None."""
    if free_vars(e):
        return None
    value = eval_at(e, {})
    return value if isinstance(value, Fraction) else None


def fraction_expr(q: Fraction) -> Expr:
    """Canonical spelling of a rational: n, -n, n/d or -n/d."""
    num, den = q.numerator, q.denominator
    top: Expr = IntLit(abs(num)) if num >= 0 else Neg(IntLit(-num))
    if den == 1:
        return top
    return Div(top, IntLit(den))


def square_free(n: int) -> tuple[int, int]:
    """n = s*s*m with m square-free; returns (s, m). pre: n >= 0."""
    if n == 0:
        return 0, 1
    s, m, d = 1, 1, 2
    rest = n
    while d * d <= rest:
        exp = 0
        while rest % d == 0:
            rest //= d
            exp += 1
        s *= d ** (exp // 2)
        if exp % 2:
            m *= d
        d += 1
    return s, m * rest


@dataclass(frozen=True)
class Surd:
    """Exact value r + s*sqrt(m) with m square-free, s == 0 implying m == 1."""

    r: Fraction
    s: Fraction
    m: int

    @staticmethod
    def of(r: Fraction, s: Fraction = Fraction(0), m: int = 1) -> Surd:
        if s == 0 or m == 1:
            return Surd(r + s, Fraction(0), 1) if m == 1 else Surd(r, Fraction(0), 1)
        k, rest = square_free(m)
        if rest == 1:
            return Surd(r + s * k, Fraction(0), 1)
        return Surd(r, s * k, rest)

    @property
    def rational(self) -> bool:
        return self.s == 0

    def __add__(self, other: Surd) -> Surd | None:
        if self.rational or other.rational or self.m == other.m:
            m = self.m if not self.rational else other.m
            return Surd.of(self.r + other.r, self.s + other.s, max(m, 1))
        return None

    def __neg__(self) -> Surd:
        return Surd(-self.r, -self.s, self.m)

    def __mul__(self, other: Surd) -> Surd | None:
        if self.rational:
            return Surd.of(self.r * other.r, self.r * other.s, other.m)
        if other.rational:
            return Surd.of(self.r * other.r, self.s * other.r, self.m)
        if self.m != other.m:
            return None
        return Surd.of(
            self.r * other.r + self.s * other.s * self.m,
            self.r * other.s + self.s * other.r,
            self.m,
        )

    def inverse(self) -> Surd | None:
        norm = self.r * self.r - self.s * self.s * self.m
        if norm == 0:
            return None
        return Surd.of(self.r / norm, -self.s / norm, self.m)

    def is_negative(self) -> bool:
        if self.rational:
            return self.r < 0
        # r + s*sqrt(m) < 0, decided exactly by squaring.
        if self.r >= 0 and self.s >= 0:
            return False
        if self.r <= 0 and self.s <= 0:
            return not (self.r == 0 and self.s == 0)
        if self.s > 0:  # r < 0
            return self.r * self.r > self.s * self.s * self.m
        return self.r * self.r < self.s * self.s * self.m


def surd_of(e: Expr) -> Surd | None:
    """Interpret a constant expression as r + s*sqrt(m); None when it does
    not fit (mixed radicands, nested radicals, variables)."""
    match e:
        case IntLit(n):
            return Surd(Fraction(n), Fraction(0), 1)
        case Neg(a):
            inner = surd_of(a)
            return -inner if inner is not None else None
        case Add(l, r):
            lv, rv = surd_of(l), surd_of(r)
            return lv + rv if lv is not None and rv is not None else None
        case Sub(l, r):
            lv, rv = surd_of(l), surd_of(r)
            return lv + (-rv) if lv is not None and rv is not None else None
        case Mul(l, r):
            lv, rv = surd_of(l), surd_of(r)
            return lv * rv if lv is not None and rv is not None else None
        case Div(l, r):
            lv, rv = surd_of(l), surd_of(r)
            if lv is None or rv is None:
                return None
            inv = rv.inverse()
            return lv * inv if inv is not None else None
        case Pow(b, x):
            xv = as_fraction(x)
            bv = surd_of(b)
            if bv is None or xv is None or xv.denominator != 1 or xv < 0:
                return None
            out = Surd(Fraction(1), Fraction(0), 1)
            for _ in range(int(xv)):
                nxt = out * bv
                if nxt is None:
                    return None
                out = nxt
            return out
        case Sqrt(a):
            av = surd_of(a)
            if av is None or not av.rational or av.r < 0:
                return None
            num, den = av.r.numerator, av.r.denominator
            s, m = square_free(num * den)
            return Surd.of(Fraction(0), Fraction(s, den), m)
        case _:
            return None


def surd_expr(v: Surd) -> Expr:
    """Canonical spelling c*sqrt(m) (plus a rational part when present)."""
    if v.rational:
        return fraction_expr(v.r)
    root: Expr = Sqrt(IntLit(v.m))
    s = v.s
    if abs(s) != 1:
        root = Mul(fraction_expr(abs(s)), root)
    if s < 0:
        root = Neg(root) if abs(s) == 1 else Mul(fraction_expr(s), Sqrt(IntLit(v.m)))
    if v.r == 0:
        return root
    if v.s > 0:
        return Add(fraction_expr(v.r), root)
    return Sub(fraction_expr(v.r), surd_expr(Surd(Fraction(0), -v.s, v.m)))


# --- flat monomial sums ------------------------------------------------

# A monomial is a product/quotient/negation of constants and powers of the
# variable. Flat sums of monomials are what "merge" and the notational
# normal form work on; they are never expanded here.


@dataclass(frozen=True)
class Monomial:
    coefficient: Fraction
    degree: int


def summands(e: Expr) -> list[tuple[int, Expr]]:
    """Top-level additive decomposition as (sign, term) pairs."""
    match e:
        case Add(l, r):
            return summands(l) + summands(r)
        case Sub(l, r):
            return summands(l) + [(-s, t) for s, t in summands(r)]
        case Neg(a):
            return [(-s, t) for s, t in summands(a)]
        case _:
            return [(1, e)]


def monomial_of(e: Expr, var: str | None) -> Monomial | None:
    """Read a factor product as coefficient * var**degree, or None."""
    match e:
        case IntLit(n):
            return Monomial(Fraction(n), 0)
        case Var(name):
            if var is not None and name != var:
                return None
            return Monomial(Fraction(1), 1)
        case Neg(a):
            inner = monomial_of(a, var)
            if inner is None:
                return None
            return Monomial(-inner.coefficient, inner.degree)
        case Mul(l, r):
            lv, rv = monomial_of(l, var), monomial_of(r, var)
            if lv is None or rv is None:
                return None
            return Monomial(lv.coefficient * rv.coefficient, lv.degree + rv.degree)
        case Div(l, r):
            lv = monomial_of(l, var)
            rc = as_fraction(r)
            if lv is None or rc is None or rc == 0:
                return None
            return Monomial(lv.coefficient / rc, lv.degree)
        case Pow(b, x):
            xv = as_fraction(x)
            if xv is None or xv.denominator != 1 or xv < 0:
                return None
            bv = monomial_of(b, var)
            if bv is None:
                return None
            n = int(xv)
            return Monomial(bv.coefficient**n, bv.degree * n)
        case _:
            c = as_fraction(e)
            if c is not None:
                return Monomial(c, 0)
            return None


def flat_monomials(e: Expr, var: str | None = None) -> list[Monomial] | None:
    """Monomial list of a flat sum, signs folded in; None when any summand
    is not a monomial (unexpanded product of sums, radical, division by
    the variable...)."""
    out: list[Monomial] = []
    for sign, term in summands(e):
        mono = monomial_of(term, var)
        if mono is None:
            return None
        out.append(Monomial(mono.coefficient * sign, mono.degree))
    return out


def merge_monomials(monos: list[Monomial]) -> list[Monomial]:
    by_degree: dict[int, Fraction] = {}
    for m in monos:
        by_degree[m.degree] = by_degree.get(m.degree, Fraction(0)) + m.coefficient
    degrees = sorted(by_degree, reverse=True)
    out = [Monomial(by_degree[d], d) for d in degrees if by_degree[d] != 0]
    return out


def monomial_expr(coefficient: Fraction, degree: int, var: str) -> Expr:
    power: Expr
    if degree == 0:
        return fraction_expr(coefficient)
    power = Var(var) if degree == 1 else Pow(Var(var), IntLit(degree))
    if coefficient == 1:
        return power
    if coefficient == -1:
        return Neg(power)
    # negative coefficients stay Neg-headed so sums fold them into "-"
    if coefficient < 0:
        return Neg(Mul(fraction_expr(-coefficient), power))
    return Mul(fraction_expr(coefficient), power)


def build_sum(parts: list[Expr]) -> Expr:
    """Left-associated sum; Neg-headed parts turn into subtractions."""
    if not parts:
        return IntLit(0)
    acc = parts[0]
    for part in parts[1:]:
        if isinstance(part, Neg):
            acc = Sub(acc, part.arg)
        else:
            acc = Add(acc, part)
    return acc


def poly_expr(monos: list[Monomial], var: str) -> Expr:
    if not monos:
        return IntLit(0)
    return build_sum([monomial_expr(m.coefficient, m.degree, var) for m in monos])


def merged_poly_expr(coeffs: dict[int, Fraction], var: str) -> Expr:
    monos = merge_monomials([Monomial(c, d) for d, c in coeffs.items()])
    return poly_expr(monos, var)


# --- full polynomial expansion -----------------------------------------

_DEGREE_CAP = 8


def poly_coeffs(e: Expr, var: str) -> dict[int, Fraction] | None:
    """Coefficients of e as a polynomial in var, expanding products and
    integer powers. None for non-polynomial shapes."""
    match e:
        case IntLit(n):
            return {0: Fraction(n)}
        case Var(name):
            if name == var:
                return {1: Fraction(1)}
            return None
        case Neg(a):
            inner = poly_coeffs(a, var)
            if inner is None:
                return None
            return {d: -c for d, c in inner.items()}
        case Add(l, r) | Sub(l, r):
            lv, rv = poly_coeffs(l, var), poly_coeffs(r, var)
            if lv is None or rv is None:
                return None
            sign = 1 if isinstance(e, Add) else -1
            out = dict(lv)
            for d, c in rv.items():
                out[d] = out.get(d, Fraction(0)) + sign * c
            return out
        case Mul(l, r):
            lv, rv = poly_coeffs(l, var), poly_coeffs(r, var)
            if lv is None or rv is None:
                return None
            out: dict[int, Fraction] = {}
            for dl, cl in lv.items():
                for dr, cr in rv.items():
                    if dl + dr > _DEGREE_CAP:
                        return None
                    out[dl + dr] = out.get(dl + dr, Fraction(0)) + cl * cr
            return out
        case Div(l, r):
            rc = as_fraction(r)
            lv = poly_coeffs(l, var)
            if lv is None or rc is None or rc == 0:
                return None
            return {d: c / rc for d, c in lv.items()}
        case Pow(b, x):
            xv = as_fraction(x)
            if xv is None or xv.denominator != 1 or xv < 0 or xv > _DEGREE_CAP:
                return None
            bv = poly_coeffs(b, var)
            if bv is None:
                return None
            out = {0: Fraction(1)}
            for _ in range(int(xv)):
                nxt: dict[int, Fraction] = {}
                for dl, cl in out.items():
                    for dr, cr in bv.items():
                        if dl + dr > _DEGREE_CAP:
                            return None
                        nxt[dl + dr] = nxt.get(dl + dr, Fraction(0)) + cl * cr
                out = nxt
            return out
        case _:
            c = as_fraction(e)
            if c is not None:
                return {0: c}
            return None


def poly_degree(coeffs: dict[int, Fraction]) -> int:
    nonzero = [d for d, c in coeffs.items() if c != 0]
    return max(nonzero) if nonzero else 0


def single_variable(e: Expr) -> str | None:
    names = free_vars(e)
    if len(names) > 1:
        return None
    return next(iter(names)) if names else None


# --- solution sets ------------------------------------------------------

ALL_REALS = "all-reals"

SolutionSet = frozenset[Surd] | str  # frozenset, or the ALL_REALS marker


def _surd_coeffs(e: Expr, var: str) -> dict[int, Surd] | None:
    """Like poly_coeffs but allows a surd-valued constant part, so that
    relations such as x = 2*sqrt(2) stay exactly solvable."""
    plain = poly_coeffs(e, var)
    if plain is not None:
        return {d: Surd(c, Fraction(0), 1) for d, c in plain.items()}
    out: dict[int, Surd] = {}
    for sign, term in summands(e):
        const = surd_of(term)
        if const is not None:
            got = out.get(0, Surd(Fraction(0), Fraction(0), 1)) + (
                const if sign > 0 else -const
            )
            if got is None:
                return None
            out[0] = got
            continue
        mono = poly_coeffs(term, var)
        if mono is None:
            return None
        for d, c in mono.items():
            got = out.get(d, Surd(Fraction(0), Fraction(0), 1)) + Surd(
                sign * c, Fraction(0), 1
            )
            if got is None:
                return None
            out[d] = got
    return out


def solve_relation(e: Expr, var: str) -> SolutionSet | None:
    """Exact solution set of a single equation of degree <= 2; None when
    outside the solver's fragment."""
    if not isinstance(e, Eq):
        return None
    lhs = _surd_coeffs(e.left, var)
    rhs = _surd_coeffs(e.right, var)
    if lhs is None or rhs is None:
        return None
    coeffs: dict[int, Surd] = dict(lhs)
    for d, c in rhs.items():
        got = coeffs.get(d, Surd(Fraction(0), Fraction(0), 1)) + (-c)
        if got is None:
            return None
        coeffs[d] = got
    coeffs = {d: c for d, c in coeffs.items() if not (c.rational and c.r == 0)}
    degree = max(coeffs, default=0)
    if degree == 0:
        return ALL_REALS if not coeffs else frozenset()
    if degree == 1:
        a, b = coeffs[1], coeffs.get(0, Surd(Fraction(0), Fraction(0), 1))
        inv = a.inverse()
        if inv is None:
            return None
        root = (-b) * inv
        return frozenset((root,)) if root is not None else None
    if degree == 2:
        if not all(c.rational for c in coeffs.values()):
            return None
        a = coeffs[2].r
        b = coeffs.get(1, Surd(Fraction(0), Fraction(0), 1)).r
        c0 = coeffs.get(0, Surd(Fraction(0), Fraction(0), 1)).r
        disc = b * b - 4 * a * c0
        if disc < 0:
            return frozenset()
        num, den = disc.numerator, disc.denominator
        s, m = square_free(num * den)
        root_part = Fraction(s, den)  # sqrt(disc) == root_part * sqrt(m)
        half = Fraction(1, 2) / a
        if m == 1:
            r1 = (-b + root_part) * half
            r2 = (-b - root_part) * half
            return frozenset((Surd.of(r1), Surd.of(r2)))
        return frozenset(
            (
                Surd.of(-b * half, root_part * half, m),
                Surd.of(-b * half, -root_part * half, m),
            )
        )
    return None


def solve_term(e: Expr, var: str) -> SolutionSet | None:
    """Solution set of an equation or a disjunction of equations."""
    if isinstance(e, OrList):
        out: frozenset[Surd] = frozenset()
        for child in e.children:
            got = solve_relation(child, var)
            if got is None:
                return None
            if got == ALL_REALS:
                return ALL_REALS
            assert isinstance(got, frozenset)
            out |= got
        return out
    return solve_relation(e, var)


def relation_degree(e: Expr, var: str) -> int | None:
    """Largest power of var appearing on either side of an equation,
    allowing exact surd constants; None when a side is not polynomial."""
    if not isinstance(e, Eq):
        return None
    left = _surd_coeffs(e.left, var)
    right = _surd_coeffs(e.right, var)
    if left is None or right is None:
        return None
    degree = 0
    for side in (left, right):
        for d, c in side.items():
            if not (c.rational and c.r == 0):
                degree = max(degree, d)
    return degree


def sqrt_exact_int(n: int) -> int | None:
    r = math.isqrt(n)
    return r if r * r == n else None
