"""Canonical forms as (partial) match / (total) build pairs.

A view reads a term into an abstract value and writes such a value back
as a term. build after match is the view's canonical form; a term
belongs to the view when match is defined on it. Views are how the
feedback services decide that two differently spelled terms mean the
same thing, without the rewrite rules ever having to produce tidy
output themselves.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable

from .algebra import (
    Monomial,
    as_fraction,
    build_sum,
    flat_monomials,
    fraction_expr,
    monomial_expr,
    poly_coeffs,
    surd_expr,
    surd_of,
)
from .terms import (
    Eq,
    Expr,
    IntLit,
    Mul,
    Neg,
    OrList,
    Pow,
    Var,
    children,
    disjunction,
    free_vars,
    rebuild,
)


@dataclass(frozen=True)
class View:
    """matchFn is partial (None signals no match), buildFn total on its range."""

    name: str
    match_fn: Callable[[Expr], Any | None] = field(repr=False)
    build_fn: Callable[[Any], Expr] = field(repr=False)

    def match(self, e: Expr) -> Any | None:
        return self.match_fn(e)

    def build(self, value: Any) -> Expr:
        return self.build_fn(value)


def belongs_to(view: View, e: Expr) -> bool:
    return view.match(e) is not None


def canonical(view: View, e: Expr) -> Expr | None:
    value = view.match(e)
    if value is None:
        return None
    return view.build(value)


def compose_views(outer: View, inner: View) -> View:
    """Match through outer then inner; build runs the other way around.
    Only meaningful when outer's values are themselves terms."""

    def match(e: Expr) -> Any | None:
        mid = outer.match(e)
        if mid is None or not isinstance(mid, Expr):
            return None
        return inner.match(mid)

    def build(value: Any) -> Expr:
        return outer.build(inner.build(value))

    return View(f"{outer.name}.{inner.name}", match, build)


# --- form views -----------------------------------------------------------


@dataclass(frozen=True)
class FormInstance:
    """Components of a polynomial form, highest degree first, as raw
    subterm spellings (so a parameter view can canonicalize them)."""

    var: str
    components: tuple[Expr, ...]


def _component_of(sign: int, term: Expr, var: str) -> tuple[int, Expr] | None:
    """(degree, coefficient expr) of one summand, raw spelling kept."""

    def signed(c: Expr) -> Expr:
        if sign >= 0:
            return c
        return c.arg if isinstance(c, Neg) else Neg(c)

    if not free_vars(term):
        return 0, signed(term)
    if isinstance(term, Var) and term.name == var:
        return 1, signed(IntLit(1))
    if (
        isinstance(term, Pow)
        and isinstance(term.base, Var)
        and term.base.name == var
        and isinstance(term.exponent, IntLit)
    ):
        return term.exponent.value, signed(IntLit(1))
    if isinstance(term, Mul) and not free_vars(term.left):
        inner = _component_of(1, term.right, var)
        if inner is not None and not free_vars(inner[1]):
            degree, coefficient = inner
            merged = (
                signed(term.left)
                if coefficient == IntLit(1)
                else signed(Mul(term.left, coefficient))
            )
            return degree, merged
    return None


def _form_matcher(top_degree: int) -> Callable[[Expr], FormInstance | None]:
    from .algebra import summands

    def match(e: Expr) -> FormInstance | None:
        names = free_vars(e)
        if len(names) != 1:
            return None
        var = next(iter(names))
        slots: dict[int, Expr] = {}
        order: list[int] = []
        structural = True
        for sign, term in summands(e):
            got = _component_of(sign, term, var)
            if got is None or got[0] > top_degree or got[0] in slots:
                structural = False
                break
            slots[got[0]] = got[1]
            order.append(got[0])
        if structural and order == sorted(order, reverse=True):
            pass
        else:
            coeffs = poly_coeffs(e, var)
            if coeffs is None:
                return None
            if any(d > top_degree and c != 0 for d, c in coeffs.items()):
                return None
            slots = {d: fraction_expr(c) for d, c in coeffs.items() if 0 <= d}
        leading = slots.get(top_degree)
        if leading is None or as_fraction(leading) == 0:
            return None
        components = tuple(
            slots.get(d, IntLit(0)) for d in range(top_degree, -1, -1)
        )
        return FormInstance(var, components)

    return match


def _form_builder(top_degree: int) -> Callable[[FormInstance], Expr]:
    def build(inst: FormInstance) -> Expr:
        parts: list[Expr] = []
        for offset, coefficient in enumerate(inst.components):
            degree = top_degree - offset
            if coefficient == IntLit(0):
                continue
            if degree == 0:
                parts.append(coefficient)
                continue
            power: Expr = (
                Var(inst.var) if degree == 1 else Pow(Var(inst.var), IntLit(degree))
            )
            if coefficient == IntLit(1):
                parts.append(power)
            elif isinstance(coefficient, Neg):
                inner = coefficient.arg
                parts.append(
                    Neg(power) if inner == IntLit(1) else Neg(Mul(inner, power))
                )
            else:
                parts.append(Mul(coefficient, power))
        if not parts:
            return IntLit(0)
        return build_sum(parts)

    return build


def parameterize(form_view: View, argument: View) -> View:
    """Canonicalize each component of a form through the argument view."""

    def match(e: Expr) -> FormInstance | None:
        inst = form_view.match(e)
        if not isinstance(inst, FormInstance):
            return None
        out: list[Expr] = []
        for component in inst.components:
            got = canonical(argument, component)
            if got is None:
                return None
            out.append(got)
        return FormInstance(inst.var, tuple(out))

    def build(inst: FormInstance) -> Expr:
        return form_view.build(inst)

    return View(f"{form_view.name}[{argument.name}]", match, build)


# --- the shipped views ----------------------------------------------------


def _match_rational(e: Expr) -> Fraction | None:
    return as_fraction(e)


def _match_sum(e: Expr) -> tuple[Expr, ...] | None:
    from .algebra import summands

    parts: list[Expr] = []
    for sign, term in summands(e):
        if sign >= 0:
            parts.append(term)
        else:
            parts.append(term.arg if isinstance(term, Neg) else Neg(term))
    return tuple(parts)


def _match_surd(e: Expr):
    if isinstance(e, (Eq, OrList)):
        return None
    return surd_of(e)


def _fold_side(e: Expr) -> Expr | None:
    if not free_vars(e):
        value = as_fraction(e)
        if value is not None:
            return fraction_expr(value)
    names = free_vars(e)
    if len(names) == 1:
        var = next(iter(names))
        monos = flat_monomials(e, var)
        if monos is not None:
            kept = [m for m in monos if m.coefficient != 0]
            kept.sort(key=lambda m: -m.degree)  # stable: ties keep order
            if not kept:
                return IntLit(0)
            if all(m.degree == 0 for m in kept):
                # x^0 terms made the side constant after all
                return fraction_expr(sum(m.coefficient for m in kept))
            return build_sum(
                [monomial_expr(m.coefficient, m.degree, var) for m in kept]
            )
    return None


def _normal_side(e: Expr) -> Expr:
    folded = _fold_side(e)
    if folded is not None:
        return folded
    parts = children(e)
    if not parts:
        return e
    rebuilt = rebuild(e, tuple(_normal_side(c) for c in parts))
    # normalizing the children may have made the node foldable, e.g.
    # sqrt((0 - x)*(1 - 1)) whose radicand collapses to a constant
    folded = _fold_side(rebuilt)
    return rebuilt if folded is None else folded


def _match_poly_normal(e: Expr) -> Expr:
    from .syntax import to_text

    if isinstance(e, OrList):
        normal_children = [_match_poly_normal(c) for c in e.children]
        unique: list[Expr] = []
        for child in sorted(normal_children, key=to_text):
            if child not in unique:
                unique.append(child)
        return disjunction(unique)
    if isinstance(e, Eq):
        return Eq(_normal_side(e.left), _normal_side(e.right))
    return _normal_side(e)


def _identity(e: Expr) -> Expr:
    return e


rational_view = View("rationalView", _match_rational, fraction_expr)
sum_view = View("sumView", _match_sum, lambda parts: build_sum(list(parts)))
linear_form_view = View("linearFormView", _form_matcher(1), _form_builder(1))
quadratic_form_view = View("quadraticFormView", _form_matcher(2), _form_builder(2))
root_simplify_view = View("rootSimplifyView", _match_surd, surd_expr)
poly_normal_view = View("polyNormalView", _match_poly_normal, _identity)
identity_view = View("identityView", _identity, _identity)

ALL_VIEWS: dict[str, View] = {
    v.name: v
    for v in (
        rational_view,
        sum_view,
        linear_form_view,
        quadratic_form_view,
        root_simplify_view,
        poly_normal_view,
        identity_view,
    )
}


def view(name: str) -> View:
    try:
        return ALL_VIEWS[name]
    except KeyError:
        raise KeyError(f"unknown view: {name}") from None


# --- rule-set views (wire format) ------------------------------------------


def ruleset_view(name: str, rules: list[Any]) -> View:
    """Normal form by exhaustive application of a confluent rule set;
    build is the identity."""
    from .rules import apply_rule
    from .terms import all_paths, subterm

    def match(e: Expr) -> Expr | None:
        current = e
        for _ in range(200):
            step = None
            for path in all_paths(current):
                focus = subterm(current, path)
                for r in rules:
                    if r.apply(focus):
                        step = (r, path)
                        break
                if step:
                    break
            if step is None:
                return current
            results = apply_rule(step[0], current, step[1])
            if not results or results[0] == current:
                return current
            current = results[0]
        return None  # did not terminate; not confluent after all

    return View(name, match, _identity)


def strategy_pair_view(
    name: str,
    match_run: Callable[[Expr], Expr | None],
    build_run: Callable[[Expr], Expr | None],
) -> View:
    """View given by a pair of strategies: one normalizes on match, the
    other rewrites the abstract value back on build."""

    def build(value: Any) -> Expr:
        assert isinstance(value, Expr)
        got = build_run(value)
        return got if got is not None else value

    return View(name, match_run, build)
