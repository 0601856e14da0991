"""Rewrite rules.

Two kinds of rule share one interface. Pattern rules are lhs/rhs pairs
with meta-variables and side conditions; matching is purely syntactic
(no normalization, that is what views are for). Primitive rules are
named functions from a term to an ordered list of results; they cover
everything a finite pattern cannot express, such as merging an
arbitrary number of like terms or factoring a quadratic.

A rule application may carry scratch lines: auxiliary equations shown
next to a step (the discriminant box of a worked example) that are not
part of the main term chain.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .algebra import (
    Monomial,
    as_fraction,
    build_sum,
    flat_monomials,
    fraction_expr,
    merge_monomials,
    monomial_expr,
    monomial_of,
    poly_coeffs,
    poly_degree,
    poly_expr,
    single_variable,
    square_free,
    summands,
    surd_expr,
    surd_of,
)
from .terms import (
    Add,
    Div,
    Eq,
    Expr,
    IntLit,
    MetaVar,
    Mul,
    Neg,
    OrList,
    Path,
    Pow,
    Sqrt,
    Sub,
    TermError,
    Var,
    all_paths,
    children,
    disjunction,
    free_vars,
    rebuild,
    replace_at,
    subterm,
)


class RuleError(TermError):
    pass


@dataclass(frozen=True)
class RuleResult:
    term: Expr
    scratch: tuple[Expr, ...] = ()


@dataclass(frozen=True)
class Condition:
    """Side condition from the closed, serializable vocabulary."""

    kind: str  # nonzero | integer | positive | nonneg-discriminant
    var: str

    def holds(self, env: dict[str, Expr]) -> bool:
        bound = env.get(self.var)
        if bound is None:
            return False
        value = as_fraction(bound)
        if value is None:
            return False
        if self.kind == "nonzero":
            return value != 0
        if self.kind == "integer":
            return value.denominator == 1
        if self.kind == "positive":
            return value > 0
        if self.kind == "nonneg-discriminant":
            return value >= 0
        raise RuleError(f"unknown condition kind: {self.kind}")


CONDITION_KINDS = ("nonzero", "integer", "positive", "nonneg-discriminant")


def match_pattern(pattern: Expr, e: Expr) -> dict[str, Expr] | None:
    """First-order syntactic matching; meta-variables bind whole subterms."""
    if isinstance(pattern, MetaVar):
        return {pattern.name: e}
    if type(pattern) is not type(e):
        return None
    pat_children = children(pattern)
    sub_children = children(e)
    if isinstance(pattern, (IntLit, Var)):
        return {} if pattern == e else None
    if len(pat_children) != len(sub_children):
        return None
    env: dict[str, Expr] = {}
    for p_child, s_child in zip(pat_children, sub_children):
        got = match_pattern(p_child, s_child)
        if got is None:
            return None
        for name, bound in got.items():
            if name in env and env[name] != bound:
                return None
            env[name] = bound
    return env


def substitute(pattern: Expr, env: dict[str, Expr]) -> Expr:
    if isinstance(pattern, MetaVar):
        if pattern.name not in env:
            raise RuleError(f"unbound meta-variable ?{pattern.name}")
        return env[pattern.name]
    parts = children(pattern)
    if not parts:
        return pattern
    return rebuild(pattern, tuple(substitute(p, env) for p in parts))


def _meta_names(e: Expr) -> set[str]:
    if isinstance(e, MetaVar):
        return {e.name}
    out: set[str] = set()
    for child in children(e):
        out |= _meta_names(child)
    return out


@dataclass(frozen=True)
class PatternRule:
    name: str
    forall: tuple[str, ...]
    lhs: Expr
    rhs: Expr
    conditions: tuple[Condition, ...] = ()
    buggy: bool = False
    witness: tuple[Expr, Expr] | None = None

    def __post_init__(self) -> None:
        bound = set(self.forall)
        used = _meta_names(self.rhs) | {c.var for c in self.conditions}
        if not used <= bound:
            raise RuleError(f"rule {self.name}: unbound meta-variables {used - bound}")
        if not self.buggy and not _meta_names(self.lhs) >= bound:
            raise RuleError(f"rule {self.name}: sound rule quantifies unused names")

    def apply(self, e: Expr) -> list[RuleResult]:
        env = match_pattern(self.lhs, e)
        if env is None:
            return []
        if not all(c.holds(env) for c in self.conditions):
            return []
        return _real_steps(e, [RuleResult(substitute(self.rhs, env))])


@dataclass(frozen=True)
class PrimitiveRule:
    name: str
    fn: Callable[[Expr], list[RuleResult]] = field(repr=False)
    buggy: bool = False
    witness: tuple[Expr, Expr] | None = None

    def apply(self, e: Expr) -> list[RuleResult]:
        return _real_steps(e, self.fn(e))


Rule = PatternRule | PrimitiveRule


def _real_steps(e: Expr, results: list[RuleResult]) -> list[RuleResult]:
    # a result identical to the input that also says nothing is not a
    # step; silently looping on it would hang every repeat combinator
    return [r for r in results if r.term != e or r.scratch]


def apply_rule(rule: Rule, e: Expr, path: Path) -> list[Expr]:
    """Full-term results of applying a rule at a position; duplicates and
    scratch annotations dropped (use rule.apply for those)."""
    focus = subterm(e, path)
    out: list[Expr] = []
    for result in rule.apply(focus):
        new = replace_at(e, path, result.term)
        if new not in out:
            out.append(new)
    return out


def applicable_at(rules: list[Rule] | set[Rule], e: Expr) -> list[tuple[str, Path]]:
    """All (rule id, path) pairs where a sound rule fires, path-lexicographic."""
    ordered = sorted(rules, key=lambda r: r.name) if isinstance(rules, set) else rules
    out: list[tuple[str, Path]] = []
    for path in all_paths(e):
        focus = subterm(e, path)
        for rule in ordered:
            if rule.buggy:
                continue
            if rule.apply(focus):
                out.append((rule.name, path))
    return out


# --- helpers shared by the primitive bodies -----------------------------


def _is_zero(e: Expr) -> bool:
    return as_fraction(e) == 0


def _only_var(e: Expr) -> tuple[bool, str | None]:
    """(usable, variable name); usable is False on multi-variable terms."""
    names = free_vars(e)
    if len(names) > 1:
        return False, None
    return True, (next(iter(names)) if names else None)


def _eq_sides(e: Expr) -> tuple[Expr, Expr] | None:
    return (e.left, e.right) if isinstance(e, Eq) else None


def _scaled(term: Expr, factor: Fraction, var: str | None) -> Expr:
    """factor * term with the arithmetic done when term is a monomial."""
    if isinstance(term, Div):
        denominator = as_fraction(term.right)
        if denominator is not None and denominator == factor:
            return term.left
    mono = monomial_of(term, var)
    if mono is not None:
        return monomial_expr(mono.coefficient * factor, mono.degree, var or "x")
    if factor == 1:
        return term
    return Mul(fraction_expr(factor), term)


def _signed(sign: int, term: Expr) -> Expr:
    if sign >= 0:
        return term
    return term.arg if isinstance(term, Neg) else Neg(term)


def _merge_side(side: Expr, var: str | None) -> Expr | None:
    """Merged flat monomial sum, or None when nothing merges."""
    monos = flat_monomials(side, var)
    if monos is None:
        return None
    merged = merge_monomials(monos)
    if len(merged) >= len(monos):
        return None
    rebuilt = poly_expr(merged, var or "x")
    # dropping a zero monomial can rebuild the very same side, e.g. 0
    return rebuilt if rebuilt != side else None


# --- linear-equation primitives -----------------------------------------


def _merge(e: Expr) -> list[RuleResult]:
    usable, var = _only_var(e)
    if not usable:
        return []
    if isinstance(e, Eq):
        left = _merge_side(e.left, var)
        right = _merge_side(e.right, var)
        if left is None and right is None:
            return []
        return [RuleResult(Eq(left if left is not None else e.left,
                              right if right is not None else e.right))]
    merged = _merge_side(e, var)
    return [RuleResult(merged)] if merged is not None else []


def _distribute(e: Expr) -> list[RuleResult]:
    usable, var = _only_var(e)
    if not usable:
        return []
    for path in all_paths(e):
        node = subterm(e, path)
        if not isinstance(node, Mul):
            continue
        for constant, body in ((node.left, node.right), (node.right, node.left)):
            coefficient = as_fraction(constant)
            if coefficient is None:
                continue
            parts = summands(body)
            if len(parts) < 2:
                continue
            expanded = build_sum(
                [_signed(sign, _scaled(term, coefficient, var)) for sign, term in parts]
            )
            return [RuleResult(replace_at(e, path, expanded))]
    return []


def _remove_division(e: Expr) -> list[RuleResult]:
    sides = _eq_sides(e)
    if sides is None:
        return []
    usable, var = _only_var(e)
    if not usable:
        return []
    factor: Fraction | None = None
    for path in all_paths(e):
        node = subterm(e, path)
        if isinstance(node, Div):
            value = as_fraction(node.right)
            if value is not None and value != 0 and abs(value) != 1:
                factor = abs(value)
                break
    if factor is None:
        return []

    def scale(side: Expr) -> Expr:
        return build_sum(
            [_signed(sign, _scaled(term, factor, var)) for sign, term in summands(side)]
        )

    return [RuleResult(Eq(scale(sides[0]), scale(sides[1])))]


def _var_to_left(e: Expr) -> list[RuleResult]:
    sides = _eq_sides(e)
    if sides is None:
        return []
    usable, var = _only_var(e)
    if not usable:
        return []
    left = flat_monomials(sides[0], var)
    right = flat_monomials(sides[1], var)
    if left is None or right is None:
        return []
    moving = [m for m in right if m.degree >= 1 and m.coefficient != 0]
    if not moving:
        return []
    new_left = merge_monomials(left + [Monomial(-m.coefficient, m.degree) for m in moving])
    new_right = merge_monomials([m for m in right if m.degree == 0])
    v = var or "x"
    return [RuleResult(Eq(poly_expr(new_left, v), poly_expr(new_right, v)))]


def _con_to_right(e: Expr) -> list[RuleResult]:
    sides = _eq_sides(e)
    if sides is None:
        return []
    usable, var = _only_var(e)
    if not usable:
        return []
    left = flat_monomials(sides[0], var)
    right = flat_monomials(sides[1], var)
    if left is None or right is None:
        return []
    constants = [m for m in left if m.degree == 0 and m.coefficient != 0]
    keep = [m for m in left if m.degree >= 1]
    if not constants or not keep:
        return []
    new_right = merge_monomials(
        right + [Monomial(-m.coefficient, m.degree) for m in constants]
    )
    v = var or "x"
    return [RuleResult(Eq(poly_expr(merge_monomials(keep), v), poly_expr(new_right, v)))]


def _scale_to_one(e: Expr) -> list[RuleResult]:
    sides = _eq_sides(e)
    if sides is None:
        return []
    usable, var = _only_var(e)
    if not usable:
        return []
    left = flat_monomials(sides[0], var)
    if left is None or len(left) != 1:
        return []
    coefficient, degree = left[0].coefficient, left[0].degree
    if degree < 1 or coefficient in (0, 1):
        return []
    right = sides[1]
    if free_vars(right):
        return []
    value = as_fraction(right)
    v = var or "x"
    power = monomial_expr(Fraction(1), degree, v)
    if value is not None:
        return [RuleResult(Eq(power, fraction_expr(value / coefficient)))]
    # exact value unknown (e.g. an unsimplified root): scale symbolically
    scale = 1 / coefficient
    if isinstance(right, Neg):
        scale, right = -scale, right.arg
    if isinstance(right, Mul):
        inner = as_fraction(right.left)
        if inner is not None:
            return [RuleResult(Eq(power, Mul(fraction_expr(inner * scale), right.right)))]
    return [RuleResult(Eq(power, Mul(fraction_expr(scale), right)))]


# --- quadratic-equation primitives ---------------------------------------


def _move_to_left(e: Expr) -> list[RuleResult]:
    sides = _eq_sides(e)
    if sides is None or _is_zero(sides[1]):
        return []
    if not isinstance(sides[1], (IntLit, Var, Neg, Add, Sub, Mul, Div, Pow, Sqrt)):
        return []
    moved = [(-sign, term) for sign, term in summands(sides[1])]
    if not moved:
        return []
    combined = build_sum([sides[0]] + [_signed(sign, term) for sign, term in moved])
    return [RuleResult(Eq(combined, IntLit(0)))]


def _std_quadratic(e: Expr) -> tuple[Fraction, Fraction, Fraction, str] | None:
    """(a, b, c, var) of an equation in the standard form lhs = 0."""
    sides = _eq_sides(e)
    if sides is None or not _is_zero(sides[1]):
        return None
    var = single_variable(e)
    if var is None:
        return None
    coeffs = poly_coeffs(sides[0], var)
    if coeffs is None or poly_degree(coeffs) != 2:
        return None
    a = coeffs.get(2, Fraction(0))
    b = coeffs.get(1, Fraction(0))
    c = coeffs.get(0, Fraction(0))
    return a, b, c, var


def _rational_sqrt(q: Fraction) -> Fraction | None:
    if q < 0:
        return None
    s, m = square_free(q.numerator * q.denominator)
    if m != 1:
        return None
    return Fraction(s, q.denominator)


def _factor_expr(root: Fraction, var: str, scale: Fraction = Fraction(1)) -> Expr:
    head = monomial_expr(scale, 1, var)
    constant = scale * root
    if constant == 0:
        return head
    if constant > 0:
        return Sub(head, fraction_expr(constant))
    return Add(head, fraction_expr(-constant))


def _factor_quadratic(e: Expr) -> list[RuleResult]:
    std = _std_quadratic(e)
    if std is None:
        return []
    a, b, c, var = std
    if a == 0:
        return []
    disc = b * b - 4 * a * c
    root = _rational_sqrt(disc)
    if root is None:
        return []
    r1 = (-b + root) / (2 * a)
    r2 = (-b - root) / (2 * a)
    if a.denominator != 1 or (a == 1 and not (r1.denominator == r2.denominator == 1)):
        return []  # no nice factorization
    hi, lo = max(r1, r2), min(r1, r2)
    first = _factor_expr(hi, var, a) if a != 1 else _factor_expr(hi, var)
    return [RuleResult(Eq(Mul(first, _factor_expr(lo, var)), IntLit(0)))]


def _factor_out_var(e: Expr) -> list[RuleResult]:
    std = _std_quadratic(e)
    if std is None:
        return []
    a, b, c, var = std
    if a == 0 or b == 0 or c != 0:
        return []
    inner = poly_expr([Monomial(a, 1), Monomial(b, 0)], var)
    return [RuleResult(Eq(Mul(Var(var), inner), IntLit(0)))]


def _complete_square(e: Expr) -> list[RuleResult]:
    sides = _eq_sides(e)
    if sides is None:
        return []
    var = single_variable(e)
    if var is None or free_vars(sides[1]):
        return []
    rhs = as_fraction(sides[1])
    coeffs = poly_coeffs(sides[0], var)
    if rhs is None or coeffs is None or poly_degree(coeffs) != 2:
        return []
    if coeffs.get(2) != 1 or coeffs.get(0, Fraction(0)) != 0:
        return []
    b = coeffs.get(1, Fraction(0))
    if b == 0:
        return []
    added = (b / 2) ** 2
    new_left = poly_expr([Monomial(Fraction(1), 2), Monomial(b, 1), Monomial(added, 0)], var)
    return [RuleResult(Eq(new_left, fraction_expr(rhs + added)))]


def _write_as_square(e: Expr) -> list[RuleResult]:
    sides = _eq_sides(e)
    if sides is None:
        return []
    var = single_variable(e)
    if var is None:
        return []
    coeffs = poly_coeffs(sides[0], var)
    if coeffs is None or poly_degree(coeffs) != 2 or coeffs.get(2) != 1:
        return []
    b = coeffs.get(1, Fraction(0))
    if b == 0 or coeffs.get(0, Fraction(0)) != (b / 2) ** 2:
        return []
    base = poly_expr([Monomial(Fraction(1), 1), Monomial(b / 2, 0)], var)
    return [RuleResult(Eq(Pow(base, IntLit(2)), sides[1]))]


def _square_both_sides(e: Expr) -> list[RuleResult]:
    sides = _eq_sides(e)
    if sides is None or not isinstance(sides[0], Pow):
        return []
    if as_fraction(sides[0].exponent) != 2 or not free_vars(sides[0].base):
        return []
    value = as_fraction(sides[1])
    if value is None or value < 0:
        return []
    base = sides[0].base
    root = _rational_sqrt(value)
    if value == 0:
        return [RuleResult(disjunction([Eq(base, IntLit(0))]))]
    if root is not None:
        plus: Expr = fraction_expr(root)
        minus: Expr = fraction_expr(-root)
    else:
        plus = Sqrt(fraction_expr(value))
        minus = Neg(Sqrt(fraction_expr(value)))
    return [RuleResult(OrList((Eq(base, plus), Eq(base, minus))))]


def _no_real_solutions(e: Expr) -> list[RuleResult]:
    sides = _eq_sides(e)
    if sides is None:
        return []
    var = single_variable(e)
    if var is None:
        return []
    left = poly_coeffs(sides[0], var)
    right = poly_coeffs(sides[1], var)
    if left is None or right is None:
        return []
    diff = dict(left)
    for d, c in right.items():
        diff[d] = diff.get(d, Fraction(0)) - c
    if poly_degree(diff) != 2:
        return []
    a = diff.get(2, Fraction(0))
    b = diff.get(1, Fraction(0))
    c = diff.get(0, Fraction(0))
    if a == 0 or b * b - 4 * a * c >= 0:
        return []
    return [RuleResult(OrList(()))]


def _discriminant_parts(e: Expr) -> tuple[Fraction, Fraction, Fraction, Fraction] | None:
    std = _std_quadratic(e)
    if std is None:
        return None
    a, b, c, _ = std
    if a == 0:
        return None
    return a, b, c, b * b - 4 * a * c


def _compute_discriminant(e: Expr) -> list[RuleResult]:
    parts = _discriminant_parts(e)
    if parts is None:
        return []
    a, b, c, disc = parts
    formula = Sub(
        Pow(fraction_expr(b), IntLit(2)),
        Mul(Mul(IntLit(4), fraction_expr(a)), fraction_expr(c)),
    )
    scratch = (Eq(Var("D"), formula), Eq(Var("D"), fraction_expr(disc)))
    return [RuleResult(e, scratch)]


def _discriminant_root(e: Expr) -> list[RuleResult]:
    parts = _discriminant_parts(e)
    if parts is None or parts[3] < 0:
        return []
    disc = parts[3]
    s, m = square_free(disc.numerator * disc.denominator)
    root = (
        fraction_expr(Fraction(s, disc.denominator))
        if m == 1
        else surd_expr_of_root(s, m, disc.denominator)
    )
    return [RuleResult(e, (Eq(Sqrt(Var("D")), root),))]


def surd_expr_of_root(s: int, m: int, denominator: int) -> Expr:
    from .algebra import Surd

    return surd_expr(Surd.of(Fraction(0), Fraction(s, denominator), m))


def _root_expr_of(disc: Fraction) -> Expr:
    s, m = square_free(disc.numerator * disc.denominator)
    if m == 1:
        return fraction_expr(Fraction(s, disc.denominator))
    return surd_expr_of_root(s, m, disc.denominator)


def _formula_results(e: Expr, flip_sign: bool) -> list[RuleResult]:
    parts = _discriminant_parts(e)
    if parts is None or parts[3] < 0:
        return []
    a, b, _, disc = parts
    var = single_variable(e) or "x"
    top = fraction_expr(b if flip_sign else -b)
    root = _root_expr_of(disc)
    den = fraction_expr(2 * a)
    return [
        RuleResult(
            OrList(
                (
                    Eq(Var(var), Div(Add(top, root), den)),
                    Eq(Var(var), Div(Sub(top, root), den)),
                )
            )
        )
    ]


def _abc_formula(e: Expr) -> list[RuleResult]:
    return _formula_results(e, flip_sign=False)


def _sign_error_formula(e: Expr) -> list[RuleResult]:
    return _formula_results(e, flip_sign=True)


# --- simplification primitives -------------------------------------------


def _calc_simplify(e: Expr) -> list[RuleResult]:
    if isinstance(e, (Eq, OrList)) or free_vars(e):
        return []
    value = as_fraction(e)
    if value is None:
        return []
    canonical = fraction_expr(value)
    return [] if canonical == e else [RuleResult(canonical)]


def _calc_add(e: Expr) -> list[RuleResult]:
    def literal(x: Expr) -> Fraction | None:
        if isinstance(x, IntLit):
            return Fraction(x.value)
        if isinstance(x, Neg) and isinstance(x.arg, IntLit):
            return Fraction(-x.arg.value)
        return None

    if not isinstance(e, (Add, Sub)):
        return []
    left, right = literal(e.left), literal(e.right)
    if left is None or right is None:
        return []
    value = left + right if isinstance(e, Add) else left - right
    return [RuleResult(fraction_expr(value))]


def _simplify_fraction(e: Expr) -> list[RuleResult]:
    if not isinstance(e, Div):
        return []
    value = as_fraction(e)
    if value is None:
        return []
    canonical = fraction_expr(value)
    return [] if canonical == e else [RuleResult(canonical)]


def _contains_sqrt(e: Expr) -> bool:
    return isinstance(e, Sqrt) or any(_contains_sqrt(c) for c in children(e))


def _root_simplify(e: Expr) -> list[RuleResult]:
    if isinstance(e, (Eq, OrList)) or not _contains_sqrt(e) or free_vars(e):
        return []
    value = surd_of(e)
    if value is None:
        return []
    canonical = surd_expr(value)
    return [] if canonical == e else [RuleResult(canonical)]


def _factor_out_square(e: Expr) -> list[RuleResult]:
    for path in all_paths(e):
        node = subterm(e, path)
        if isinstance(node, Sqrt) and isinstance(node.arg, IntLit):
            s, m = square_free(node.arg.value)
            if s > 1:
                pulled: Expr = IntLit(s) if m == 1 else Mul(IntLit(s), Sqrt(IntLit(m)))
                return [RuleResult(replace_at(e, path, pulled))]
    return []


def _mul_factors(e: Expr) -> list[Expr]:
    if isinstance(e, Mul):
        return _mul_factors(e.left) + _mul_factors(e.right)
    return [e]


def _mul_constants(e: Expr) -> list[RuleResult]:
    factors = _mul_factors(e)
    constants = [f for f in factors if as_fraction(f) is not None]
    rest = [f for f in factors if as_fraction(f) is None]
    if len(constants) < 2 or not rest:
        return []
    value = Fraction(1)
    for c in constants:
        value *= as_fraction(c)  # type: ignore[operator]
    combined = rest[0]
    for f in rest[1:]:
        combined = Mul(combined, f)
    if value == 1:
        return [RuleResult(combined)]
    return [RuleResult(Mul(fraction_expr(value), combined))]


def _dedupe_or(e: Expr) -> list[RuleResult]:
    if not isinstance(e, OrList):
        return []
    unique: list[Expr] = []
    for child in e.children:
        if child not in unique:
            unique.append(child)
    if len(unique) == len(e.children):
        return []
    return [RuleResult(disjunction(unique))]


# --- the catalog ----------------------------------------------------------


def _parse(text: str) -> Expr:
    from .syntax import parse

    return parse(text)


def _pattern(text: str) -> Expr:
    from .syntax import parse

    return parse(text, allow_meta=True)


def _build_rules() -> dict[str, Rule]:
    sound_primitives: dict[str, Callable[[Expr], list[RuleResult]]] = {
        "merge": _merge,
        "distribute": _distribute,
        "remove division": _remove_division,
        "varToLeft": _var_to_left,
        "conToRight": _con_to_right,
        "scaleToOne": _scale_to_one,
        "moveToLeft": _move_to_left,
        "factorQuadratic": _factor_quadratic,
        "factorOutVar": _factor_out_var,
        "completeSquare": _complete_square,
        "writeAsSquare": _write_as_square,
        "squareBothSidesSolve": _square_both_sides,
        "noRealSolutions": _no_real_solutions,
        "computeDiscriminant": _compute_discriminant,
        "discriminantRoot": _discriminant_root,
        "abcFormula": _abc_formula,
        "calcSimplify": _calc_simplify,
        "calcAdd": _calc_add,
        "simplifyFraction": _simplify_fraction,
        "rootSimplify": _root_simplify,
        "factorOutSquare": _factor_out_square,
        "mulConstants": _mul_constants,
        "dedupeOr": _dedupe_or,
    }
    table: dict[str, Rule] = {
        name: PrimitiveRule(name, fn) for name, fn in sound_primitives.items()
    }
    table["productZero"] = PatternRule(
        "productZero",
        forall=("A", "B"),
        lhs=_pattern("?A*?B = 0"),
        rhs=_pattern("?A = 0 or ?B = 0"),
    )
    table["expandSquare"] = PatternRule(
        "expandSquare",
        forall=("A", "B"),
        lhs=_pattern("(?A + ?B)^2"),
        rhs=_pattern("?A^2 + 2*?A*?B + ?B^2"),
    )
    table["moveTermKeepSign"] = PatternRule(
        "moveTermKeepSign",
        forall=("A", "B", "C"),
        lhs=_pattern("?A + ?B = ?C"),
        rhs=_pattern("?A = ?C + ?B"),
        buggy=True,
        witness=(_parse("x + 3 = 7"), _parse("x = 7 + 3")),
    )
    table["squareOfSum"] = PatternRule(
        "squareOfSum",
        forall=("A", "B"),
        lhs=_pattern("(?A + ?B)^2"),
        rhs=_pattern("?A^2 + ?B^2"),
        buggy=True,
        witness=(_parse("(x + 3)^2 = 16"), _parse("x^2 + 9 = 16")),
    )
    table["signErrorInFormula"] = PrimitiveRule(
        "signErrorInFormula",
        _sign_error_formula,
        buggy=True,
        witness=(
            _parse("x^2 - 4*x - 12 = 0"),
            _parse("x = (-4 + 8)/2 or x = (-4 - 8)/2"),
        ),
    )
    return table


ALL_RULES: dict[str, Rule] = _build_rules()


def rule(name: str) -> Rule:
    try:
        return ALL_RULES[name]
    except KeyError:
        raise RuleError(f"unknown rule: {name}") from None
