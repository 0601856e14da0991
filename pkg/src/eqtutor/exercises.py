"""Exercises and the feedback services built on them.

An exercise packages a strategy with the predicates a tutoring front
end needs: which equations the exercise accepts, when a term counts as
solved, when two terms are equivalent, and which buggy rules to watch
for. The services at the bottom answer the questions a front end asks:
what may the student do next, is this submission on some solution path,
and if not, what went wrong.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .algebra import (
    poly_coeffs,
    poly_degree,
    relation_degree,
    solve_term,
    surd_expr,
    surd_of,
)
from .config import Configuration, apply_configuration
from .domains import (
    EXPANSIONS,
    LINEAR_STRATEGY,
    NAMED_STRATEGIES,
    QUADRATIC_STRATEGY,
    VAR,
    generate_linear,
    generate_quadratic,
)
from .rules import apply_rule, applicable_at
from .strategy import (
    ENTER,
    EXIT,
    Derivation,
    Interpreter,
    RuleAtom,
    Strategy,
    StrategyRef,
    child_strategies,
    initial_state,
)
from .syntax import parse, to_text
from .terms import Eq, Expr, OrList, Var, all_paths, free_vars
from .views import View, canonical, poly_normal_view


class ExerciseError(Exception):
    pass


class NotSuitable(ExerciseError):
    """The term is outside the exercise's domain."""


class NoDerivation(ExerciseError):
    """The strategy cannot solve the term."""


_INTERP = Interpreter(strategies=NAMED_STRATEGIES)


# --- shared predicates ----------------------------------------------------


def _solved_relation(rel: Expr) -> bool:
    if not isinstance(rel, Eq) or not isinstance(rel.left, Var):
        return False
    rhs = rel.right
    if free_vars(rhs):
        return False
    value = surd_of(rhs)
    # the constant must be written in lowest surd form, e.g. 2*sqrt(2),
    # never 1/2*sqrt(32)
    return value is not None and surd_expr(value) == rhs


def solved_equation(e: Expr) -> bool:
    """A variable alone on the left, a canonical constant on the right;
    a disjunction of such equations, including the empty one."""
    if isinstance(e, OrList):
        return all(_solved_relation(c) for c in e.children)
    return _solved_relation(e)


def _sampled_equal(a: Expr, b: Expr, var: str) -> bool:
    # points where either side is undefined are skipped; when every
    # point is skipped the comparison has no evidence either way and
    # errs on the side of equivalence
    rng = random.Random(0xA11CE)
    for _ in range(200):
        point = Fraction(rng.randint(-60, 60), rng.randint(1, 12))
        va = _eval(a, var, point)
        vb = _eval(b, var, point)
        if va is None or vb is None:
            continue
        if va != vb or isinstance(va, bool) != isinstance(vb, bool):
            return False
    return True


def _eval(e: Expr, var: str, point: Fraction):
    from .terms import eval_at

    try:
        return eval_at(e, {var: point})
    except Exception:
        return None


def equivalent_terms(a: Expr, b: Expr) -> bool:
    """Same solution set when both sides are exactly solvable, pointwise
    sampling otherwise."""
    vs = free_vars(a) | free_vars(b)
    var = next(iter(vs)) if len(vs) == 1 else VAR
    sa = solve_term(a, var)
    sb = solve_term(b, var)
    if sa is not None and sb is not None:
        return sa == sb
    return _sampled_equal(a, b, var)


def suitable_linear(e: Expr) -> bool:
    if not isinstance(e, Eq):
        return False
    vs = free_vars(e)
    if len(vs) > 1:
        return False
    var = next(iter(vs)) if vs else VAR
    left = poly_coeffs(e.left, var)
    right = poly_coeffs(e.right, var)
    if left is None or right is None:
        return False
    return max(poly_degree(left), poly_degree(right)) == 1


def suitable_quadratic(e: Expr) -> bool:
    relations = e.children if isinstance(e, OrList) else (e,)
    vs = free_vars(e)
    if len(vs) > 1:
        return False
    var = next(iter(vs)) if vs else VAR
    for rel in relations:
        degree = relation_degree(rel, var)
        if degree is None or degree > 2:
            return False
    return True


# --- exercises --------------------------------------------------------------


@dataclass(frozen=True)
class Exercise:
    id: str
    description: str
    strategy: Strategy
    extra_rules: tuple[str, ...] = ()
    buggy_rules: tuple[str, ...] = ()
    suitable: Callable[[Expr], bool] = lambda e: True
    solved: Callable[[Expr], bool] = solved_equation
    equivalence: Callable[[Expr, Expr], bool] = equivalent_terms
    similarity: View = poly_normal_view
    generator: Callable[[random.Random], Expr] = generate_linear
    parser: Callable[[str], Expr] = parse
    printer: Callable[[Expr], str] = to_text
    expansions: dict[str, Strategy] = field(default_factory=dict)

    def similar(self, a: Expr, b: Expr) -> bool:
        return canonical(self.similarity, a) == canonical(self.similarity, b)

    def configured(self, configuration: Configuration = ()) -> Strategy:
        return apply_configuration(self.strategy, configuration, self.expansions)


LINEAR_EXERCISE = Exercise(
    id="lineq",
    description="solve a linear equation",
    strategy=LINEAR_STRATEGY,
    extra_rules=("calcAdd", "simplifyFraction"),
    buggy_rules=("moveTermKeepSign",),
    suitable=suitable_linear,
    generator=generate_linear,
    expansions=dict(EXPANSIONS),
)

QUADRATIC_EXERCISE = Exercise(
    id="quadeq",
    description="solve a quadratic equation",
    strategy=QUADRATIC_STRATEGY,
    extra_rules=("merge", "distribute", "expandSquare", "calcAdd", "simplifyFraction"),
    buggy_rules=("moveTermKeepSign", "squareOfSum", "signErrorInFormula"),
    suitable=suitable_quadratic,
    generator=generate_quadratic,
    expansions=dict(EXPANSIONS),
)

EXERCISES: dict[str, Exercise] = {
    exercise.id: exercise for exercise in (LINEAR_EXERCISE, QUADRATIC_EXERCISE)
}


def exercise(exercise_id: str) -> Exercise:
    got = EXERCISES.get(exercise_id)
    if got is None:
        raise ExerciseError(f"unknown exercise: {exercise_id}")
    return got


def strategy_rule_names(strategy: Strategy) -> list[str]:
    """Rule names reachable in a strategy, in traversal order, skipping
    removed subtrees."""
    out: list[str] = []
    seen_refs: set[str] = set()

    def walk(node: Strategy) -> None:
        if node.removed:
            return
        if isinstance(node, RuleAtom):
            if node.rule_name not in out:
                out.append(node.rule_name)
            return
        if isinstance(node, StrategyRef):
            if node.name in seen_refs:
                return
            seen_refs.add(node.name)
            target = _INTERP.strategies.get(node.name)
            if target is not None:
                walk(target)
            return
        for child in child_strategies(node):
            walk(child)

    walk(strategy)
    return out


def _sound_rules(ex: Exercise, configuration: Configuration = ()):
    names = strategy_rule_names(ex.configured(configuration))
    for name in ex.extra_rules:
        if name not in names:
            names.append(name)
    rules = [_INTERP.rule(n) for n in names]
    return [r for r in rules if not r.buggy]


# --- services ---------------------------------------------------------------


def derivation(
    ex: Exercise, e: Expr, configuration: Configuration = ()
) -> Derivation:
    """A complete worked solution, or an error naming what went wrong."""
    if not ex.suitable(e):
        raise NotSuitable(f"not suitable for {ex.id}: {ex.printer(e)}")
    got = _INTERP.first_derivation(ex.configured(configuration), e)
    if got is None:
        raise NoDerivation(f"no derivation for: {ex.printer(e)}")
    return got


def allfirsts(
    ex: Exercise, e: Expr, configuration: Configuration = ()
) -> list[tuple[str, tuple[int, ...], Expr]]:
    """All visible first steps, canonicalized and deduplicated."""
    out: list[tuple[str, tuple[int, ...], Expr]] = []
    seen = set()
    for step, _ in _INTERP.firsts(ex.configured(configuration), e):
        if not step.visible:
            continue
        canon = canonical(ex.similarity, step.after)
        key = (step.name, step.path, canon)
        if key in seen:
            continue
        seen.add(key)
        out.append((step.name, step.path, canon))
    return out


def applicable(
    ex: Exercise, e: Expr, configuration: Configuration = ()
) -> list[tuple[str, tuple[int, ...]]]:
    """Every (rule, position) pair that rewrites e, strategy aside."""
    return applicable_at(_sound_rules(ex, configuration), e)


def findbuggyrules(ex: Exercise, e: Expr, proposed: Expr) -> list[str]:
    """Buggy rules that map e to something similar to the proposal."""
    out: list[str] = []
    for name in ex.buggy_rules:
        rule = _INTERP.rule(name)
        for path in all_paths(e):
            if any(
                ex.similar(got, proposed) for got in apply_rule(rule, e, path)
            ):
                out.append(name)
                break
    return out


def _detour_rule(ex: Exercise, e: Expr, proposed: Expr) -> str | None:
    for rule in _sound_rules(ex):
        for path in all_paths(e):
            if any(
                ex.similar(got, proposed) for got in apply_rule(rule, e, path)
            ):
                return rule.name
    return None


def recognize_step(
    ex: Exercise, e: Expr, proposed: Expr, configuration: Configuration = ()
) -> tuple[str, Expr] | None:
    """The first strategy step whose outcome is similar to the proposal.

    Candidate outcomes are the terms a learner could show after exactly
    one presented step: a visible rule application with any amount of
    hidden cleanup folded in, or a completed collapsed region named by
    its label.
    """
    strategy = ex.configured(configuration)
    target = canonical(ex.similarity, proposed)
    # (state, effective step count, step name, open collapsed regions,
    #  region saw a rule)
    work = [(initial_state(strategy, e), 0, "", 0, False)]
    seen: set[tuple] = set()
    budget = 30_000
    while work:
        budget -= 1
        if budget < 0:
            break
        state, count, name, depth, had_rule = work.pop()
        key = (state.term, state.stack, count, depth)
        if key in seen:
            continue
        seen.add(key)
        for kind, step, nxt in reversed(_INTERP.advance(state)):
            if kind == "done":
                continue
            if kind == "rule":
                if depth > 0:
                    work.append((nxt, count, name, depth, True))
                elif step.visible:
                    if count >= 1:
                        continue
                    if canonical(ex.similarity, nxt.term) == target:
                        return step.name, nxt.term
                    work.append((nxt, 1, step.name, 0, False))
                else:
                    if count == 1 and canonical(ex.similarity, nxt.term) == target:
                        return name, nxt.term
                    work.append((nxt, count, name, depth, had_rule))
                continue
            if kind == "label" and step.visible and step.collapsed:
                if step.kind == ENTER:
                    if depth == 0 and count >= 1:
                        continue
                    fresh = had_rule if depth else False
                    work.append((nxt, count, name, depth + 1, fresh))
                    continue
                if step.kind == EXIT:
                    if depth == 1 and had_rule:
                        if count >= 1:
                            continue
                        if canonical(ex.similarity, nxt.term) == target:
                            return step.name, nxt.term
                        work.append((nxt, 1, step.name, 0, False))
                    else:
                        work.append((nxt, count, name, max(depth - 1, 0), had_rule))
                    continue
            work.append((nxt, count, name, depth, had_rule))
    return None


@dataclass(frozen=True)
class Diagnosis:
    kind: str
    detail: str | None = None

    def __str__(self) -> str:
        if self.detail is None:
            return self.kind
        return f"{self.kind}: {self.detail}"


def diagnose(
    ex: Exercise, e: Expr, proposed: Expr, configuration: Configuration = ()
) -> Diagnosis:
    """Classify a hand-entered step from e to the proposed term."""
    equivalent = ex.equivalence(e, proposed)
    buggy = findbuggyrules(ex, e, proposed)
    if buggy and not equivalent:
        return Diagnosis("buggy", buggy[0])
    if not equivalent:
        return Diagnosis("not-equivalent")
    if ex.similar(e, proposed):
        return Diagnosis("similar")
    recognized = recognize_step(ex, e, proposed, configuration)
    if recognized is not None:
        return Diagnosis("expected", recognized[0])
    detour = _detour_rule(ex, e, proposed)
    if detour is not None:
        return Diagnosis("detour", detour)
    if ex.solved(proposed):
        return Diagnosis("finished")
    return Diagnosis("correct")


def generate(ex: Exercise, rng: random.Random) -> Expr:
    e = ex.generator(rng)
    if not ex.suitable(e):
        raise ExerciseError(f"generator escaped its domain: {ex.printer(e)}")
    return e
