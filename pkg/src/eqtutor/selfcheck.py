"""Built-in invariant checks, run by `eqtutor check`.

Each check samples randomized inputs against a property the rest of
the package relies on: sound rules preserve solutions, views are
idempotent, the built-in strategies actually solve what the generators
produce, and the XML layer round-trips. The generators live here so
tests can reuse them.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .algebra import solve_term
from .config import Remove
from .exercises import (
    EXERCISES,
    Exercise,
    derivation,
    diagnose,
    equivalent_terms,
    exercise,
    generate,
)
from .rules import ALL_RULES, apply_rule
from .strategy import (
    Choice,
    Fail,
    Fix,
    Label,
    Many,
    Not,
    OrElse,
    Repeat,
    RuleAtom,
    Seq,
    Somewhere,
    StratVar,
    Strategy,
    StrategyRef,
    Succeed,
    Try,
)
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
    all_paths,
    eval_at,
    free_vars,
)
from .views import ALL_VIEWS, belongs_to, canonical


# --- generators -------------------------------------------------------------


def random_expression(rng: random.Random, depth: int = 3) -> Expr:
    """Random closed or single-variable expression tree."""
    if depth <= 0 or rng.random() < 0.3:
        pick = rng.randrange(3)
        if pick == 0:
            return IntLit(rng.randint(0, 12))
        if pick == 1:
            return Var("x")
        return Neg(IntLit(rng.randint(1, 9)))
    pick = rng.randrange(8)
    a = random_expression(rng, depth - 1)
    b = random_expression(rng, depth - 1)
    if pick == 0:
        return Add(a, b)
    if pick == 1:
        return Sub(a, b)
    if pick == 2:
        return Mul(a, b)
    if pick == 3:
        return Div(a, b)
    if pick == 4:
        return Pow(a, IntLit(rng.randint(0, 3)))
    if pick == 5:
        return Sqrt(a)
    if pick == 6:
        return Neg(a)
    return a


def random_term(rng: random.Random, depth: int = 3) -> Expr:
    """Like random_expression but sometimes a relation or disjunction."""
    pick = rng.random()
    if pick < 0.55:
        return random_expression(rng, depth)
    if pick < 0.9:
        return Eq(random_expression(rng, depth), random_expression(rng, depth))
    from .terms import disjunction

    count = rng.choice((0, 2, 3))
    return disjunction(
        [
            Eq(random_expression(rng, 2), random_expression(rng, 2))
            for _ in range(count)
        ]
    )


_RULE_POOL = (
    "merge",
    "distribute",
    "remove division",
    "varToLeft",
    "conToRight",
    "scaleToOne",
    "calcSimplify",
    "rootSimplify",
    "dedupeOr",
    "moveToLeft",
    "factorQuadratic",
    "productZero",
)

_NAME_POOL = (
    "basic equation",
    "prepare equation",
    "nice factors",
    "a & b",
    'say "so"',
    "x<y",
)


def random_strategy(
    rng: random.Random, depth: int = 4, bound: tuple[str, ...] = ()
) -> Strategy:
    """Random combinator tree; strategy variables only appear bound."""
    flags = {}
    if rng.random() < 0.15:
        flags[rng.choice(("removed", "collapsed", "hidden"))] = True
    if depth <= 0:
        pick = rng.randrange(6 if bound else 5)
        if pick == 0:
            return RuleAtom(rng.choice(_RULE_POOL), **flags)
        if pick == 1:
            return StrategyRef(rng.choice(_NAME_POOL), **flags)
        if pick == 2:
            return Succeed(**flags)
        if pick == 3:
            return Fail(**flags)
        if pick == 4:
            return RuleAtom(rng.choice(_RULE_POOL), **flags)
        return StratVar(rng.choice(bound), **flags)
    pick = rng.randrange(10)
    if pick in (0, 1):
        children = tuple(
            random_strategy(rng, depth - 1, bound)
            for _ in range(rng.randint(1, 3))
        )
        return Seq(children, **flags) if pick == 0 else Choice(children, **flags)
    if pick == 2:
        return OrElse(
            tuple(
                random_strategy(rng, depth - 1, bound)
                for _ in range(rng.randint(1, 3))
            ),
            **flags,
        )
    if pick == 3:
        return Label(rng.choice(_NAME_POOL), random_strategy(rng, depth - 1, bound), **flags)
    if pick == 4:
        return Try(random_strategy(rng, depth - 1, bound), **flags)
    if pick == 5:
        return Repeat(random_strategy(rng, depth - 1, bound), **flags)
    if pick == 6:
        return Many(random_strategy(rng, depth - 1, bound), **flags)
    if pick == 7:
        return Somewhere(random_strategy(rng, depth - 1, bound), **flags)
    if pick == 8:
        var = rng.choice(("s", "t", "loop"))
        return Fix(var, random_strategy(rng, depth - 1, bound + (var,)), **flags)
    return Not(random_strategy(rng, depth - 1, bound), **flags)


# --- properties -------------------------------------------------------------


def _samples(rng: random.Random, count: int = 100) -> list[Fraction]:
    return [
        Fraction(rng.randint(-60, 60), rng.randint(1, 12)) for _ in range(count)
    ]


def _pointwise_equal(a: Expr, b: Expr, points: list[Fraction]) -> bool:
    for point in points:
        try:
            va = eval_at(a, {"x": point})
        except Exception:
            return False
        try:
            vb = eval_at(b, {"x": point})
        except Exception:
            return False
        if va is None or vb is None:
            continue
        if va != vb or isinstance(va, bool) != isinstance(vb, bool):
            return False
    return True


def check_rule_soundness(seed: int = 0) -> str | None:
    """Sound rules preserve meaning at every position of a random corpus."""
    rng = random.Random(seed)
    corpus: list[Expr] = []
    for ex in EXERCISES.values():
        for _ in range(10):
            corpus.append(generate(ex, rng))
    for _ in range(20):
        corpus.append(random_term(rng, 3))
    points = _samples(rng)
    for rule in ALL_RULES.values():
        if rule.buggy:
            continue
        for term in corpus:
            if free_vars(term) - {"x"}:
                continue
            for path in all_paths(term):
                for got in apply_rule(rule, term, path):
                    if not _pointwise_equal(term, got, points):
                        from .syntax import to_text

                        return (
                            f"{rule.name} broke {to_text(term)} at {list(path)}"
                            f" -> {to_text(got)}"
                        )
    return None


def check_view_idempotence(seed: int = 0) -> str | None:
    rng = random.Random(seed)
    for view in ALL_VIEWS.values():
        for _ in range(150):
            term = random_term(rng, 3)
            once = canonical(view, term)
            if once is None:
                continue
            twice = canonical(view, once)
            if twice != once:
                from .syntax import to_text

                return f"{view.name} not idempotent on {to_text(term)}"
            if not belongs_to(view, once) and view.match(once) is not None:
                return f"{view.name} canonical form does not match itself"
    return None


def check_domain_solving(seed: int = 0) -> str | None:
    """The built-in strategies solve what the generators produce, and the
    final answer agrees with the exact solver."""
    rng = random.Random(seed)
    for ex_id, count in (("lineq", 100), ("quadeq", 200)):
        ex = exercise(ex_id)
        for _ in range(count):
            e = generate(ex, rng)
            d = derivation(ex, e)
            if not ex.solved(d.final):
                return f"{ex_id}: unsolved final for {ex.printer(e)}"
            want = solve_term(e, "x")
            got = solve_term(d.final, "x")
            if want is None or got != want:
                return f"{ex_id}: wrong answer for {ex.printer(e)}"
    return None


def check_technique_removal(seed: int = 0) -> str | None:
    """Every quadratic is still solvable with any one technique removed."""
    rng = random.Random(seed)
    ex = exercise("quadeq")
    equations = [generate(ex, rng) for _ in range(30)]
    techniques = (
        "factor out",
        "nice factors",
        "complete the square",
        "quadratic formula",
    )
    for technique in techniques:
        for e in equations:
            d = derivation(ex, e, (Remove(technique),))
            if not equivalent_terms(e, d.final):
                return f"removing {technique} broke {ex.printer(e)}"
    return None


def check_buggy_witnesses(seed: int = 0) -> str | None:
    for ex in EXERCISES.values():
        for name in ex.buggy_rules:
            rule = ALL_RULES[name]
            if rule.witness is None:
                return f"{name} has no stored witness"
            source, sink = rule.witness
            got = diagnose(ex, source, sink)
            if got.kind != "buggy" or got.detail != name:
                return f"witness for {name} diagnosed as {got}"
    return None


def check_xml_roundtrip(seed: int = 0) -> str | None:
    from . import xmlio

    rng = random.Random(seed)
    for _ in range(150):
        strategy = random_strategy(rng, rng.randint(1, 4))
        doc = xmlio.serialize_strategy(strategy)
        back = xmlio.parse_strategy(doc)
        if back != strategy:
            return f"parse changed the strategy:\n{doc}"
        again = xmlio.serialize_strategy(back)
        if again != doc:
            return f"re-serialization differed:\n{doc}\nvs\n{again}"
    return None


CHECKS = (
    ("rule-soundness", check_rule_soundness),
    ("view-idempotence", check_view_idempotence),
    ("domain-solving", check_domain_solving),
    ("technique-removal", check_technique_removal),
    ("buggy-witnesses", check_buggy_witnesses),
    ("xml-roundtrip", check_xml_roundtrip),
)


def run_all(seed: int = 0) -> list[tuple[str, bool, str | None]]:
    results = []
    for name, fn in CHECKS:
        try:
            detail = fn(seed)
        except Exception as err:  # a crashed check is a failed check
            detail = f"{type(err).__name__}: {err}"
        results.append((name, detail is None, detail))
    return results
