"""Built-in solving strategies and equation generators.

Two strategies ship with the package: one for linear equations and one
for quadratic equations. Both are ordinary strategy values; everything
a configuration can do to a user-written strategy it can do to these.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .algebra import merged_poly_expr
from .strategy import (
    Choice,
    Label,
    Not,
    Repeat,
    RuleAtom,
    Seq,
    Somewhere,
    Strategy,
    Try,
)
from .terms import Eq, Expr, IntLit, Mul, Neg, Pow, Var


def _rules(*names: str) -> tuple[RuleAtom, ...]:
    return tuple(RuleAtom(n) for n in names)


LINEAR_STRATEGY: Strategy = Label(
    "linear equation",
    Seq(
        (
            Label(
                "prepare equation",
                Repeat(Choice(_rules("merge", "distribute", "remove division"))),
            ),
            Label(
                "basic equation",
                Seq(
                    (
                        Try(RuleAtom("varToLeft")),
                        Try(RuleAtom("conToRight")),
                        Try(RuleAtom("scaleToOne")),
                    )
                ),
            ),
        )
    ),
)


def _tidy_choice() -> Strategy:
    return Choice(
        _rules(
            "varToLeft",
            "conToRight",
            "scaleToOne",
            "calcSimplify",
            "rootSimplify",
            "dedupeOr",
        )
    )


def _tidy(**flags: bool) -> Strategy:
    # cleanup phase shared by every quadratic technique; reused under
    # different visibility flags, hence built fresh each time
    return Label("basic equation", Repeat(Somewhere(_tidy_choice())), **flags)


QUADRATIC_STRATEGY: Strategy = Label(
    "quadratic equation",
    Choice(
        (
            RuleAtom("noRealSolutions"),
            Label(
                "square both sides",
                Seq((RuleAtom("squareBothSidesSolve"), _tidy())),
            ),
            Label(
                "factor out",
                Seq(
                    (
                        Try(RuleAtom("moveToLeft")),
                        RuleAtom("factorOutVar"),
                        RuleAtom("productZero"),
                        _tidy(hidden=True),
                    )
                ),
            ),
            Label(
                "nice factors",
                # factoring is optional so the branch also accepts an
                # equation someone already factored; productZero is not,
                # which keeps the branch dead on unfactored input
                Seq(
                    (
                        Try(RuleAtom("moveToLeft")),
                        Try(RuleAtom("factorQuadratic")),
                        RuleAtom("productZero"),
                        _tidy(hidden=True),
                    )
                ),
            ),
            Label(
                "complete the square",
                Seq(
                    (
                        RuleAtom("completeSquare"),
                        RuleAtom("writeAsSquare"),
                        RuleAtom("squareBothSidesSolve"),
                        _tidy(collapsed=True),
                    )
                ),
            ),
            Label(
                "quadratic formula",
                Seq(
                    (
                        Try(RuleAtom("moveToLeft")),
                        RuleAtom("computeDiscriminant"),
                        RuleAtom("discriminantRoot"),
                        RuleAtom("abcFormula"),
                        _tidy(collapsed=True),
                    )
                ),
            ),
            # a derivation can be picked up mid-cleanup (the diagnosis
            # service restarts the strategy at whatever the learner wrote
            # down); the mandatory first step keeps this branch from
            # declaring untouched equations finished, and the guard keeps
            # it from finishing while a solving technique still opens
            Label(
                "basic equation",
                Seq(
                    (
                        Somewhere(_tidy_choice()),
                        Repeat(Somewhere(_tidy_choice())),
                        Not(
                            Choice(
                                _rules(
                                    "noRealSolutions",
                                    "squareBothSidesSolve",
                                    "moveToLeft",
                                    "factorOutVar",
                                    "factorQuadratic",
                                    "productZero",
                                    "completeSquare",
                                    "computeDiscriminant",
                                )
                            )
                        ),
                    )
                ),
            ),
        )
    ),
)


def _subtree(node: Strategy, name: str) -> Strategy:
    from .strategy import child_strategies

    if isinstance(node, Label) and node.name == name:
        return node
    for child in child_strategies(node):
        found = _subtree(child, name)
        if found is not None:
            return found
    return None  # type: ignore[return-value]


NAMED_STRATEGIES: dict[str, Strategy] = {
    "linear equation": LINEAR_STRATEGY,
    "prepare equation": _subtree(LINEAR_STRATEGY, "prepare equation"),
    "basic equation": _subtree(LINEAR_STRATEGY, "basic equation"),
    "quadratic equation": QUADRATIC_STRATEGY,
}

# rule refinements: a coarse rewrite and the finer steps it stands for
EXPANSIONS: dict[str, Strategy] = {
    "rootSimplify": Seq(
        (RuleAtom("factorOutSquare"), Try(RuleAtom("mulConstants")))
    ),
}


# --- generators ---------------------------------------------------------

VAR = "x"


def _poly(coeffs: dict[int, int | Fraction]) -> Expr:
    return merged_poly_expr({d: Fraction(c) for d, c in coeffs.items()}, VAR)


def _nonzero(rng: random.Random, lo: int, hi: int) -> int:
    while True:
        n = rng.randint(lo, hi)
        if n != 0:
            return n


def generate_linear(rng: random.Random) -> Expr:
    """Random linear equation with a clean rational solution."""
    shape = rng.randrange(3)
    if shape == 0:
        # a1*x + b1 = a2*x + b2 with distinct slopes
        a1 = _nonzero(rng, -9, 9)
        a2 = rng.randint(-9, 9)
        while a2 == a1:
            a2 = rng.randint(-9, 9)
        b1, b2 = rng.randint(-9, 9), rng.randint(-9, 9)
        return Eq(_poly({1: a1, 0: b1}), _poly({1: a2, 0: b2}))
    if shape == 1:
        # k*(x + b) + c = d, exercising distribution
        k = _nonzero(rng, 2, 5) * rng.choice((1, -1))
        b = _nonzero(rng, -6, 6)
        c, d = rng.randint(-9, 9), rng.randint(-9, 9)
        grouped = Mul(
            IntLit(k) if k > 0 else Neg(IntLit(-k)), _poly({1: 1, 0: b})
        )
        lhs = grouped if c == 0 else _sum(grouped, c)
        return Eq(lhs, _poly({0: d}))
    # (x + b)/k = d, exercising division removal
    k = _nonzero(rng, 2, 6)
    b = _nonzero(rng, -6, 6)
    d = rng.randint(-6, 6)
    from .terms import Div

    return Eq(Div(_poly({1: 1, 0: b}), IntLit(k)), _poly({0: d}))


def _sum(lhs: Expr, constant: int) -> Expr:
    from .terms import Add, Sub

    if constant >= 0:
        return Add(lhs, IntLit(constant))
    return Sub(lhs, IntLit(-constant))


def generate_quadratic(rng: random.Random) -> Expr:
    """Random quadratic equation solvable by the built-in strategy."""
    shape = rng.randrange(5)
    r1 = _nonzero(rng, -9, 9)
    r2 = _nonzero(rng, -9, 9)
    b = -(r1 + r2)
    c = r1 * r2
    if shape == 0:
        # x^2 + b*x + c = 0 with integer roots
        return Eq(_poly({2: 1, 1: b, 0: c}), IntLit(0))
    if shape == 1:
        # x^2 + b*x = -c, constant moved across
        return Eq(_poly({2: 1, 1: b}), _poly({0: -c}))
    if shape == 2:
        # (x + k)^2 = s^2
        k = rng.randint(-4, 4)
        s = rng.randint(1, 5)
        return Eq(Pow(_poly({1: 1, 0: k}), IntLit(2)), IntLit(s * s))
    if shape == 3:
        # x^2 = s^2
        s = rng.randint(1, 5)
        return Eq(Pow(Var(VAR), IntLit(2)), IntLit(s * s))
    # a*x^2 + a*b*x + a*c = 0, non-monic with the same integer roots
    a = rng.choice((2, 3))
    return Eq(_poly({2: a, 1: a * b, 0: a * c}), IntLit(0))
