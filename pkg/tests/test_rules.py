"""Rewrite rules: matching is purely syntactic, applications are exact, and
every expected output below is pinned as the full printed term.
"""

from fractions import Fraction

import pytest

from eqtutor.rules import (
    ALL_RULES,
    Condition,
    PatternRule,
    RuleError,
    applicable_at,
    apply_rule,
    match_pattern,
    rule,
    substitute,
)
from eqtutor.syntax import parse, parse_pattern, to_text
from eqtutor.terms import Add, IntLit, Var


def applied(name, text):
    """Printed results of a rule at the root of a parsed term."""
    return [to_text(r.term) for r in rule(name).apply(parse(text))]


def scratch_lines(name, text):
    results = rule(name).apply(parse(text))
    assert len(results) == 1
    return [to_text(s) for s in results[0].scratch]


# --- matching --------------------------------------------------------------


def test_match_binds_subterms():
    env = match_pattern(parse_pattern("?A + ?B"), parse("x + 3"))
    assert env == {"A": Var("x"), "B": IntLit(3)}


def test_match_is_syntactic_not_semantic():
    # -(3 - 5) equals 2 but is a negation, not an addition
    assert match_pattern(parse_pattern("?A + ?B"), parse("-(3 - 5)")) is None


def test_match_requires_consistent_bindings():
    same = parse_pattern("?A + ?A")
    assert match_pattern(same, parse("x + x")) == {"A": Var("x")}
    assert match_pattern(same, parse("x + 3")) is None


def test_match_literal_structure():
    pat = parse_pattern("?A*?B = 0")
    env = match_pattern(pat, parse("(x - 6)*(x + 2) = 0"))
    assert env == {"A": parse("x - 6"), "B": parse("x + 2")}
    # the zero must be the literal 0, not something equal to it
    assert match_pattern(pat, parse("(x - 6)*(x + 2) = 0 + 0")) is None


def test_substitute_rebuilds():
    got = substitute(parse_pattern("?A + 2"), {"A": Var("x")})
    assert got == Add(Var("x"), IntLit(2))


def test_substitute_rejects_unbound_names():
    with pytest.raises(RuleError):
        substitute(parse_pattern("?A + ?B"), {"A": Var("x")})


def test_sound_pattern_rules_must_bind_their_outputs():
    with pytest.raises(RuleError):
        PatternRule(
            "bad",
            forall=("A", "B"),
            lhs=parse_pattern("?A"),
            rhs=parse_pattern("?B"),
        )
    with pytest.raises(RuleError):
        PatternRule(
            "bad",
            forall=("A",),
            lhs=parse_pattern("?A"),
            rhs=parse_pattern("?B"),
        )


@pytest.mark.parametrize(
    "kind, text, holds",
    [
        ("nonzero", "2", True),
        ("nonzero", "0", False),
        ("nonzero", "x", False),
        ("integer", "1/2", False),
        ("integer", "4/2", True),
        ("positive", "-1", False),
        ("positive", "3", True),
        ("nonneg-discriminant", "0", True),
    ],
)
def test_condition_vocabulary(kind, text, holds):
    condition = Condition(kind, "A")
    assert condition.holds({"A": parse(text)}) is holds


def test_condition_requires_binding():
    assert Condition("nonzero", "A").holds({}) is False


# --- pattern rules in the catalog -------------------------------------------


def test_product_zero_splits_into_cases():
    assert applied("productZero", "(x - 6)*(x + 2) = 0") == [
        "x - 6 = 0 or x + 2 = 0"
    ]
    assert applied("productZero", "(x - 6)*(x + 2) = 1") == []


def test_expand_square():
    assert applied("expandSquare", "(x + 3)^2") == ["x^2 + 2*x*3 + 3^2"]


# --- linear primitives -------------------------------------------------------


def test_merge_collects_like_terms_per_side():
    assert applied("merge", "2*x + 3*x + 1 = 1 + 4") == ["5*x + 1 = 5"]
    assert applied("merge", "2*x + 3*x") == ["5*x"]


def test_merge_needs_something_to_do():
    assert applied("merge", "5*x + 1") == []
    assert applied("merge", "x = 0") == []
    assert applied("merge", "x + y + x") == []


def test_merge_never_returns_identity_results():
    # a lone zero monomial merges to the very same term; that is not a step
    assert applied("merge", "0") == []
    assert applied("merge", "5*(x - 2) + 8 = 0") == []


def test_distribute_expands_one_product():
    assert applied("distribute", "5*(x - 2) + 8 = 0") == ["5*x - 10 + 8 = 0"]
    assert applied("distribute", "2*(x + 1)") == ["2*x + 2"]
    assert applied("distribute", "(x + 1)*3") == ["3*x + 3"]
    assert applied("distribute", "2*x") == []


def test_remove_division_clears_denominators():
    assert applied("remove division", "(x + 4)/3 = 2") == ["x + 4 = 6"]
    assert applied("remove division", "x/2 + 1 = 3") == ["x + 2 = 6"]
    assert applied("remove division", "x + 4 = 6") == []


def test_var_to_left():
    assert applied("varToLeft", "5*x + 3 = 2*x - 6") == ["3*x + 3 = -6"]
    assert applied("varToLeft", "x + 1 = 5") == []


def test_con_to_right():
    assert applied("conToRight", "3*x + 3 = -6") == ["3*x = -9"]
    assert applied("conToRight", "3*x = -9") == []


def test_scale_to_one():
    assert applied("scaleToOne", "3*x = -9") == ["x = -3"]
    assert applied("scaleToOne", "2*x^2 = 8") == ["x^2 = 4"]
    assert applied("scaleToOne", "x = 5") == []


def test_scale_to_one_keeps_exact_roots():
    assert applied("scaleToOne", "2*x = 4*sqrt(2)") == ["x = 2*sqrt(2)"]


# --- quadratic primitives ----------------------------------------------------


def test_move_to_left():
    assert applied("moveToLeft", "x^2 - 4*x = 12") == ["x^2 - 4*x - 12 = 0"]
    assert applied("moveToLeft", "x^2 - 4*x - 12 = 0") == []


def test_factor_quadratic_nice_roots_only():
    assert applied("factorQuadratic", "x^2 - 4*x - 12 = 0") == [
        "(x - 6)*(x + 2) = 0"
    ]
    assert applied("factorQuadratic", "x^2 - 2 = 0") == []


def test_factor_quadratic_non_monic():
    assert applied("factorQuadratic", "2*x^2 + 4*x + 2 = 0") == [
        "(2*x + 2)*(x + 1) = 0"
    ]


def test_factor_out_var():
    assert applied("factorOutVar", "x^2 - 4*x = 0") == ["x*(x - 4) = 0"]
    assert applied("factorOutVar", "x^2 - 4*x + 1 = 0") == []


def test_complete_square():
    assert applied("completeSquare", "x^2 - 4*x = 12") == [
        "x^2 - 4*x + 4 = 16"
    ]
    # only fires once the constant has moved right
    assert applied("completeSquare", "x^2 + 2*x + 1 = 4") == []


def test_write_as_square():
    assert applied("writeAsSquare", "x^2 - 4*x + 4 = 16") == ["(x - 2)^2 = 16"]
    # the right-hand side passes through untouched
    assert applied("writeAsSquare", "x^2 + 2*x + 1 = 2^2") == ["(x + 1)^2 = 2^2"]


def test_square_both_sides():
    assert applied("squareBothSidesSolve", "(x - 2)^2 = 16") == [
        "x - 2 = 4 or x - 2 = -4"
    ]
    assert applied("squareBothSidesSolve", "(x + 1)^2 = 8") == [
        "x + 1 = sqrt(8) or x + 1 = -sqrt(8)"
    ]
    # a zero right-hand side leaves a single case
    assert applied("squareBothSidesSolve", "(x + 1)^2 = 0") == ["x + 1 = 0"]
    assert applied("squareBothSidesSolve", "(x + 1)^2 = -4") == []


def test_no_real_solutions():
    assert applied("noRealSolutions", "x^2 + 1 = 0") == ["no solutions"]
    assert applied("noRealSolutions", "x^2 = 4*x - 5") == ["no solutions"]
    assert applied("noRealSolutions", "x^2 - 1 = 0") == []


def test_compute_discriminant_is_scratch_only():
    results = rule("computeDiscriminant").apply(parse("x^2 - 4*x - 12 = 0"))
    assert len(results) == 1
    assert results[0].term == parse("x^2 - 4*x - 12 = 0")
    assert [to_text(s) for s in results[0].scratch] == [
        "D = (-4)^2 - 4*1*-12",
        "D = 64",
    ]


def test_discriminant_root_scratch():
    assert scratch_lines("discriminantRoot", "x^2 - 4*x - 12 = 0") == [
        "sqrt(D) = 8"
    ]
    assert scratch_lines("discriminantRoot", "x^2 - 2 = 0") == [
        "sqrt(D) = 2*sqrt(2)"
    ]
    assert applied("discriminantRoot", "x^2 + 1 = 0") == []


def test_abc_formula():
    assert applied("abcFormula", "x^2 - 4*x - 12 = 0") == [
        "x = (4 + 8)/2 or x = (4 - 8)/2"
    ]


def test_sign_error_formula_is_the_buggy_twin():
    buggy = rule("signErrorInFormula")
    assert buggy.buggy
    assert [to_text(r.term) for r in buggy.apply(parse("x^2 - 4*x - 12 = 0"))] == [
        "x = (-4 + 8)/2 or x = (-4 - 8)/2"
    ]


# --- simplification primitives -----------------------------------------------


def test_calc_simplify():
    assert applied("calcSimplify", "(4 + 8)/2") == ["6"]
    assert applied("calcSimplify", "6") == []
    assert applied("calcSimplify", "sqrt(2)") == []
    assert applied("calcSimplify", "3 + 5 = 8") == []


def test_calc_add_is_a_single_addition():
    assert applied("calcAdd", "3 + 5") == ["8"]
    assert applied("calcAdd", "3 - 5") == ["-2"]
    assert applied("calcAdd", "-3 + 5") == ["2"]
    # only literal operands count
    assert applied("calcAdd", "(3 + 5) + 1") == []
    assert applied("calcAdd", "1/2 + 1") == []


def test_simplify_fraction():
    assert applied("simplifyFraction", "8/6") == ["4/3"]
    assert applied("simplifyFraction", "4/3") == []
    assert applied("simplifyFraction", "8/2") == ["4"]


def test_root_simplify():
    assert applied("rootSimplify", "sqrt(32)") == ["4*sqrt(2)"]
    assert applied("rootSimplify", "1/2*sqrt(32)") == ["2*sqrt(2)"]
    assert applied("rootSimplify", "2*sqrt(2)") == []
    assert applied("rootSimplify", "8/2") == []


def test_factor_out_square():
    assert applied("factorOutSquare", "sqrt(32)") == ["4*sqrt(2)"]
    assert applied("factorOutSquare", "x + sqrt(8)") == ["x + 2*sqrt(2)"]
    assert applied("factorOutSquare", "sqrt(36)") == ["6"]
    assert applied("factorOutSquare", "sqrt(2)") == []


def test_mul_constants():
    assert applied("mulConstants", "1/2*(4*sqrt(2))") == ["2*sqrt(2)"]
    assert applied("mulConstants", "2*x*3") == ["6*x"]
    assert applied("mulConstants", "1/2*2*x") == ["x"]
    assert applied("mulConstants", "2*3") == []
    assert applied("mulConstants", "2*x") == []


def test_dedupe_or():
    assert applied("dedupeOr", "x = 1 or x = 1 or x = 2") == ["x = 1 or x = 2"]
    assert applied("dedupeOr", "x = 1 or x = 1") == ["x = 1"]
    assert applied("dedupeOr", "x = 1 or x = 2") == []


# --- applying at positions ----------------------------------------------------


def test_apply_rule_rewrites_at_a_path():
    got = apply_rule(rule("calcAdd"), parse("(3 + 5) + 1 = 0"), (0, 0))
    assert [to_text(e) for e in got] == ["8 + 1 = 0"]


def test_applicable_at_lists_rule_positions():
    got = applicable_at([rule("calcAdd")], parse("(3 + 5) + 1 = 0"))
    assert got == [("calcAdd", (0, 0))]


def test_applicable_at_skips_buggy_rules():
    got = applicable_at(
        [rule("moveTermKeepSign"), rule("calcAdd")], parse("x + 3 = 7")
    )
    assert got == []


def test_buggy_rules_carry_witnesses():
    for name in ("moveTermKeepSign", "squareOfSum", "signErrorInFormula"):
        r = rule(name)
        assert r.buggy
        assert r.witness is not None


def test_move_term_keep_sign_witness_is_reachable():
    r = rule("moveTermKeepSign")
    before, after = r.witness
    assert [to_text(x.term) for x in r.apply(before)] == [to_text(after)]


def test_square_of_sum_rewrites_the_square():
    r = rule("squareOfSum")
    before, _ = r.witness
    assert [to_text(e) for e in apply_rule(r, before, (0,))] == [
        "x^2 + 3^2 = 16"
    ]


def test_unknown_rule_name():
    with pytest.raises(RuleError):
        rule("definitelyNotARule")


def test_catalog_spot_checks():
    assert rule("remove division").name == "remove division"
    sound = [r for r in ALL_RULES.values() if not r.buggy]
    buggy = [r for r in ALL_RULES.values() if r.buggy]
    assert len(buggy) == 3
    assert len(sound) == 25
