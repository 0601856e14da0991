from fractions import Fraction

import pytest

from eqtutor.terms import (
    Add,
    Div,
    Eq,
    IntLit,
    InvalidPathError,
    Mul,
    Neg,
    OrList,
    Pow,
    Sqrt,
    Sub,
    UnboundVariableError,
    Var,
    all_paths,
    disjunction,
    eval_at,
    free_vars,
    replace_at,
    subterm,
)


X = Var("x")


def test_orlist_flattens_on_construction():
    inner = OrList((Eq(X, IntLit(1)), Eq(X, IntLit(2))))
    outer = OrList((Eq(X, IntLit(0)), inner))
    assert outer.children == (
        Eq(X, IntLit(0)),
        Eq(X, IntLit(1)),
        Eq(X, IntLit(2)),
    )


def test_disjunction_collapses_singleton():
    only = Eq(X, IntLit(3))
    assert disjunction([only]) == only
    assert disjunction([]) == OrList(())


def test_intlit_rejects_negative():
    with pytest.raises(Exception):
        IntLit(-1)


def test_paths_are_preorder():
    e = Eq(Add(X, IntLit(1)), IntLit(2))
    assert list(all_paths(e)) == [(), (0,), (0, 0), (0, 1), (1,)]


def test_subterm_and_replace():
    e = Eq(Add(X, IntLit(1)), IntLit(2))
    assert subterm(e, (0, 1)) == IntLit(1)
    swapped = replace_at(e, (0, 1), IntLit(9))
    assert subterm(swapped, (0, 1)) == IntLit(9)
    assert subterm(e, (0, 1)) == IntLit(1)  # original untouched
    with pytest.raises(InvalidPathError):
        subterm(e, (5,))


def test_eval_exact_rationals():
    e = Div(Add(IntLit(1), IntLit(2)), IntLit(4))
    assert eval_at(e, {}) == Fraction(3, 4)


def test_eval_division_by_zero_is_undefined():
    assert eval_at(Div(IntLit(1), Sub(IntLit(2), IntLit(2))), {}) is None


def test_eval_sqrt_only_perfect_squares():
    assert eval_at(Sqrt(IntLit(9)), {}) == 3
    assert eval_at(Sqrt(IntLit(2)), {}) is None
    assert eval_at(Sqrt(Neg(IntLit(4))), {}) is None


def test_eval_undefined_propagates():
    e = Add(IntLit(1), Sqrt(IntLit(2)))
    assert eval_at(e, {}) is None


def test_eval_equation_is_boolean():
    assert eval_at(Eq(X, IntLit(3)), {"x": Fraction(3)}) is True
    assert eval_at(Eq(X, IntLit(3)), {"x": Fraction(4)}) is False


def test_eval_empty_disjunction_is_false():
    assert eval_at(OrList(()), {}) is False


def test_eval_unbound_variable_raises():
    with pytest.raises(UnboundVariableError):
        eval_at(X, {})


def test_eval_power_needs_integer_exponent():
    assert eval_at(Pow(IntLit(2), IntLit(3)), {}) == 8
    assert eval_at(Pow(IntLit(2), Div(IntLit(1), IntLit(2))), {}) is None


def test_free_vars():
    e = Eq(Mul(X, Var("y")), IntLit(0))
    assert free_vars(e) == {"x", "y"}
