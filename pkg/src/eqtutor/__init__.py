"""Stepwise equation solving: strategies, rewrite rules, and feedback
services for linear and quadratic equations."""

from .algebra import solve_term
from .config import (
    Collapse,
    Configuration,
    ConfigurationWarning,
    Expand,
    Hide,
    MustUse,
    Prefer,
    Reinsert,
    Remove,
    Replace,
    Reveal,
    apply_configuration,
    apply_transformation,
)
from .domains import (
    EXPANSIONS,
    LINEAR_STRATEGY,
    NAMED_STRATEGIES,
    QUADRATIC_STRATEGY,
)
from .exercises import (
    EXERCISES,
    Diagnosis,
    Exercise,
    ExerciseError,
    NoDerivation,
    NotSuitable,
    allfirsts,
    applicable,
    derivation,
    diagnose,
    equivalent_terms,
    exercise,
    findbuggyrules,
    generate,
    recognize_step,
    solved_equation,
)
from .rules import ALL_RULES, PatternRule, PrimitiveRule, apply_rule, applicable_at, rule
from .strategy import (
    Choice,
    Derivation,
    DepthExceeded,
    Fail,
    Fix,
    Interpreter,
    Label,
    Many,
    Not,
    OrElse,
    PresentedStep,
    Repeat,
    RuleAtom,
    Seq,
    Somewhere,
    Step,
    StratVar,
    Strategy,
    StrategyError,
    StrategyRef,
    Succeed,
    Try,
    present,
    term_lines,
)
from .syntax import ParseError, parse, parse_pattern, to_text
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
    Pow,
    Sqrt,
    Sub,
    Var,
    disjunction,
    eval_at,
)
from .views import ALL_VIEWS, View, canonical, parameterize, view
from .xmlio import (
    XmlError,
    parse_configuration,
    parse_configured_strategy,
    parse_strategy,
    resolve_refs,
    serialize_strategy,
)

__version__ = "0.1.0"
