"""Strategy configuration.

Teachers adapt a strategy without editing it: flag toggles (remove,
collapse, hide and their inverses), structural guidance (mustuse,
prefer) and wholesale replacement. Every operation is a pure
Strategy -> Strategy function; a configuration is applied as a left
fold. A target names either a label or, when no label matches, a rule.
Missing targets warn and leave the strategy unchanged so that one
configuration can be shared across exercises that do not all contain
every target.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, replace

from .strategy import (
    Choice,
    Label,
    OrElse,
    RuleAtom,
    Strategy,
    child_strategies,
    with_children,
)


class ConfigurationWarning(UserWarning):
    pass


@dataclass(frozen=True)
class Remove:
    target: str


@dataclass(frozen=True)
class Reinsert:
    target: str


@dataclass(frozen=True)
class Collapse:
    target: str


@dataclass(frozen=True)
class Expand:
    target: str


@dataclass(frozen=True)
class Hide:
    target: str


@dataclass(frozen=True)
class Reveal:
    target: str


@dataclass(frozen=True)
class MustUse:
    target: str


@dataclass(frozen=True)
class Prefer:
    target: str


@dataclass(frozen=True)
class Replace:
    target: str
    replacement: Strategy


Transformation = (
    Remove | Reinsert | Collapse | Expand | Hide | Reveal | MustUse | Prefer | Replace
)

Configuration = tuple[Transformation, ...]


def _label_matches(node: Strategy, target: str) -> bool:
    return isinstance(node, Label) and node.name == target


def _rule_matches(node: Strategy, target: str) -> bool:
    return isinstance(node, RuleAtom) and node.rule_name == target


def _any_node(node: Strategy, pred) -> bool:
    if pred(node):
        return True
    return any(_any_node(c, pred) for c in child_strategies(node))


def _matcher(strategy: Strategy, target: str):
    """Label occurrences shadow rule occurrences of the same name."""
    if _any_node(strategy, lambda n: _label_matches(n, target)):
        return lambda n: _label_matches(n, target)
    if _any_node(strategy, lambda n: _rule_matches(n, target)):
        return lambda n: _rule_matches(n, target)
    return None


def _warn_missing(target: str) -> None:
    warnings.warn(
        f"configuration target not found: {target}", ConfigurationWarning, stacklevel=3
    )


def _map_nodes(node: Strategy, fn) -> Strategy:
    mapped = fn(node)
    parts = child_strategies(mapped)
    if not parts:
        return mapped
    return with_children(mapped, tuple(_map_nodes(c, fn) for c in parts))


def _set_flag(strategy: Strategy, target: str, **flag) -> Strategy:
    matches = _matcher(strategy, target)
    if matches is None:
        _warn_missing(target)
        return strategy
    return _map_nodes(strategy, lambda n: replace(n, **flag) if matches(n) else n)


def _contains(node: Strategy, matches) -> bool:
    return _any_node(node, matches)


def _must_use(strategy: Strategy, target: str) -> Strategy:
    matches = _matcher(strategy, target)
    if matches is None:
        _warn_missing(target)
        return strategy

    def walk(node: Strategy) -> Strategy:
        if isinstance(node, (Choice, OrElse)) and _contains(node, matches):
            kept = tuple(c for c in node.children if _contains(c, matches))
            node = replace(node, children=kept)
        parts = child_strategies(node)
        if not parts:
            return node
        return with_children(node, tuple(walk(c) for c in parts))

    return walk(strategy)


def _prefer(strategy: Strategy, target: str) -> Strategy:
    matches = _matcher(strategy, target)
    if matches is None:
        _warn_missing(target)
        return strategy

    def walk(node: Strategy) -> Strategy:
        if isinstance(node, Choice) and any(
            _contains(c, matches) for c in node.children
        ):
            first = [c for c in node.children if _contains(c, matches)]
            rest = [c for c in node.children if not _contains(c, matches)]
            node = OrElse(
                tuple(first + rest),
                removed=node.removed,
                collapsed=node.collapsed,
                hidden=node.hidden,
            )
        parts = child_strategies(node)
        if not parts:
            return node
        return with_children(node, tuple(walk(c) for c in parts))

    return walk(strategy)


def _expand(
    strategy: Strategy, target: str, expansions: dict[str, Strategy]
) -> Strategy:
    if _any_node(strategy, lambda n: _label_matches(n, target)):
        return _map_nodes(
            strategy,
            lambda n: replace(n, collapsed=False) if _label_matches(n, target) else n,
        )
    if _any_node(strategy, lambda n: _rule_matches(n, target)):
        refinement = expansions.get(target)
        if refinement is None:
            warnings.warn(
                f"no expansion registered for rule: {target}",
                ConfigurationWarning,
                stacklevel=3,
            )
            return strategy

        def walk(node: Strategy) -> Strategy:
            if _rule_matches(node, target):
                return replace(
                    refinement,
                    removed=refinement.removed or node.removed,
                    hidden=refinement.hidden or node.hidden,
                )
            parts = child_strategies(node)
            if not parts:
                return node
            return with_children(node, tuple(walk(c) for c in parts))

        return walk(strategy)
    _warn_missing(target)
    return strategy


def _collapse(strategy: Strategy, target: str) -> Strategy:
    if _any_node(strategy, lambda n: _label_matches(n, target)):
        return _set_flag(strategy, target, collapsed=True)
    if _any_node(strategy, lambda n: _rule_matches(n, target)):
        warnings.warn(
            f"collapse needs a labeled target, not a rule: {target}",
            ConfigurationWarning,
            stacklevel=3,
        )
        return strategy
    _warn_missing(target)
    return strategy


def _replace_nodes(strategy: Strategy, target: str, replacement: Strategy) -> Strategy:
    matches = _matcher(strategy, target)
    if matches is None:
        _warn_missing(target)
        return strategy

    def walk(node: Strategy) -> Strategy:
        if matches(node):
            return replacement  # no recursion into the replacement
        parts = child_strategies(node)
        if not parts:
            return node
        return with_children(node, tuple(walk(c) for c in parts))

    return walk(strategy)


def apply_transformation(
    strategy: Strategy,
    op: Transformation,
    expansions: dict[str, Strategy] | None = None,
) -> Strategy:
    expansions = expansions or {}
    match op:
        case Remove(target):
            return _set_flag(strategy, target, removed=True)
        case Reinsert(target):
            return _set_flag(strategy, target, removed=False)
        case Collapse(target):
            return _collapse(strategy, target)
        case Expand(target):
            return _expand(strategy, target, expansions)
        case Hide(target):
            return _set_flag(strategy, target, hidden=True)
        case Reveal(target):
            return _set_flag(strategy, target, hidden=False)
        case MustUse(target):
            return _must_use(strategy, target)
        case Prefer(target):
            return _prefer(strategy, target)
        case Replace(target, replacement):
            return _replace_nodes(strategy, target, replacement)
    raise TypeError(f"unknown transformation: {op!r}")


def apply_configuration(
    strategy: Strategy,
    configuration: Configuration,
    expansions: dict[str, Strategy] | None = None,
) -> Strategy:
    for op in configuration:
        strategy = apply_transformation(strategy, op, expansions)
    return strategy
