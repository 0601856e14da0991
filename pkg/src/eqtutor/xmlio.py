"""XML wire formats.

Strategies, configurations, rewrite rules and views travel between
tools as XML. Serialization is canonical: two-space indent, attributes
in a fixed order with default flags omitted, so equal strategies give
byte-equal documents and round-tripping is exact.

Rule and strategy names inside a document are resolved lazily: parsing
checks structure only, interpretation looks names up. The exception is
a document whose root is a transformation tag (collapse, mustuse, ...):
applying the transformation needs the named strategy's tree, so those
documents are resolved against a catalog while being parsed.
"""

from __future__ import annotations

import xml.etree.ElementTree as ET
from typing import Callable
from xml.sax.saxutils import escape

from . import config as cfg
from .rules import CONDITION_KINDS, Condition, PatternRule
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
    child_strategies,
    with_children,
)


class XmlError(Exception):
    """Malformed document; the message names the offending element path."""


_FLAG_NAMES = ("removed", "collapsed", "hidden")

_TAGS: dict[type, str] = {
    Label: "label",
    Seq: "sequence",
    Choice: "choice",
    OrElse: "orelse",
    Repeat: "repeat",
    Many: "many",
    Try: "try",
    Not: "not",
    Somewhere: "somewhere",
    Fix: "fix",
    StratVar: "var",
    RuleAtom: "rule",
    StrategyRef: "strategy",
    Fail: "fail",
    Succeed: "succeed",
}

_TRANSFORM_TAGS = {
    "remove": cfg.Remove,
    "reinsert": cfg.Reinsert,
    "collapse": cfg.Collapse,
    "expand": cfg.Expand,
    "hide": cfg.Hide,
    "reveal": cfg.Reveal,
    "mustuse": cfg.MustUse,
    "prefer": cfg.Prefer,
    "replace": cfg.Replace,
}


def _attr(value: str) -> str:
    return escape(value, {'"': "&quot;"})


def _attributes(node: Strategy) -> list[tuple[str, str]]:
    out: list[tuple[str, str]] = []
    if isinstance(node, Label):
        out.append(("name", node.name))
    elif isinstance(node, RuleAtom):
        out.append(("name", node.rule_name))
    elif isinstance(node, (StrategyRef,)):
        out.append(("name", node.name))
    elif isinstance(node, StratVar):
        out.append(("name", node.var))
    elif isinstance(node, Fix):
        out.append(("var", node.var))
    for flag in _FLAG_NAMES:
        if getattr(node, flag):
            out.append((flag, "true"))
    return out


def _emit(node: Strategy, depth: int, lines: list[str]) -> None:
    tag = _TAGS.get(type(node))
    if tag is None:
        raise XmlError(f"cannot serialize {type(node).__name__}")
    pad = "  " * depth
    attrs = "".join(f' {k}="{_attr(v)}"' for k, v in _attributes(node))
    children = child_strategies(node)
    if not children:
        lines.append(f"{pad}<{tag}{attrs}/>")
        return
    lines.append(f"{pad}<{tag}{attrs}>")
    for child in children:
        _emit(child, depth + 1, lines)
    lines.append(f"{pad}</{tag}>")


def serialize_strategy(node: Strategy) -> str:
    lines: list[str] = []
    _emit(node, 0, lines)
    return "\n".join(lines) + "\n"


# --- parsing ----------------------------------------------------------------


def _child_path(parent_path: str, elem: ET.Element, index: int) -> str:
    return f"{parent_path}/{elem.tag}[{index + 1}]"


def _no_text(elem: ET.Element, path: str) -> None:
    if (elem.text or "").strip():
        raise XmlError(f"unexpected text content at {path}")
    for child in elem:
        if (child.tail or "").strip():
            raise XmlError(f"unexpected text content at {path}")


def _flags(elem: ET.Element, path: str) -> dict[str, bool]:
    out: dict[str, bool] = {}
    for flag in _FLAG_NAMES:
        raw = elem.get(flag)
        if raw is None:
            continue
        if raw not in ("true", "false"):
            raise XmlError(f"bad {flag} value {raw!r} at {path}")
        out[flag] = raw == "true"
    return out


def _required(elem: ET.Element, attribute: str, path: str) -> str:
    value = elem.get(attribute)
    if value is None:
        raise XmlError(f"missing {attribute} attribute at {path}")
    return value


def _known_attributes(elem: ET.Element, allowed: set[str], path: str) -> None:
    for key in elem.attrib:
        if key not in allowed and key not in _FLAG_NAMES:
            raise XmlError(f"unknown attribute {key!r} at {path}")


_STRATEGY_TAGS = frozenset(
    (
        "label", "sequence", "choice", "orelse", "repeat", "many", "try",
        "not", "somewhere", "fix", "var", "rule", "strategy", "fail", "succeed",
    )
)


def _parse_node(elem: ET.Element, path: str) -> Strategy:
    tag = elem.tag
    if tag not in _STRATEGY_TAGS:
        raise XmlError(f"unknown element <{tag}> at {path}")
    _no_text(elem, path)
    flags = _flags(elem, path)
    children = [
        _parse_node(child, _child_path(path, child, i)) for i, child in enumerate(elem)
    ]

    def exactly(n: int) -> None:
        if len(children) != n:
            raise XmlError(f"{tag} needs {n} child element(s) at {path}")

    if tag == "label":
        _known_attributes(elem, {"name"}, path)
        exactly(1)
        return Label(_required(elem, "name", path), children[0], **flags)
    if tag == "sequence":
        _known_attributes(elem, set(), path)
        return Seq(tuple(children), **flags)
    if tag == "choice":
        _known_attributes(elem, set(), path)
        return Choice(tuple(children), **flags)
    if tag == "orelse":
        _known_attributes(elem, set(), path)
        return OrElse(tuple(children), **flags)
    if tag in ("repeat", "many", "try", "not", "somewhere"):
        _known_attributes(elem, set(), path)
        exactly(1)
        cls = {"repeat": Repeat, "many": Many, "try": Try, "not": Not,
               "somewhere": Somewhere}[tag]
        return cls(children[0], **flags)
    if tag == "fix":
        _known_attributes(elem, {"var"}, path)
        exactly(1)
        return Fix(_required(elem, "var", path), children[0], **flags)
    if tag == "var":
        _known_attributes(elem, {"name"}, path)
        exactly(0)
        return StratVar(_required(elem, "name", path), **flags)
    if tag == "rule":
        _known_attributes(elem, {"name"}, path)
        exactly(0)
        return RuleAtom(_required(elem, "name", path), **flags)
    if tag == "strategy":
        _known_attributes(elem, {"name"}, path)
        exactly(0)
        return StrategyRef(_required(elem, "name", path), **flags)
    if tag == "fail":
        exactly(0)
        return Fail(**flags)
    exactly(0)
    return Succeed(**flags)


def _root(text: str) -> ET.Element:
    try:
        return ET.fromstring(text)
    except ET.ParseError as err:
        raise XmlError(f"not well-formed: {err}") from None


def parse_strategy(text: str) -> Strategy:
    root = _root(text)
    return _parse_node(root, f"/{root.tag}")


def resolve_refs(
    node: Strategy, catalog: dict[str, Strategy], _seen: frozenset[str] = frozenset()
) -> Strategy:
    """Substitute named strategies for their references, recursively."""
    if isinstance(node, StrategyRef):
        if node.name in _seen:
            raise XmlError(f"strategy reference cycle through {node.name!r}")
        target = catalog.get(node.name)
        if target is None:
            raise XmlError(f"unknown strategy: {node.name}")
        return resolve_refs(target, catalog, _seen | {node.name})
    parts = child_strategies(node)
    if not parts:
        return node
    return with_children(
        node, tuple(resolve_refs(c, catalog, _seen) for c in parts)
    )


def parse_configured_strategy(
    text: str,
    catalog: dict[str, Strategy] | None = None,
    expansions: dict[str, Strategy] | None = None,
) -> Strategy:
    """Parse a strategy document whose outer elements may be transformation
    tags; transformations are applied innermost-first while parsing."""

    def walk(elem: ET.Element, path: str) -> Strategy:
        op_type = _TRANSFORM_TAGS.get(elem.tag)
        if op_type is None:
            parsed = _parse_node(elem, path)
            if catalog is not None:
                parsed = resolve_refs(parsed, catalog)
            return parsed
        _no_text(elem, path)
        target = _required(elem, "target", path)
        if op_type is cfg.Replace:
            if len(elem) != 2:
                raise XmlError(
                    f"replace needs a replacement and a strategy child at {path}"
                )
            replacement = _parse_node(elem[0], _child_path(path, elem[0], 0))
            if catalog is not None:
                replacement = resolve_refs(replacement, catalog)
            inner = walk(elem[1], _child_path(path, elem[1], 1))
            op: cfg.Transformation = cfg.Replace(target, replacement)
        else:
            if len(elem) != 1:
                raise XmlError(f"{elem.tag} needs exactly one strategy child at {path}")
            inner = walk(elem[0], _child_path(path, elem[0], 0))
            op = op_type(target)
        return cfg.apply_transformation(inner, op, expansions)

    root = _root(text)
    return walk(root, f"/{root.tag}")


def parse_configuration(text: str) -> cfg.Configuration:
    """Parse a <configuration> document: a list of transformations to apply
    to an exercise's own strategy."""
    root = _root(text)
    if root.tag != "configuration":
        raise XmlError(f"expected <configuration>, got <{root.tag}>")
    _no_text(root, "")
    out: list[cfg.Transformation] = []
    for i, elem in enumerate(root):
        path = _child_path("", elem, i)
        op_type = _TRANSFORM_TAGS.get(elem.tag)
        if op_type is None:
            raise XmlError(f"unknown transformation <{elem.tag}> at {path}")
        target = _required(elem, "target", path)
        if op_type is cfg.Replace:
            if len(elem) != 1:
                raise XmlError(f"replace needs one replacement child at {path}")
            replacement = _parse_node(elem[0], _child_path(path, elem[0], 0))
            out.append(cfg.Replace(target, replacement))
        else:
            if len(elem):
                raise XmlError(f"{elem.tag} takes no children here at {path}")
            out.append(op_type(target))
    return tuple(out)


# --- rewrite rules over the wire ---------------------------------------------


def parse_rule(text: str) -> PatternRule:
    from .syntax import ParseError, parse

    root = _root(text)
    if root.tag != "rule":
        raise XmlError(f"expected <rule>, got <{root.tag}>")
    name = _required(root, "name", "")
    kind = root.get("kind", "sound")
    if kind not in ("sound", "buggy"):
        raise XmlError(f"bad rule kind {kind!r}")
    forall: tuple[str, ...] = ()
    lhs = rhs = None
    conditions: list[Condition] = []
    for i, elem in enumerate(root):
        path = _child_path("", elem, i)
        if elem.tag == "forall":
            forall = tuple(
                v.strip() for v in _required(elem, "vars", path).split(",") if v.strip()
            )
        elif elem.tag in ("lhs", "rhs"):
            try:
                side = parse((elem.text or "").strip(), allow_meta=True)
            except ParseError as err:
                raise XmlError(f"bad term in <{elem.tag}> at {path}: {err}") from None
            if elem.tag == "lhs":
                lhs = side
            else:
                rhs = side
        elif elem.tag == "condition":
            c_kind = _required(elem, "kind", path)
            if c_kind not in CONDITION_KINDS:
                raise XmlError(f"unknown condition kind {c_kind!r} at {path}")
            conditions.append(Condition(c_kind, (elem.text or "").strip()))
        else:
            raise XmlError(f"unknown element <{elem.tag}> at {path}")
    if lhs is None or rhs is None:
        raise XmlError("rule needs <lhs> and <rhs>")
    return PatternRule(
        name, forall, lhs, rhs, tuple(conditions), buggy=(kind == "buggy")
    )


def serialize_rule(rule: PatternRule) -> str:
    from .syntax import to_text

    kind = "buggy" if rule.buggy else "sound"
    lines = [f'<rule name="{_attr(rule.name)}" kind="{kind}">']
    if rule.forall:
        lines.append(f'  <forall vars="{_attr(", ".join(rule.forall))}"/>')
    lines.append(f"  <lhs>{escape(to_text(rule.lhs))}</lhs>")
    lines.append(f"  <rhs>{escape(to_text(rule.rhs))}</rhs>")
    for condition in rule.conditions:
        lines.append(
            f'  <condition kind="{_attr(condition.kind)}">'
            f"{escape(condition.var)}</condition>"
        )
    lines.append("</rule>")
    return "\n".join(lines) + "\n"


# --- views over the wire ------------------------------------------------------


def parse_view(text: str, interpreter) -> "object":
    """Views over the wire are either an exhaustive rule set or a pair of
    strategies; primitive views are referenced by name, never defined."""
    from .views import ruleset_view, strategy_pair_view

    root = _root(text)
    if root.tag != "view":
        raise XmlError(f"expected <view>, got <{root.tag}>")
    name = _required(root, "name", "")
    children = list(root)
    if len(children) == 1 and children[0].tag == "ruleset":
        rules = []
        for i, elem in enumerate(children[0]):
            path = _child_path("/ruleset", elem, i)
            if elem.tag != "rule-ref":
                raise XmlError(f"unknown element <{elem.tag}> at {path}")
            rules.append(interpreter.rule(_required(elem, "name", path)))
        return ruleset_view(name, rules)
    if (
        len(children) == 2
        and children[0].tag == "match-strategy"
        and children[1].tag == "build-strategy"
    ):
        def run_of(holder: ET.Element) -> Callable:
            if len(holder) != 1:
                raise XmlError(f"<{holder.tag}> needs one strategy child")
            strat = _parse_node(holder[0], f"/{holder.tag}")

            def run(e):
                derivation = interpreter.first_derivation(strat, e)
                return derivation.final if derivation is not None else None

            return run

        return strategy_pair_view(name, run_of(children[0]), run_of(children[1]))
    raise XmlError("view needs a <ruleset> or a match/build strategy pair")
