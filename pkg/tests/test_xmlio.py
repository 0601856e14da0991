"""XML wire formats: canonical serialization is byte-stable, parsing
reports the offending element path, and the two compose to the identity.
"""

from pathlib import Path

import pytest

from eqtutor.config import Collapse, Prefer, Remove, Replace, apply_transformation
from eqtutor.domains import LINEAR_STRATEGY, NAMED_STRATEGIES
from eqtutor.rules import Condition, PatternRule, rule
from eqtutor.strategy import (
    Choice,
    Fail,
    Fix,
    Interpreter,
    Label,
    RuleAtom,
    Seq,
    StrategyError,
    StrategyRef,
    StratVar,
    Succeed,
    Try,
)
from eqtutor.syntax import parse, parse_pattern, to_text
from eqtutor.views import canonical
from eqtutor.xmlio import (
    XmlError,
    parse_configuration,
    parse_configured_strategy,
    parse_rule,
    parse_strategy,
    parse_view,
    resolve_refs,
    serialize_rule,
    serialize_strategy,
)

GOLDEN = Path(__file__).parent / "golden"


# --- canonical serialization ---------------------------------------------------


def test_serialize_concise_listing():
    s = Label(
        "linear equation",
        Seq((StrategyRef("prepare equation"), StrategyRef("basic equation"))),
    )
    assert serialize_strategy(s) == (
        '<label name="linear equation">\n'
        "  <sequence>\n"
        '    <strategy name="prepare equation"/>\n'
        '    <strategy name="basic equation"/>\n'
        "  </sequence>\n"
        "</label>\n"
    )


def test_serialize_flags_in_fixed_order():
    assert serialize_strategy(RuleAtom("merge", hidden=True)) == (
        '<rule name="merge" hidden="true"/>\n'
    )
    assert serialize_strategy(RuleAtom("r", removed=True, hidden=True)) == (
        '<rule name="r" removed="true" hidden="true"/>\n'
    )
    assert serialize_strategy(Fix("s", StratVar("s"), collapsed=True)) == (
        '<fix var="s" collapsed="true">\n  <var name="s"/>\n</fix>\n'
    )


def test_serialize_escapes_attribute_values():
    text = serialize_strategy(Label("a & b", RuleAtom('say "so"')))
    assert text == (
        '<label name="a &amp; b">\n'
        '  <rule name="say &quot;so&quot;"/>\n'
        "</label>\n"
    )
    assert parse_strategy(text) == Label("a & b", RuleAtom('say "so"'))


def test_empty_sequence_round_trips():
    assert parse_strategy("<sequence/>") == Seq(())
    assert serialize_strategy(Seq(())) == "<sequence/>\n"


@pytest.mark.parametrize(
    "s",
    [
        Fail(),
        Succeed(),
        Try(RuleAtom("merge")),
        Choice((RuleAtom("merge"), Label("t", Succeed(), collapsed=True))),
        Fix("loop", Try(Seq((RuleAtom("merge"), StratVar("loop"))))),
        LINEAR_STRATEGY,
    ],
)
def test_parse_inverts_serialize(s):
    assert parse_strategy(serialize_strategy(s)) == s


@pytest.mark.parametrize("name", ["lineq-full.xml", "lineq-concise.xml"])
def test_golden_listings_are_canonical(name):
    text = (GOLDEN / name).read_text()
    assert serialize_strategy(parse_strategy(text)) == text


# --- parse errors name their element -------------------------------------------


@pytest.mark.parametrize(
    "doc, message",
    [
        ("<bogus/>", "unknown element <bogus> at /bogus"),
        (
            "<sequence><bogus/></sequence>",
            "unknown element <bogus> at /sequence/bogus[1]",
        ),
        ("<label><succeed/></label>", "missing name attribute at /label"),
        ('<label name="x"/>', "label needs 1 child element(s) at /label"),
        (
            '<rule name="merge"><succeed/></rule>',
            "rule needs 0 child element(s) at /rule",
        ),
        ('<rule name="merge" hidden="yes"/>', "bad hidden value 'yes' at /rule"),
        ('<rule name="merge" foo="1"/>', "unknown attribute 'foo' at /rule"),
        ("<sequence>hi</sequence>", "unexpected text content at /sequence"),
    ],
)
def test_parse_strategy_errors(doc, message):
    with pytest.raises(XmlError, match=None) as err:
        parse_strategy(doc)
    assert message in str(err.value)


def test_malformed_document():
    with pytest.raises(XmlError, match="not well-formed"):
        parse_strategy("<oops")


# --- reference resolution --------------------------------------------------------


def test_resolve_refs_substitutes_recursively():
    catalog = {"a": RuleAtom("merge"), "b": Seq((StrategyRef("a"),))}
    assert resolve_refs(StrategyRef("b"), catalog) == Seq((RuleAtom("merge"),))


def test_resolve_refs_detects_cycles():
    catalog = {"a": StrategyRef("b"), "b": StrategyRef("a")}
    with pytest.raises(XmlError, match="cycle"):
        resolve_refs(StrategyRef("a"), catalog)


def test_resolve_refs_requires_known_names():
    with pytest.raises(XmlError, match="unknown strategy: nowhere"):
        resolve_refs(StrategyRef("nowhere"), {})


# --- configured strategy documents ------------------------------------------------


def test_transformation_root_applies_while_parsing():
    doc = (
        '<collapse target="basic equation">\n'
        '  <strategy name="linear equation"/>\n'
        "</collapse>\n"
    )
    got = parse_configured_strategy(doc, catalog=NAMED_STRATEGIES)
    assert got == apply_transformation(LINEAR_STRATEGY, Collapse("basic equation"))
    assert got.child.children[1].collapsed


def test_transformation_without_catalog():
    doc = '<remove target="merge"><rule name="merge"/></remove>'
    assert parse_configured_strategy(doc) == RuleAtom("merge", removed=True)


def test_replace_document_takes_replacement_then_strategy():
    doc = '<replace target="a"><succeed/><rule name="a"/></replace>'
    assert parse_configured_strategy(doc) == Succeed()


def test_nested_transformations_apply_innermost_first():
    doc = (
        '<remove target="merge">\n'
        '  <collapse target="t">\n'
        '    <label name="t"><rule name="merge"/></label>\n'
        "  </collapse>\n"
        "</remove>\n"
    )
    got = parse_configured_strategy(doc)
    assert got == Label("t", RuleAtom("merge", removed=True), collapsed=True)


def test_plain_strategy_documents_still_parse():
    assert parse_configured_strategy('<rule name="merge"/>') == RuleAtom("merge")


@pytest.mark.parametrize(
    "doc, message",
    [
        ('<collapse target="t"/>', "needs exactly one strategy child"),
        ('<collapse><succeed/></collapse>', "missing target attribute"),
        ('<replace target="t"><succeed/></replace>', "needs a replacement"),
        (
            '<collapse target="t"><configuration/></collapse>',
            "unknown element <configuration> at /collapse/configuration[1]",
        ),
    ],
)
def test_configured_strategy_errors(doc, message):
    with pytest.raises(XmlError) as err:
        parse_configured_strategy(doc)
    assert message in str(err.value)


# --- configuration documents --------------------------------------------------------


def test_parse_configuration_order_preserved():
    doc = (
        "<configuration>\n"
        '  <prefer target="nice factors"/>\n'
        '  <remove target="merge"/>\n'
        "</configuration>\n"
    )
    assert parse_configuration(doc) == (Prefer("nice factors"), Remove("merge"))


def test_parse_configuration_replace_child():
    doc = (
        "<configuration>"
        '<replace target="a"><succeed/></replace>'
        "</configuration>"
    )
    assert parse_configuration(doc) == (Replace("a", Succeed()),)


@pytest.mark.parametrize(
    "doc, message",
    [
        ("<prefer target='x'/>", "expected <configuration>"),
        (
            "<configuration><solve target='x'/></configuration>",
            "unknown transformation <solve> at /solve[1]",
        ),
        (
            "<configuration><remove target='x'><succeed/></remove></configuration>",
            "takes no children",
        ),
        (
            "<configuration><replace target='x'/></configuration>",
            "needs one replacement child",
        ),
    ],
)
def test_parse_configuration_errors(doc, message):
    with pytest.raises(XmlError) as err:
        parse_configuration(doc)
    assert message in str(err.value)


# --- rules over the wire ---------------------------------------------------------


def test_serialize_rule_pins_the_format():
    assert serialize_rule(rule("productZero")) == (
        '<rule name="productZero" kind="sound">\n'
        '  <forall vars="A, B"/>\n'
        "  <lhs>?A*?B = 0</lhs>\n"
        "  <rhs>?A = 0 or ?B = 0</rhs>\n"
        "</rule>\n"
    )


def test_rule_round_trip_with_condition():
    original = PatternRule(
        "divBoth",
        forall=("A", "B", "C"),
        lhs=parse_pattern("?A*?B = ?C"),
        rhs=parse_pattern("?B = ?C/?A"),
        conditions=(Condition("nonzero", "A"),),
    )
    text = serialize_rule(original)
    assert '<condition kind="nonzero">A</condition>' in text
    assert parse_rule(text) == original


def test_parse_rule_buggy_kind():
    got = parse_rule(
        '<rule name="b" kind="buggy">'
        '<forall vars="A"/><lhs>?A + 0</lhs><rhs>?A</rhs>'
        "</rule>"
    )
    assert got.buggy


@pytest.mark.parametrize(
    "doc, message",
    [
        ("<strategy name='x'/>", "expected <rule>"),
        ('<rule name="r" kind="odd"><lhs>x</lhs><rhs>x</rhs></rule>', "bad rule kind"),
        ('<rule name="r"><lhs>x</lhs></rule>', "needs <lhs> and <rhs>"),
        ('<rule name="r"><lhs>x +</lhs><rhs>x</rhs></rule>', "bad term in <lhs>"),
        (
            '<rule name="r"><lhs>x</lhs><rhs>x</rhs>'
            '<condition kind="weird">A</condition></rule>',
            "unknown condition kind",
        ),
        (
            '<rule name="r"><lhs>x</lhs><rhs>x</rhs><extra/></rule>',
            "unknown element <extra>",
        ),
    ],
)
def test_parse_rule_errors(doc, message):
    with pytest.raises(XmlError) as err:
        parse_rule(doc)
    assert message in str(err.value)


# --- views over the wire -----------------------------------------------------------


def test_parse_ruleset_view():
    doc = (
        '<view name="adder">'
        '<ruleset><rule-ref name="calcAdd"/></ruleset>'
        "</view>"
    )
    v = parse_view(doc, Interpreter())
    assert v.name == "adder"
    assert to_text(canonical(v, parse("3 + 5 + 1"))) == "9"


def test_parse_strategy_pair_view():
    doc = (
        '<view name="foldAdds">\n'
        "  <match-strategy>\n"
        "    <repeat><somewhere><rule name=\"calcAdd\"/></somewhere></repeat>\n"
        "  </match-strategy>\n"
        "  <build-strategy>\n"
        "    <succeed/>\n"
        "  </build-strategy>\n"
        "</view>\n"
    )
    v = parse_view(doc, Interpreter())
    assert to_text(canonical(v, parse("(1 + 2) + (3 + 4)"))) == "10"


def test_parse_view_needs_a_known_shape():
    with pytest.raises(XmlError, match="expected <view>"):
        parse_view("<ruleset/>", Interpreter())
    with pytest.raises(XmlError, match="match/build strategy pair"):
        parse_view('<view name="v"><succeed/></view>', Interpreter())
    with pytest.raises(XmlError, match="unknown element <rule>"):
        parse_view(
            '<view name="v"><ruleset><rule name="merge"/></ruleset></view>',
            Interpreter(),
        )


def test_parse_view_resolves_rules_through_the_interpreter():
    doc = '<view name="v"><ruleset><rule-ref name="nope"/></ruleset></view>'
    with pytest.raises(StrategyError, match="unknown rule"):
        parse_view(doc, Interpreter())


# --- the documented composite example -----------------------------------------


def test_composite_example_is_canonical_and_lazily_resolved():
    text = (Path(__file__).parent.parent / "docs" / "composite-example.xml").read_text()
    s = parse_strategy(text)
    assert serialize_strategy(s) == text
    resolved = resolve_refs(s, NAMED_STRATEGIES)
    interp = Interpreter(strategies=NAMED_STRATEGIES)
    with pytest.raises(StrategyError, match="unknown rule: divideOutRoot"):
        interp.firsts(resolved, parse("x^3 - 2*x^2 - 8*x = 0"))
