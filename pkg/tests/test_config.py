"""Configuration transformations are pure strategy-to-strategy functions;
missing targets warn and leave the input untouched.
"""

import warnings

import pytest

from eqtutor.config import (
    Collapse,
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
from eqtutor.strategy import (
    Choice,
    Interpreter,
    Label,
    OrElse,
    RuleAtom,
    Seq,
    Try,
)
from eqtutor.syntax import parse, to_text


def sample():
    return Label(
        "outer",
        Choice(
            (
                Label("left", RuleAtom("varToLeft")),
                Label("right", RuleAtom("conToRight")),
                RuleAtom("scaleToOne"),
            )
        ),
    )


def test_remove_and_reinsert_are_flag_toggles():
    removed = apply_transformation(sample(), Remove("left"))
    assert removed.child.children[0].removed
    back = apply_transformation(removed, Reinsert("left"))
    assert back == sample()


def test_remove_changes_behaviour():
    interp = Interpreter()
    term = parse("5*x + 3 = 2*x - 6")
    names = [s.name for s, _ in interp.firsts(sample(), term)]
    assert names == ["varToLeft", "conToRight"]
    removed = apply_transformation(sample(), Remove("left"))
    names = [s.name for s, _ in interp.firsts(removed, term)]
    assert names == ["conToRight"]


def test_collapse_and_expand_labels():
    collapsed = apply_transformation(sample(), Collapse("right"))
    assert collapsed.child.children[1].collapsed
    expanded = apply_transformation(collapsed, Expand("right"))
    assert expanded == sample()


def test_collapse_refuses_rule_targets():
    with pytest.warns(ConfigurationWarning, match="labeled target"):
        got = apply_transformation(sample(), Collapse("scaleToOne"))
    assert got == sample()


def test_hide_and_reveal():
    hidden = apply_transformation(sample(), Hide("scaleToOne"))
    assert hidden.child.children[2].hidden
    back = apply_transformation(hidden, Reveal("scaleToOne"))
    assert back == sample()


def test_labels_shadow_rules_with_the_same_name():
    s = Label(
        "outer",
        Choice((Label("merge", RuleAtom("varToLeft")), RuleAtom("merge"))),
    )
    got = apply_transformation(s, Remove("merge"))
    assert got.child.children[0].removed
    assert not got.child.children[1].removed


def test_must_use_prunes_competing_alternatives():
    got = apply_transformation(sample(), MustUse("right"))
    assert got.child == Choice((Label("right", RuleAtom("conToRight")),))


def test_must_use_keeps_non_competing_structure():
    s = Label("outer", Seq((RuleAtom("merge"), sample())))
    got = apply_transformation(s, MustUse("right"))
    assert got.child.children[0] == RuleAtom("merge")
    assert got.child.children[1].child == Choice(
        (Label("right", RuleAtom("conToRight")),)
    )


def test_prefer_turns_choice_into_committed_or_else():
    got = apply_transformation(sample(), Prefer("right"))
    reordered = got.child
    assert isinstance(reordered, OrElse)
    assert [type(c).__name__ for c in reordered.children] == [
        "Label",
        "Label",
        "RuleAtom",
    ]
    assert reordered.children[0].name == "right"


def test_replace_swaps_the_target_subtree():
    replacement = RuleAtom("merge")
    got = apply_transformation(sample(), Replace("left", replacement))
    assert got.child.children[0] == replacement


def test_replace_does_not_recurse_into_replacement():
    # the replacement contains the target name; it must not be rewritten
    replacement = Label("left", RuleAtom("merge"))
    got = apply_transformation(sample(), Replace("left", replacement))
    assert got.child.children[0] == replacement


def test_expand_rewrites_a_rule_by_its_refinement():
    refinement = Seq((RuleAtom("factorOutSquare"), Try(RuleAtom("mulConstants"))))
    s = Label("outer", RuleAtom("rootSimplify"))
    got = apply_transformation(s, Expand("rootSimplify"), {"rootSimplify": refinement})
    assert got.child == refinement


def test_expand_merges_flags_into_the_refinement():
    refinement = Seq((RuleAtom("factorOutSquare"),))
    s = Label("outer", RuleAtom("rootSimplify", hidden=True))
    got = apply_transformation(s, Expand("rootSimplify"), {"rootSimplify": refinement})
    assert got.child.hidden


def test_expand_without_registered_refinement_warns():
    s = Label("outer", RuleAtom("rootSimplify"))
    with pytest.warns(ConfigurationWarning, match="no expansion registered"):
        got = apply_transformation(s, Expand("rootSimplify"))
    assert got == s


@pytest.mark.parametrize(
    "op",
    [
        Remove("ghost"),
        Reinsert("ghost"),
        Collapse("ghost"),
        Expand("ghost"),
        Hide("ghost"),
        Reveal("ghost"),
        MustUse("ghost"),
        Prefer("ghost"),
        Replace("ghost", RuleAtom("merge")),
    ],
)
def test_missing_targets_warn_and_do_nothing(op):
    with pytest.warns(ConfigurationWarning, match="not found"):
        got = apply_transformation(sample(), op)
    assert got == sample()


def test_apply_configuration_folds_left():
    configuration = (Remove("left"), Hide("right"), Prefer("scaleToOne"))
    got = apply_configuration(sample(), configuration)
    assert isinstance(got.child, OrElse)
    assert got.child.children[0] == RuleAtom("scaleToOne")
    names = {
        c.name: (c.removed, c.hidden)
        for c in got.child.children
        if isinstance(c, Label)
    }
    assert names == {"left": (True, False), "right": (False, True)}


def test_configured_solve_end_to_end():
    # removing the preferred phase reroutes the whole solution
    interp = Interpreter()
    term = parse("5*x + 3 = 2*x - 6")
    strategy = sample()
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        configured = apply_configuration(strategy, (MustUse("left"),))
    d = interp.first_derivation(configured, term)
    assert [s.name for s in d.rule_steps()] == ["varToLeft"]
    assert to_text(d.final) == "3*x + 3 = -6"
