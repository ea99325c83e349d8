import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dnml.conditions import TRUE, And, Exists, HasChar, IsEmpty, Not
from dnml.expr import (
    Cross,
    Dedup,
    EmptyInstance,
    EmptyNarrative,
    Environment,
    Project,
    Select,
    SetUnion,
    Source,
    evaluate,
    size,
    walk,
)
from dnml.generate import GenConfig, Generator
from dnml.rewrite import RULES, explain_plan, render_plan, rewrite, rewrite_trace
from dnml.syntax import parse_query

S = Source("db")
PHI, PSI = Exists(HasChar("a")), Exists(HasChar("b"))


@pytest.mark.parametrize("before, after", [
    (Select(PHI, Select(PSI, S)), Select(And(PHI, PSI), S)),
    (Select(TRUE, S), S),
    (Cross(S, EmptyNarrative()), S),
    (Cross(EmptyNarrative(), S), S),
    (Cross(S, EmptyInstance()), EmptyInstance()),
    (Cross(EmptyInstance(), S), EmptyInstance()),
    (Dedup(Dedup(S)), Dedup(S)),
    (SetUnion(S, S), S),
])
def test_single_rules(before, after):
    assert rewrite(before) == after


def test_rules_compose_to_fixpoint():
    e = SetUnion(Select(TRUE, Dedup(Dedup(Dedup(S)))), Dedup(Dedup(S)))
    assert rewrite(e) == Dedup(S)


def test_cascade_of_three():
    e = Select(PHI, Select(PSI, Select(PHI, S)))
    assert rewrite(e) == Select(And(PHI, And(PSI, PHI)), S)


def test_normal_form_is_unchanged():
    e = Project(Not(IsEmpty()), Select(PHI, Cross(S, Source("other"))))
    out, fired = rewrite_trace(e)
    assert out == e and fired == []


def test_rule_names_are_unique():
    names = [r.name for r in RULES]
    assert len(names) == len(set(names)) == 6


def seeded_expr(seed):
    return Generator(GenConfig(seed=seed)).expr()


@given(st.integers(min_value=0, max_value=2**32))
def test_rewrite_reaches_fixpoint(seed):
    e = seeded_expr(seed)
    once, fired = rewrite_trace(e)
    assert rewrite(once) == once
    assert size(once) <= size(e)
    # each rule application removes at least one node
    assert len(fired) <= size(e)


@given(st.integers(min_value=0, max_value=2**32))
def test_no_redex_survives(seed):
    out = rewrite(seeded_expr(seed))
    for node in walk(out):
        assert all(rule.apply(node) is None for rule in RULES)


@settings(max_examples=200)
@given(st.integers(min_value=0, max_value=2**32))
def test_rewrite_is_sound(seed):
    g = Generator(GenConfig(seed=seed))
    e = g.expr()
    env = Environment({"db": g.instance(), "other": g.instance()}, g.store())
    assert evaluate(rewrite(e), env) == evaluate(e, env)


def test_explain_select_true():
    text = explain_plan(Select(TRUE, S))
    assert text.splitlines() == [
        "plan:",
        "  Select true",
        "    Source db",
        "rewritten: (select-true)",
        "  Source db",
    ]


def test_explain_unchanged():
    text = explain_plan(S)
    assert "rewritten: (unchanged)" in text


def test_explain_shows_macro_expansion():
    text = explain_plan(parse_query('compare(["women"], db)'))
    assert "GroupAggAcross" in text.splitlines()[2]


def test_plan_indentation():
    lines = render_plan(Dedup(Select(PHI, Project(TRUE, S)))).splitlines()
    assert [len(l) - len(l.lstrip()) for l in lines] == [0, 2, 4, 6]


def test_explain_is_deterministic():
    e = parse_query('rollup("black women", db)')
    assert explain_plan(e) == explain_plan(parse_query('rollup("black women", db)'))
