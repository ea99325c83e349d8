import pytest

from dnml.algebra import (
    EMPTY_INSTANCE,
    EMPTY_NARRATIVE_INSTANCE,
    AggregatorKind,
    ByCharLex,
    ByMeasureLex,
    ByPosition,
    Reversed,
    apply_aggregator,
    apply_sorter,
    op_concat,
    op_constant,
    op_cross,
    op_dedup,
    op_difference,
    op_group_aggregate,
    op_group_aggregate_across,
    op_intersect,
    op_order_by,
    op_project,
    op_select,
    op_union,
)
from dnml.conditions import FALSE, TRUE, Exists, HasChar, HasMeasure, Not, IsEmpty
from dnml.errors import EvaluationError, UnboundSourceError
from dnml.expr import (
    Dedup,
    Environment,
    GroupAgg,
    Project,
    Select,
    Source,
    evaluate,
    evaluate_steps,
)
from dnml.model import EMPTY_MESSAGE, DndbInstance, Message, Narrative, mk_message

from conftest import M, N1, N2, N3, STORE, inst

MERGE, CHECK, DROP, FIRST = (AggregatorKind.UNION_MERGE, AggregatorKind.CHECK,
                             AggregatorKind.DROP, AggregatorKind.FIRST)
BW, WW = HasChar("black women"), HasChar("white women")
E = EMPTY_MESSAGE

# A(m6, m7): both predicates are "compares" so the predicate survives
A67 = mk_message({"black women", "white women", "stroke"},
                 {"stroke deaths", "first-time stroke rate"}, "compares")
A367 = mk_message({"black women", "white women", "stroke"},
                  {"stroke deaths", "first-time stroke rate", "stroke prevalence"},
                  "merged(compares, higher-risk)")


def test_constant():
    assert op_constant(M[3]).tuples() == {(M[3],)}
    assert op_constant(E).tuples() == {(E,)}


def test_select_example(fixture_instance):
    out = op_select(Exists(HasMeasure("stroke deaths")), fixture_instance, STORE)
    assert out.tuples() == {N1, N2}
    assert sorted(n.name for n in out) == ["n1", "n2"]


def test_select_constants(fixture_instance):
    assert op_select(TRUE, fixture_instance) == fixture_instance
    assert op_select(FALSE, fixture_instance) == EMPTY_INSTANCE


def test_project_example(fixture_instance):
    out = op_project(BW, fixture_instance, STORE)
    assert out.tuples() == {(M[3],), (M[6], M[7]), ()}


def test_project_constants(fixture_instance):
    assert op_project(TRUE, fixture_instance) == fixture_instance
    assert op_project(FALSE, fixture_instance).tuples() == {()}


def test_dedup():
    a, b = M[1], M[2]
    assert op_dedup(inst((a, a, b))).tuples() == {(a, b)}
    assert op_dedup(inst((b, a, b, a))).tuples() == {(b, a)}
    assert op_dedup(inst(N1, N2)) == inst(N1, N2)
    assert op_dedup(inst(())) == inst(())


# -- aggregators ----------------------------------------------------------------


def test_union_merge_m6_m7():
    assert apply_aggregator(MERGE, [M[6], M[7]]) == A67


def test_union_merge_singleton_is_identity():
    assert apply_aggregator(MERGE, [M[3]]) == M[3]


@pytest.mark.parametrize("kind", list(AggregatorKind))
def test_aggregators_on_empty_group(kind):
    assert apply_aggregator(kind, []) == E


def test_drop():
    assert apply_aggregator(DROP, [M[1], M[2]]) == E


def test_merged_predicate_is_sorted_and_distinct():
    m = apply_aggregator(MERGE, [M[6], M[3], M[7]])
    assert m.predicate == "merged(compares, higher-risk)"


def test_check_keeps_contradictions_only():
    rising = mk_message({"women"}, {"stroke deaths"}, "rising")
    falling = mk_message({"women"}, {"stroke deaths"}, "falling")
    got = apply_aggregator(CHECK, [rising, falling])
    assert got == mk_message({"women"}, {"stroke deaths"}, "merged(falling, rising)")
    # same characters, different measures: not contradictory
    assert apply_aggregator(CHECK, [M[1], M[2]]) == E
    assert apply_aggregator(CHECK, [rising]) == E


def test_first_is_by_position():
    assert apply_aggregator(FIRST, [M[2], M[1]]) == M[2]
    assert apply_aggregator(FIRST, [M[9]]) == M[9]


# -- group-aggregate --------------------------------------------------------------


def test_group_aggregate_example(fixture_instance):
    out = op_group_aggregate([(BW, MERGE), (WW, MERGE)], fixture_instance, STORE)
    assert out.tuples() == {(M[3], E), (A67, A67), (E, E)}


def test_group_aggregate_first():
    assert op_group_aggregate([(TRUE, FIRST)], inst((M[1], M[2]))).tuples() == {(M[1],)}


def test_group_aggregate_on_empty_instance():
    assert op_group_aggregate([(TRUE, MERGE)], EMPTY_INSTANCE) == EMPTY_INSTANCE


def test_group_aggregate_keeps_length_when_groups_are_empty():
    out = op_group_aggregate([(FALSE, MERGE), (FALSE, CHECK), (FALSE, FIRST)], inst(N3))
    assert out.tuples() == {(E, E, E)}


def test_groups_are_sets():
    # a repeated message enters its group once
    out = op_group_aggregate([(TRUE, MERGE)], inst((M[1], M[1])))
    assert out.tuples() == {(M[1],)}


@pytest.mark.parametrize("op", [op_group_aggregate, op_group_aggregate_across, op_order_by])
def test_empty_spec_list_rejected(op):
    with pytest.raises(ValueError):
        op([], inst(N1))


def test_across_example(fixture_instance):
    out = op_group_aggregate_across([(BW, MERGE), (WW, MERGE)], fixture_instance, STORE)
    assert out.tuples() == {(A367, A67)}
    assert len(out) == 1


def test_across_on_empty_instance():
    out = op_group_aggregate_across([(TRUE, MERGE), (TRUE, FIRST)], EMPTY_INSTANCE)
    assert out.tuples() == {(E, E)}


def test_across_on_constant():
    out = op_group_aggregate_across([(TRUE, MERGE)], op_constant(M[4]))
    assert out.tuples() == {(M[4],)}


# -- sorters and order-by ----------------------------------------------------------


def test_sorters():
    occ = [(1, M[2]), (2, M[1])]
    assert apply_sorter(ByPosition(), occ) == (M[2], M[1])
    assert apply_sorter(Reversed(ByPosition()), occ) == (M[1], M[2])
    assert apply_sorter(ByCharLex(), [(1, M[9]), (2, M[3])]) == (M[3], M[9])


def test_char_lex_uses_smallest_label():
    # m3's smallest character "black women" < m1's "stroke"
    occ = [(1, M[1]), (2, M[3]), (3, M[4])]
    smallest = {1: "stroke", 2: "black women", 3: "stroke"}
    oracle = sorted(occ, key=lambda o: (smallest[o[0]], sorted(o[1].measures), o[0]))
    assert apply_sorter(ByCharLex(), occ) == tuple(m for _, m in oracle)


def test_measure_lex():
    occ = [(1, M[1]), (2, M[6]), (3, M[3])]
    # measures: stroke risk rate, stroke deaths, stroke prevalence
    assert apply_sorter(ByMeasureLex(), occ) == (M[6], M[3], M[1])


def test_measure_ties_break_on_characters_then_position():
    # m5 and m8 share their measure; "birth control pills" < "preeclampsia"
    occ = [(1, M[5]), (2, M[8]), (3, M[5])]
    assert apply_sorter(ByMeasureLex(), occ) == (M[8], M[5], M[5])
    assert apply_sorter(Reversed(ByMeasureLex()), occ) == (M[5], M[5], M[8])


def test_order_by_reverse():
    assert op_order_by([(TRUE, Reversed(ByPosition()))], inst((M[1], M[2]))).tuples() == {(M[2], M[1])}


def test_order_by_identity(fixture_instance):
    assert op_order_by([(TRUE, ByPosition())], fixture_instance) == fixture_instance


def test_order_by_overlap_duplicates():
    out = op_order_by([(BW, ByPosition()), (TRUE, ByPosition())], inst(N2), STORE)
    assert out.tuples() == {(M[6], M[7], M[6], M[7], M[8])}


def test_order_by_keeps_repeated_occurrences():
    out = op_order_by([(TRUE, Reversed(ByPosition()))], inst((M[1], M[2], M[1])))
    assert out.tuples() == {(M[1], M[2], M[1])}


# -- concat, cross, set operators ---------------------------------------------------


def test_concat_orders_by_name(fixture_instance):
    two = op_select(Exists(HasMeasure("stroke deaths")), fixture_instance)
    out = op_concat(two)
    assert out.tuples() == {N1 + N2}
    assert [n.name for n in out] == ["n1+n2"]


def test_concat_uses_natural_name_order():
    i = DndbInstance([Narrative.of("n10", (M[9],)), Narrative.of("n2", (M[1],))])
    assert op_concat(i).tuples() == {(M[1], M[9])}


def test_concat_singleton_and_empty():
    assert op_concat(inst(N3)) == inst(N3)
    assert op_concat(EMPTY_INSTANCE).tuples() == {()}


def test_cross_neutral_and_absorbing(fixture_instance):
    i = fixture_instance
    assert op_cross(i, EMPTY_NARRATIVE_INSTANCE) == i
    assert op_cross(EMPTY_NARRATIVE_INSTANCE, i) == i
    assert op_cross(i, EMPTY_INSTANCE) == EMPTY_INSTANCE
    assert op_cross(EMPTY_INSTANCE, i) == EMPTY_INSTANCE


def test_cross_with_empty_literal_keeps_names(fixture_instance):
    out = op_cross(fixture_instance, EMPTY_NARRATIVE_INSTANCE)
    assert [n.name for n in out] == ["n1", "n2", "n3"]


def test_cross_not_commutative():
    a, b = inst((M[1],)), inst((M[2],))
    assert op_cross(a, b).tuples() == {(M[1], M[2])}
    assert op_cross(a, b) != op_cross(b, a)


def test_cross_is_pairwise():
    left = DndbInstance([Narrative.of("n1", N1), Narrative.of("n2", N2)])
    out = op_cross(left, DndbInstance([Narrative.of("n3", N3)]))
    assert out.tuples() == {N1 + N3, N2 + N3}
    assert sorted(n.name for n in out) == ["n1*n3", "n2*n3"]


def test_set_operators():
    assert op_union(inst(N1), inst(N1)) == inst(N1)
    assert op_intersect(inst(N1, N2), inst(N2, N3)) == inst(N2)
    assert op_difference(inst(N1, N2), inst(N2)) == inst(N1)


def test_intersect_matches_tuples_not_names():
    renamed = DndbInstance([Narrative.of("other", N2)])
    assert op_intersect(inst(N1), renamed) == EMPTY_INSTANCE
    assert op_intersect(inst(N2), renamed).tuples() == {N2}


# -- evaluate -------------------------------------------------------------------------


@pytest.fixture
def env(fixture_instance):
    return Environment({"db": fixture_instance}, STORE)


def test_evaluate_select(env):
    out = evaluate(Select(Exists(HasMeasure("stroke deaths")), Source("db")), env)
    assert out.tuples() == {N1, N2}


def test_evaluate_source_and_names(env, fixture_instance):
    out = evaluate(Source("db"), env, query_id=7)
    assert out == fixture_instance
    assert sorted(n.name for n in out) == ["q7#1", "q7#2", "q7#3"]


def test_result_names_follow_tuple_order(env):
    out = evaluate(Source("db"), env)
    by_name = {n.name: n.messages for n in out}
    ordered = [by_name[f"q1#{k}"] for k in (1, 2, 3)]
    assert ordered == [n.messages for n in out.by_tuple_order()]


def test_evaluate_composition(env):
    assert evaluate(Project(FALSE, Dedup(Source("db"))), env).tuples() == {()}


def test_unbound_source(env):
    with pytest.raises(UnboundSourceError, match="nowhere"):
        evaluate(Select(TRUE, Source("nowhere")), env)


def test_empty_groupagg_is_evaluation_error(env):
    with pytest.raises(EvaluationError):
        evaluate(GroupAgg((), Source("db")), env)


def test_evaluate_steps_are_post_order(env):
    e = Project(Not(IsEmpty()), Select(TRUE, Source("db")))
    steps = evaluate_steps(e, env)
    assert [type(s).__name__ for s, _ in steps] == ["Source", "Select", "Project"]
    assert steps[-1][1] == evaluate(e, env)


def test_message_type_is_hashable_value():
    assert len({Message(), EMPTY_MESSAGE, mk_message()}) == 1
