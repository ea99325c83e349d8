"""DNML operators: total functions from DNDB instances to DNDB instances.

Naming of output narratives (names only matter for the iteration order used
by concatenation and cross product):

* selection and the set operators keep input narratives as they are;
* per-narrative rewrites (projection, dedup, group-aggregate, order-by) keep
  the source narrative's name;
* cross product names ``a*b``; an empty side contributes nothing, and the
  unnamed ``{<>}`` literal is therefore neutral names included;
* concatenation joins names with ``+``; constants are ``const`` and the
  across-aggregate is ``across``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence, Union

from .conditions import DnCondition, MsgCondition, eval_dn_condition, eval_msg_condition
from .model import (
    EMPTY_MESSAGE,
    EMPTY_STORE,
    DndbInstance,
    Message,
    Narrative,
    RelationStore,
)

EMPTY_INSTANCE = DndbInstance()
# the literal {<>} is unnamed so that crossing with it never changes a name
EMPTY_NARRATIVE_INSTANCE = DndbInstance([Narrative.of("")])


# -- aggregators ------------------------------------------------------------


class AggregatorKind(enum.Enum):
    UNION_MERGE = "unionMerge"
    CHECK = "check"
    DROP = "drop"
    FIRST = "first"


def merged_predicate(predicates: Iterable[str]) -> str:
    distinct = sorted(set(predicates))
    if len(distinct) == 1:
        return distinct[0]
    return "merged(" + ", ".join(distinct) + ")"


def union_merge(ms: Iterable[Message]) -> Message:
    ms = list(ms)
    if not ms:
        return EMPTY_MESSAGE
    return Message(
        frozenset().union(*(m.characters for m in ms)),
        frozenset().union(*(m.measures for m in ms)),
        merged_predicate(m.predicate for m in ms),
    )


def contradictory(a: Message, b: Message) -> bool:
    """Same characters and measures, different predicate."""
    return (
        a.characters == b.characters
        and a.measures == b.measures
        and a.predicate != b.predicate
    )


def is_contradictory(ms: Iterable[Message]) -> bool:
    return any(contradictory(a, b) for a, b in combinations(set(ms), 2))


def apply_aggregator(kind: AggregatorKind, ms: Sequence[Message]) -> Message:
    """Collapse a group to one message. ``ms`` is in source order; repeats are ignored."""
    ms = list(dict.fromkeys(ms))
    if not ms:
        return EMPTY_MESSAGE
    if kind is AggregatorKind.UNION_MERGE:
        return union_merge(ms)
    if kind is AggregatorKind.CHECK:
        return union_merge(ms) if is_contradictory(ms) else EMPTY_MESSAGE
    if kind is AggregatorKind.DROP:
        return EMPTY_MESSAGE
    if kind is AggregatorKind.FIRST:
        return ms[0]
    raise ValueError(f"unknown aggregator {kind!r}")


# -- sorters ----------------------------------------------------------------


@dataclass(frozen=True)
class ByCharLex:
    pass


@dataclass(frozen=True)
class ByMeasureLex:
    pass


@dataclass(frozen=True)
class ByPosition:
    pass


@dataclass(frozen=True)
class Reversed:
    inner: "SorterKind"


SorterKind = Union[ByCharLex, ByMeasureLex, ByPosition, Reversed]

Occurrence = tuple[int, Message]


def _char_key(occ: Occurrence):
    pos, m = occ
    return (min(m.characters, default=""), tuple(sorted(m.measures)), pos)


def _measure_key(occ: Occurrence):
    pos, m = occ
    return (min(m.measures, default=""), tuple(sorted(m.characters)), pos)


def apply_sorter(sorter: SorterKind, occurrences: Sequence[Occurrence]) -> tuple[Message, ...]:
    """Order selected ``(position, message)`` occurrences; each appears exactly once."""
    if isinstance(sorter, Reversed):
        return tuple(reversed(apply_sorter(sorter.inner, occurrences)))
    if isinstance(sorter, ByPosition):
        ordered = sorted(occurrences, key=lambda o: o[0])
    elif isinstance(sorter, ByCharLex):
        ordered = sorted(occurrences, key=_char_key)
    elif isinstance(sorter, ByMeasureLex):
        ordered = sorted(occurrences, key=_measure_key)
    else:
        raise ValueError(f"unknown sorter {sorter!r}")
    return tuple(m for _, m in ordered)


# -- operators --------------------------------------------------------------


def op_constant(m: Message) -> DndbInstance:
    return DndbInstance([Narrative.of("const", [m])])


def op_select(phi: DnCondition, i: DndbInstance, store: RelationStore = EMPTY_STORE) -> DndbInstance:
    return DndbInstance(n for n in i if eval_dn_condition(phi, n, store))


def op_project(phi: MsgCondition, i: DndbInstance, store: RelationStore = EMPTY_STORE) -> DndbInstance:
    return DndbInstance(
        Narrative.of(n.name, [m for m in n if eval_msg_condition(phi, m, store)]) for n in i
    )


def dedup_narrative(n: Narrative) -> Narrative:
    return Narrative.of(n.name, dict.fromkeys(n.messages))


def op_dedup(i: DndbInstance) -> DndbInstance:
    return DndbInstance(dedup_narrative(n) for n in i)


def _check_specs(specs):
    if not specs:
        raise ValueError("at least one (condition, function) spec is required")


def _aggregate_row(specs, messages: Sequence[Message], store) -> list[Message]:
    return [
        apply_aggregator(agg, [m for m in messages if eval_msg_condition(phi, m, store)])
        for phi, agg in specs
    ]


def op_group_aggregate(
    specs: Sequence[tuple[MsgCondition, AggregatorKind]],
    i: DndbInstance,
    store: RelationStore = EMPTY_STORE,
) -> DndbInstance:
    _check_specs(specs)
    return DndbInstance(
        Narrative.of(n.name, _aggregate_row(specs, dedup_narrative(n).messages, store))
        for n in i
    )


def op_group_aggregate_across(
    specs: Sequence[tuple[MsgCondition, AggregatorKind]],
    i: DndbInstance,
    store: RelationStore = EMPTY_STORE,
) -> DndbInstance:
    """Pool the distinct messages of every narrative, then aggregate once."""
    _check_specs(specs)
    pool = dict.fromkeys(m for n in i for m in n)
    return DndbInstance([Narrative.of("across", _aggregate_row(specs, list(pool), store))])


def op_order_by(
    specs: Sequence[tuple[MsgCondition, SorterKind]],
    i: DndbInstance,
    store: RelationStore = EMPTY_STORE,
) -> DndbInstance:
    _check_specs(specs)
    out = []
    for n in i:
        occurrences = list(enumerate(n.messages, start=1))
        row: list[Message] = []
        for phi, sorter in specs:
            picked = [o for o in occurrences if eval_msg_condition(phi, o[1], store)]
            row.extend(apply_sorter(sorter, picked))
        out.append(Narrative.of(n.name, row))
    return DndbInstance(out)


def op_concat(i: DndbInstance) -> DndbInstance:
    if not len(i):
        return DndbInstance([Narrative.of("concat")])
    return DndbInstance([
        Narrative.of("+".join(n.name for n in i), [m for n in i for m in n])
    ])


def _cross_name(a: Narrative, b: Narrative) -> str:
    parts = [x.name for x in (a, b) if x.messages]
    if parts:
        return "*".join(parts)
    return a.name or b.name


def op_cross(i1: DndbInstance, i2: DndbInstance) -> DndbInstance:
    """Pairwise narrative concatenation ``{n1 ++ n2}``."""
    return DndbInstance(
        Narrative.of(_cross_name(a, b), a.messages + b.messages) for a in i1 for b in i2
    )


def op_union(i1: DndbInstance, i2: DndbInstance) -> DndbInstance:
    return DndbInstance([*i1, *i2])


def op_intersect(i1: DndbInstance, i2: DndbInstance) -> DndbInstance:
    common = i1.tuples() & i2.tuples()
    return DndbInstance(n for n in [*i1, *i2] if n.messages in common)


def op_difference(i1: DndbInstance, i2: DndbInstance) -> DndbInstance:
    return DndbInstance(n for n in i1 if n.messages not in i2.tuples())
