"""Derived operations (join, roll-up, drill-down, compare) as expansions into core operators.

Expansion is purely syntactic: the evaluator and the rewriter never see a
macro node.
"""

from __future__ import annotations

from typing import Iterable

from .algebra import AggregatorKind
from .conditions import (
    IsEmpty,
    Exists,
    HasChar,
    HasCharRel,
    Not,
    Or,
    all_of,
)
from .errors import ModelError
from .expr import AlgebraExpr, Cross, GroupAgg, GroupAggAcross, Project, Select
from .model import RelationKind, canonical_label

MERGE, CHECK, DROP = AggregatorKind.UNION_MERGE, AggregatorKind.CHECK, AggregatorKind.DROP


def _labels(chars: Iterable[str], what: str) -> list[str]:
    if isinstance(chars, str):
        chars = [chars]
    out = sorted({canonical_label(c) for c in chars})
    if not out or "" in out:
        raise ModelError(f"{what} needs at least one non-empty character")
    return out


def _keep_and_drop(phi, keep: AggregatorKind):
    return ((phi, keep), (Not(phi), DROP))


def drop_empty_messages(e: AlgebraExpr) -> AlgebraExpr:
    return Project(Not(IsEmpty()), e)


def has_all(chars: Iterable[str]):
    return all_of(*(HasChar(c) for c in chars))


def expand_compare(chars: Iterable[str], source: AlgebraExpr) -> AlgebraExpr:
    """Merge contradictory messages about ``chars`` across all selected narratives."""
    phi = has_all(_labels(chars, "compare"))
    selected = Select(Exists(phi), source)
    checked = GroupAggAcross(_keep_and_drop(phi, CHECK), selected)
    return drop_empty_messages(checked)


def _hierarchy_walk(c: str, source: AlgebraExpr, converse: bool) -> AlgebraExpr:
    c = _labels([c], "roll-up/drill-down")[0]
    related = HasCharRel(RelationKind.SPECIALIZATION, c, converse=converse)
    with_c = Select(Exists(HasChar(c)), source)
    with_related = Select(Exists(related), source)
    phi = Or(HasChar(c), related)
    merged = GroupAgg(_keep_and_drop(phi, MERGE), Cross(with_c, with_related))
    return drop_empty_messages(merged)


def expand_rollup(c: str, source: AlgebraExpr) -> AlgebraExpr:
    """Merge messages about ``c`` with messages about characters more general than ``c``."""
    return _hierarchy_walk(c, source, converse=True)


def expand_drilldown(c: str, source: AlgebraExpr) -> AlgebraExpr:
    """Mirror of roll-up: merge with messages about characters more specific than ``c``."""
    return _hierarchy_walk(c, source, converse=False)


def expand_join(shared: Iterable[str], left: AlgebraExpr, right: AlgebraExpr) -> AlgebraExpr:
    """Connect narratives through messages mentioning every shared character."""
    phi = has_all(_labels(shared, "join"))
    pairs = Cross(Select(Exists(phi), left), Select(Exists(phi), right))
    return drop_empty_messages(GroupAgg(_keep_and_drop(phi, MERGE), pairs))
