"""Algebra expression trees and their bottom-up evaluation."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterator, Mapping, Union

from . import algebra as alg
from .algebra import AggregatorKind, SorterKind
from .conditions import DnCondition, MsgCondition
from .errors import EvaluationError, UnboundSourceError
from .model import EMPTY_STORE, DndbInstance, Message, RelationStore


@dataclass(frozen=True)
class Constant:
    message: Message


@dataclass(frozen=True)
class Source:
    name: str


@dataclass(frozen=True)
class EmptyInstance:
    """The literal empty set of narratives."""


@dataclass(frozen=True)
class EmptyNarrative:
    """The literal ``{<>}``: one narrative with no messages."""


@dataclass(frozen=True)
class Select:
    condition: DnCondition
    child: "AlgebraExpr"


@dataclass(frozen=True)
class Project:
    condition: MsgCondition
    child: "AlgebraExpr"


@dataclass(frozen=True)
class Dedup:
    child: "AlgebraExpr"


@dataclass(frozen=True)
class GroupAgg:
    specs: tuple[tuple[MsgCondition, AggregatorKind], ...]
    child: "AlgebraExpr"


@dataclass(frozen=True)
class GroupAggAcross:
    specs: tuple[tuple[MsgCondition, AggregatorKind], ...]
    child: "AlgebraExpr"


@dataclass(frozen=True)
class OrderBy:
    specs: tuple[tuple[MsgCondition, SorterKind], ...]
    child: "AlgebraExpr"


@dataclass(frozen=True)
class Concat:
    child: "AlgebraExpr"


@dataclass(frozen=True)
class Cross:
    left: "AlgebraExpr"
    right: "AlgebraExpr"


@dataclass(frozen=True)
class SetUnion:
    left: "AlgebraExpr"
    right: "AlgebraExpr"


@dataclass(frozen=True)
class Intersect:
    left: "AlgebraExpr"
    right: "AlgebraExpr"


@dataclass(frozen=True)
class Difference:
    left: "AlgebraExpr"
    right: "AlgebraExpr"


Leaf = Union[Constant, Source, EmptyInstance, EmptyNarrative]
Unary = Union[Select, Project, Dedup, GroupAgg, GroupAggAcross, OrderBy, Concat]
Binary = Union[Cross, SetUnion, Intersect, Difference]
AlgebraExpr = Union[Leaf, Unary, Binary]

UNARY = (Select, Project, Dedup, GroupAgg, GroupAggAcross, OrderBy, Concat)
BINARY = (Cross, SetUnion, Intersect, Difference)


def children(e: AlgebraExpr) -> tuple[AlgebraExpr, ...]:
    if isinstance(e, UNARY):
        return (e.child,)
    if isinstance(e, BINARY):
        return (e.left, e.right)
    return ()


def with_children(e: AlgebraExpr, kids) -> AlgebraExpr:
    kids = tuple(kids)
    if isinstance(e, UNARY):
        (child,) = kids
        return e if child is e.child else replace(e, child=child)
    if isinstance(e, BINARY):
        left, right = kids
        if left is e.left and right is e.right:
            return e
        return replace(e, left=left, right=right)
    return e


def size(e: AlgebraExpr) -> int:
    return 1 + sum(size(c) for c in children(e))


def walk(e: AlgebraExpr) -> Iterator[AlgebraExpr]:
    """Pre-order traversal."""
    yield e
    for c in children(e):
        yield from walk(c)


def constant_fold(messages) -> AlgebraExpr:
    """Left fold of cross products over constants; rebuilds any narrative."""
    out: AlgebraExpr = EmptyNarrative()
    for m in messages:
        out = Constant(m) if isinstance(out, EmptyNarrative) else Cross(out, Constant(m))
    return out


@dataclass(frozen=True)
class Environment:
    sources: Mapping[str, DndbInstance] = field(default_factory=dict)
    store: RelationStore = EMPTY_STORE


def _eval(e: AlgebraExpr, env: Environment, trace) -> DndbInstance:
    store = env.store
    if isinstance(e, Source):
        try:
            out = env.sources[e.name]
        except KeyError:
            raise UnboundSourceError(e.name) from None
    elif isinstance(e, Constant):
        out = alg.op_constant(e.message)
    elif isinstance(e, EmptyInstance):
        out = alg.EMPTY_INSTANCE
    elif isinstance(e, EmptyNarrative):
        out = alg.EMPTY_NARRATIVE_INSTANCE
    elif isinstance(e, UNARY):
        i = _eval(e.child, env, trace)
        try:
            if isinstance(e, Select):
                out = alg.op_select(e.condition, i, store)
            elif isinstance(e, Project):
                out = alg.op_project(e.condition, i, store)
            elif isinstance(e, Dedup):
                out = alg.op_dedup(i)
            elif isinstance(e, GroupAgg):
                out = alg.op_group_aggregate(e.specs, i, store)
            elif isinstance(e, GroupAggAcross):
                out = alg.op_group_aggregate_across(e.specs, i, store)
            elif isinstance(e, OrderBy):
                out = alg.op_order_by(e.specs, i, store)
            else:
                out = alg.op_concat(i)
        except ValueError as exc:
            raise EvaluationError(f"{type(e).__name__}: {exc}") from exc
    elif isinstance(e, BINARY):
        a = _eval(e.left, env, trace)
        b = _eval(e.right, env, trace)
        op = {
            Cross: alg.op_cross,
            SetUnion: alg.op_union,
            Intersect: alg.op_intersect,
            Difference: alg.op_difference,
        }[type(e)]
        out = op(a, b)
    else:
        raise EvaluationError(f"not an algebra expression: {e!r}")
    if trace is not None:
        trace.append((e, out))
    return out


def evaluate(e: AlgebraExpr, env: Environment, query_id: int = 1) -> DndbInstance:
    """Evaluate and name the result ``q<query_id>#<ordinal>`` in canonical tuple order."""
    return _eval(e, env, None).renamed(f"q{query_id}#")


def evaluate_steps(e: AlgebraExpr, env: Environment) -> list[tuple[AlgebraExpr, DndbInstance]]:
    """Every sub-expression with its (unrenamed) value, in evaluation order."""
    trace: list = []
    _eval(e, env, trace)
    return trace


def node_label(e: AlgebraExpr) -> str:
    return type(e).__name__


def is_expr(obj) -> bool:
    return isinstance(obj, (Constant, Source, EmptyInstance, EmptyNarrative, *UNARY, *BINARY))

