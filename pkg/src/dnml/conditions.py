"""Condition formulas over messages and over narratives.

Message-level atoms test one message; narrative-level atoms quantify over the
messages of a narrative. ``And``/``Or``/``Not``/``Const`` are shared by both
levels; evaluating an atom at the wrong level raises ``TypeError``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .model import (
    Message,
    Narrative,
    RelationKind,
    RelationStore,
    canonical_label,
    msg_related,
)


def _label(obj, attr):
    object.__setattr__(obj, attr, canonical_label(getattr(obj, attr)))


@dataclass(frozen=True)
class Const:
    value: bool


TRUE = Const(True)
FALSE = Const(False)


@dataclass(frozen=True)
class And:
    left: "Condition"
    right: "Condition"


@dataclass(frozen=True)
class Or:
    left: "Condition"
    right: "Condition"


@dataclass(frozen=True)
class Not:
    operand: "Condition"


@dataclass(frozen=True)
class HasChar:
    character: str

    def __post_init__(self):
        _label(self, "character")


@dataclass(frozen=True)
class HasMeasure:
    measure: str

    def __post_init__(self):
        _label(self, "measure")


@dataclass(frozen=True)
class HasPredicate:
    predicate: str

    def __post_init__(self):
        _label(self, "predicate")


@dataclass(frozen=True)
class HasCharRel:
    """Some character ``x`` of the message stands in ``kind`` to ``character``.

    With ``converse=True`` the bound character sits on the left instead:
    ``character kind x``. Roll-up uses the converse of specialization to find
    characters more general than the bound one.
    """

    kind: RelationKind
    character: str
    converse: bool = False

    def __post_init__(self):
        _label(self, "character")


@dataclass(frozen=True)
class IsEmpty:
    pass


@dataclass(frozen=True)
class Exists:
    condition: "MsgCondition"


@dataclass(frozen=True)
class ForAll:
    condition: "MsgCondition"


@dataclass(frozen=True)
class MsgPairRel:
    kind: RelationKind


MsgAtom = Union[HasChar, HasMeasure, HasPredicate, HasCharRel, IsEmpty]
DnAtom = Union[Exists, ForAll, MsgPairRel]
Connective = Union[Const, And, Or, Not]
MsgCondition = Union[MsgAtom, Connective]
DnCondition = Union[DnAtom, Connective]
Condition = Union[MsgCondition, DnCondition]


def all_of(*conds):
    """Left-nested conjunction; ``TRUE`` when called with nothing."""
    if not conds:
        return TRUE
    out = conds[0]
    for c in conds[1:]:
        out = And(out, c)
    return out


def _connective(phi, ev, *args):
    if isinstance(phi, Const):
        return phi.value
    if isinstance(phi, And):
        return ev(phi.left, *args) and ev(phi.right, *args)
    if isinstance(phi, Or):
        return ev(phi.left, *args) or ev(phi.right, *args)
    if isinstance(phi, Not):
        return not ev(phi.operand, *args)
    raise TypeError(f"not a condition at this level: {phi!r}")


def eval_msg_condition(phi: MsgCondition, m: Message, store: RelationStore) -> bool:
    if isinstance(phi, HasChar):
        return phi.character in m.characters
    if isinstance(phi, HasMeasure):
        return phi.measure in m.measures
    if isinstance(phi, HasPredicate):
        return phi.predicate == m.predicate
    if isinstance(phi, HasCharRel):
        view = store.derived(phi.kind)
        if phi.converse:
            return any((phi.character, x) in view for x in m.characters)
        return any((x, phi.character) in view for x in m.characters)
    if isinstance(phi, IsEmpty):
        return m.is_empty
    return _connective(phi, eval_msg_condition, m, store)


def eval_dn_condition(phi: DnCondition, n: Narrative, store: RelationStore) -> bool:
    if isinstance(phi, Exists):
        return any(eval_msg_condition(phi.condition, m, store) for m in n.distinct_messages())
    if isinstance(phi, ForAll):
        return all(eval_msg_condition(phi.condition, m, store) for m in n.distinct_messages())
    if isinstance(phi, MsgPairRel):
        ms = n.distinct_messages()
        return any(msg_related(a, b, phi.kind, store) for a in ms for b in ms)
    return _connective(phi, eval_dn_condition, n, store)
