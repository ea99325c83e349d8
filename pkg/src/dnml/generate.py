"""Seeded random generation of model values, conditions and expressions.

Used by the randomized law checks in ``tests/`` and ``scripts/``. Labels are
drawn from small pools on purpose so that collisions (shared characters,
repeated messages, equal narratives) are frequent.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .algebra import AggregatorKind, ByCharLex, ByMeasureLex, ByPosition, Reversed
from .conditions import (
    FALSE,
    TRUE,
    And,
    Exists,
    ForAll,
    HasChar,
    HasCharRel,
    HasMeasure,
    HasPredicate,
    IsEmpty,
    MsgPairRel,
    Not,
    Or,
)
from .expr import (
    Concat,
    Constant,
    Cross,
    Dedup,
    Difference,
    EmptyInstance,
    EmptyNarrative,
    GroupAgg,
    GroupAggAcross,
    Intersect,
    OrderBy,
    Project,
    Select,
    SetUnion,
    Source,
)
from .model import DndbInstance, Message, Narrative, RelationKind, RelationStore


@dataclass
class GenConfig:
    characters: tuple[str, ...] = ("women", "black women", "white women", "stroke", "covid", "europe")
    measures: tuple[str, ...] = ("stroke deaths", "prevalence", "risk rate")
    predicates: tuple[str, ...] = ("", "compares", "higher-risk", "declining")
    max_set: int = 3
    max_narrative: int = 5
    max_instance: int = 4
    max_cond_depth: int = 2
    max_expr_depth: int = 3
    max_specs: int = 3
    relation_density: float = 0.25
    source_names: tuple[str, ...] = ("db", "other")
    seed: int = 0


@dataclass
class Generator:
    config: GenConfig = field(default_factory=GenConfig)
    rng: random.Random | None = None

    def __post_init__(self):
        if self.rng is None:
            self.rng = random.Random(self.config.seed)

    # -- model values --

    def subset(self, pool):
        return frozenset(self.rng.sample(pool, self.rng.randint(0, min(self.config.max_set, len(pool)))))

    def message(self) -> Message:
        c = self.config
        if self.rng.random() < 0.1:
            return Message()
        return Message(self.subset(c.characters), self.subset(c.measures),
                       self.rng.choice(c.predicates))

    def messages(self, max_len=None) -> list[Message]:
        n = self.rng.randint(0, self.config.max_narrative if max_len is None else max_len)
        # reuse earlier draws so duplicates inside a narrative are common
        out = []
        for _ in range(n):
            out.append(self.rng.choice(out) if out and self.rng.random() < 0.3 else self.message())
        return out

    def narrative(self, name="n") -> Narrative:
        return Narrative.of(name, self.messages())

    def instance(self, prefix="n") -> DndbInstance:
        k = self.rng.randint(0, self.config.max_instance)
        return DndbInstance(self.narrative(f"{prefix}{i}") for i in range(1, k + 1))

    def store(self) -> RelationStore:
        chars = list(self.config.characters)
        order = self.rng.sample(chars, len(chars))
        d = self.config.relation_density
        base = {kind: [] for kind in RelationKind}
        for i, a in enumerate(order):
            for j, b in enumerate(order):
                if i < j and self.rng.random() < d:
                    base[RelationKind.SPECIALIZATION].append((a, b))
                for kind in (RelationKind.SPATIAL, RelationKind.TEMPORAL, RelationKind.SIMILARITY):
                    if self.rng.random() < d / 2:
                        base[kind].append((a, b))
        return RelationStore(base)

    # -- conditions --

    def msg_condition(self, depth=None):
        depth = self.config.max_cond_depth if depth is None else depth
        r = self.rng
        if depth > 0 and r.random() < 0.4:
            pick = r.randrange(3)
            if pick == 0:
                return And(self.msg_condition(depth - 1), self.msg_condition(depth - 1))
            if pick == 1:
                return Or(self.msg_condition(depth - 1), self.msg_condition(depth - 1))
            return Not(self.msg_condition(depth - 1))
        pick = r.randrange(7)
        c = self.config
        if pick == 0:
            return HasChar(r.choice(c.characters))
        if pick == 1:
            return HasMeasure(r.choice(c.measures))
        if pick == 2:
            return HasPredicate(r.choice(c.predicates))
        if pick == 3:
            return HasCharRel(r.choice(list(RelationKind)), r.choice(c.characters),
                              converse=r.random() < 0.5)
        if pick == 4:
            return IsEmpty()
        return TRUE if pick == 5 else FALSE

    def dn_condition(self, depth=None):
        depth = self.config.max_cond_depth if depth is None else depth
        r = self.rng
        if depth > 0 and r.random() < 0.4:
            pick = r.randrange(3)
            if pick == 0:
                return And(self.dn_condition(depth - 1), self.dn_condition(depth - 1))
            if pick == 1:
                return Or(self.dn_condition(depth - 1), self.dn_condition(depth - 1))
            return Not(self.dn_condition(depth - 1))
        pick = r.randrange(5)
        if pick == 0:
            return Exists(self.msg_condition(depth))
        if pick == 1:
            return ForAll(self.msg_condition(depth))
        if pick == 2:
            return MsgPairRel(r.choice(list(RelationKind)))
        return TRUE if pick == 3 else FALSE

    def sorter(self, depth=2):
        pick = self.rng.randrange(4 if depth else 3)
        if pick == 3:
            return Reversed(self.sorter(depth - 1))
        return (ByCharLex, ByMeasureLex, ByPosition)[pick]()

    def agg_specs(self):
        return tuple(
            (self.msg_condition(1), self.rng.choice(list(AggregatorKind)))
            for _ in range(self.rng.randint(1, self.config.max_specs))
        )

    def sort_specs(self):
        return tuple(
            (self.msg_condition(1), self.sorter())
            for _ in range(self.rng.randint(1, self.config.max_specs))
        )

    # -- expressions --

    def expr(self, depth=None):
        depth = self.config.max_expr_depth if depth is None else depth
        r = self.rng
        if depth <= 0 or r.random() < 0.2:
            pick = r.randrange(10)
            if pick < 6:
                return Source(r.choice(self.config.source_names))
            if pick < 8:
                return Constant(self.message())
            return EmptyNarrative() if pick == 8 else EmptyInstance()
        sub = depth - 1
        pick = r.randrange(15)
        if pick == 0:
            return Select(self.dn_condition(), self.expr(sub))
        if pick == 1:
            # nested selections so the cascade rule has something to do
            return Select(self.dn_condition(1), Select(self.dn_condition(1), self.expr(sub)))
        if pick == 2:
            return Project(self.msg_condition(), self.expr(sub))
        if pick == 3:
            return Dedup(self.expr(sub) if r.random() < 0.5 else Dedup(self.expr(sub)))
        if pick == 4:
            return GroupAgg(self.agg_specs(), self.expr(sub))
        if pick == 5:
            return GroupAggAcross(self.agg_specs(), self.expr(sub))
        if pick == 6:
            return OrderBy(self.sort_specs(), self.expr(sub))
        if pick == 7:
            return Concat(self.expr(sub))
        if pick == 8:
            return Cross(self.expr(sub), self.expr(sub))
        if pick == 9:
            lit = EmptyNarrative() if r.random() < 0.5 else EmptyInstance()
            inner = self.expr(sub)
            return Cross(inner, lit) if r.random() < 0.5 else Cross(lit, inner)
        if pick == 10:
            e = self.expr(sub)
            return SetUnion(e, e) if r.random() < 0.5 else SetUnion(e, self.expr(sub))
        if pick == 11:
            return Intersect(self.expr(sub), self.expr(sub))
        if pick == 12:
            return Difference(self.expr(sub), self.expr(sub))
        if pick == 13:
            return Select(TRUE, self.expr(sub))
        return Concat(Cross(self.expr(sub), self.expr(sub)))
