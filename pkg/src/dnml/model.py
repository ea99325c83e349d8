"""Logical data model: messages, narratives, DNDB instances and character relations.

Every value here is immutable once built. Narrative identity inside an
instance is the message tuple alone; names are display metadata.
"""

from __future__ import annotations

import enum
import re
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping

from .errors import ModelError, SpecializationCycleError

_WS = re.compile(r"\s+")

EMPTY_PREDICATE = ""


def canonical_label(text: str) -> str:
    """Trim and collapse internal whitespace. Case is preserved."""
    if not isinstance(text, str):
        raise ModelError(f"label must be text, got {type(text).__name__}")
    return _WS.sub(" ", text).strip()


def _atoms(labels: Iterable[str], what: str) -> frozenset[str]:
    if isinstance(labels, str):
        raise ModelError(f"{what} must be a collection of labels, not a single string")
    out = set()
    for raw in labels:
        label = canonical_label(raw)
        if not label:
            raise ModelError(f"{what} label {raw!r} is empty after canonicalization")
        out.add(label)
    return frozenset(out)


@dataclass(frozen=True)
class Message:
    """A ``<characters, measures, predicate>`` triple; equality is structural."""

    characters: frozenset[str] = frozenset()
    measures: frozenset[str] = frozenset()
    predicate: str = EMPTY_PREDICATE

    def __post_init__(self):
        object.__setattr__(self, "characters", _atoms(self.characters, "character"))
        object.__setattr__(self, "measures", _atoms(self.measures, "measure"))
        object.__setattr__(self, "predicate", canonical_label(self.predicate))

    @property
    def is_empty(self) -> bool:
        return not self.characters and not self.measures and not self.predicate

    @property
    def sort_key(self) -> tuple:
        return (tuple(sorted(self.characters)), tuple(sorted(self.measures)), self.predicate)

    def __repr__(self):
        if self.is_empty:
            return "Message()"
        return (
            f"Message({sorted(self.characters)!r}, {sorted(self.measures)!r}, "
            f"{self.predicate!r})"
        )


EMPTY_MESSAGE = Message()


def mk_message(characters=(), measures=(), predicate: str = EMPTY_PREDICATE) -> Message:
    return Message(frozenset(characters), frozenset(measures), predicate)


def tuple_key(messages: tuple[Message, ...]) -> tuple:
    """Canonical total order on message tuples."""
    return tuple(m.sort_key for m in messages)


def name_key(name: str) -> tuple:
    """Natural sort key: digit runs compare numerically, so ``n2 < n10``."""
    parts = re.split(r"(\d+)", name)
    return tuple(int(p) if i % 2 else p for i, p in enumerate(parts))


@dataclass(frozen=True)
class NarrativeSchema:
    name: str
    length: int


@dataclass(frozen=True)
class Narrative:
    schema: NarrativeSchema
    messages: tuple[Message, ...]

    @classmethod
    def of(cls, name: str, messages: Iterable[Message] = ()) -> "Narrative":
        messages = tuple(messages)
        return cls(NarrativeSchema(name, len(messages)), messages)

    @property
    def name(self) -> str:
        return self.schema.name

    def __len__(self):
        return len(self.messages)

    def __iter__(self) -> Iterator[Message]:
        return iter(self.messages)

    def renamed(self, name: str) -> "Narrative":
        return Narrative(NarrativeSchema(name, self.schema.length), self.messages)

    def distinct_messages(self) -> frozenset[Message]:
        return frozenset(self.messages)


def narrative_positions(n: Narrative, m: Message) -> frozenset[int]:
    """1-based positions at which ``m`` occurs in ``n``."""
    return frozenset(i for i, x in enumerate(n.messages, start=1) if x == m)


def _order_key(n: Narrative) -> tuple:
    return (name_key(n.name), tuple_key(n.messages))


class DndbInstance:
    """A finite set of narratives, keyed by message tuple.

    When two narratives carry the same tuple the one whose name sorts first
    is kept. Iteration is by ascending name, ties broken by tuple order.
    """

    __slots__ = ("_narratives", "_tuples")

    def __init__(self, narratives: Iterable[Narrative] = ()):
        kept: dict[tuple[Message, ...], Narrative] = {}
        for n in sorted(narratives, key=_order_key):
            kept.setdefault(n.messages, n)
        self._narratives = tuple(sorted(kept.values(), key=_order_key))
        self._tuples = frozenset(kept)

    @property
    def narratives(self) -> tuple[Narrative, ...]:
        return self._narratives

    def tuples(self) -> frozenset[tuple[Message, ...]]:
        return self._tuples

    def __iter__(self) -> Iterator[Narrative]:
        return iter(self._narratives)

    def __len__(self):
        return len(self._narratives)

    def __contains__(self, item):
        if isinstance(item, Narrative):
            item = item.messages
        return item in self._tuples

    def __eq__(self, other):
        if not isinstance(other, DndbInstance):
            return NotImplemented
        return self._tuples == other._tuples

    def __hash__(self):
        return hash(self._tuples)

    def __repr__(self):
        inner = ", ".join(f"{n.name}:{len(n)}" for n in self._narratives)
        return f"DndbInstance({{{inner}}})"

    def by_tuple_order(self) -> list[Narrative]:
        return sorted(self._narratives, key=lambda n: tuple_key(n.messages))

    def renamed(self, prefix: str) -> "DndbInstance":
        """Rename to ``<prefix><ordinal>`` with ordinals in canonical tuple order."""
        return DndbInstance(
            n.renamed(f"{prefix}{i}") for i, n in enumerate(self.by_tuple_order(), start=1)
        )


@dataclass(frozen=True)
class Violation:
    narrative: str
    position: int | None
    problem: str

    def __str__(self):
        where = self.narrative if self.position is None else f"{self.narrative}@{self.position}"
        return f"{where}: {self.problem}"


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def validate_instance(narratives: DndbInstance | Iterable[Narrative]) -> ValidationReport:
    """Check schema lengths, message well-formedness and set semantics.

    Accepts a raw iterable so that duplicate tuples can still be reported
    before they are collapsed.
    """
    report = ValidationReport()
    seen: dict[tuple[Message, ...], str] = {}
    for n in narratives:
        k, actual = n.schema.length, len(n.messages)
        if k != actual:
            report.violations.append(
                Violation(n.name, min(k, actual) + 1,
                          f"schema length {k} does not match {actual} messages")
            )
        for pos, m in enumerate(n.messages, start=1):
            if not isinstance(m, Message):
                report.violations.append(Violation(n.name, pos, "not a message"))
            elif "" in m.characters or "" in m.measures:
                report.violations.append(Violation(n.name, pos, "empty atom label"))
        if n.messages in seen:
            report.warnings.append(
                f"{n.name}: same message tuple as {seen[n.messages]}; collapsed into one"
            )
        else:
            seen[n.messages] = n.name
    return report


class RelationKind(enum.Enum):
    SPECIALIZATION = "specialization"
    SPATIAL = "spatial"
    TEMPORAL = "temporal"
    SIMILARITY = "similarity"

    @property
    def keyword(self) -> str:
        return _KEYWORDS[self]

    @property
    def symbol(self) -> str:
        return _SYMBOLS[self]

    @classmethod
    def from_keyword(cls, word: str) -> "RelationKind":
        return _BY_KEYWORD[word.lower()]


_KEYWORDS = {
    RelationKind.SPECIALIZATION: "spec",
    RelationKind.SPATIAL: "spatial",
    RelationKind.TEMPORAL: "temporal",
    RelationKind.SIMILARITY: "sim",
}
_BY_KEYWORD = {v: k for k, v in _KEYWORDS.items()}
_SYMBOLS = {
    RelationKind.SPECIALIZATION: "≺",
    RelationKind.SPATIAL: "⊢",
    RelationKind.TEMPORAL: "⊣",
    RelationKind.SIMILARITY: "≈",
}

Pair = tuple[str, str]


def transitive_closure(pairs: Iterable[Pair]) -> frozenset[Pair]:
    succ: dict[str, set[str]] = defaultdict(set)
    for a, b in pairs:
        succ[a].add(b)
    closure = set()
    for start in list(succ):
        stack = list(succ[start])
        reached = set()
        while stack:
            node = stack.pop()
            if node in reached:
                continue
            reached.add(node)
            stack.extend(succ.get(node, ()))
        closure.update((start, r) for r in reached)
    return frozenset(closure)


class RelationStore:
    """The four character relations with their derived views.

    Specialization is transitively closed and must be acyclic; similarity is
    symmetrically closed; spatial and temporal are taken as given.
    """

    __slots__ = ("_base", "_derived")

    def __init__(self, base: Mapping[RelationKind, Iterable[Pair]] | None = None):
        base = base or {}
        canon = {}
        for kind in RelationKind:
            pairs = set()
            for a, b in base.get(kind, ()):
                ca, cb = canonical_label(a), canonical_label(b)
                if not ca or not cb:
                    raise ModelError(f"{kind.value} pair ({a!r}, {b!r}) has an empty label")
                pairs.add((ca, cb))
            canon[kind] = frozenset(pairs)
        self._base = canon

        spec = transitive_closure(canon[RelationKind.SPECIALIZATION])
        looped = {x for x, y in spec if x == y}
        if looped:
            raise SpecializationCycleError(
                (a, b) for a, b in canon[RelationKind.SPECIALIZATION]
                if a == b or (b, a) in spec
            )
        sim = canon[RelationKind.SIMILARITY]
        self._derived = {
            RelationKind.SPECIALIZATION: spec,
            RelationKind.SPATIAL: canon[RelationKind.SPATIAL],
            RelationKind.TEMPORAL: canon[RelationKind.TEMPORAL],
            RelationKind.SIMILARITY: sim | {(b, a) for a, b in sim},
        }

    def base_pairs(self, kind: RelationKind) -> frozenset[Pair]:
        return self._base[kind]

    def derived(self, kind: RelationKind) -> frozenset[Pair]:
        return self._derived[kind]

    def related(self, c: str, c2: str, kind: RelationKind) -> bool:
        return (c, c2) in self._derived[kind]

    def __eq__(self, other):
        if not isinstance(other, RelationStore):
            return NotImplemented
        return self._base == other._base

    def __hash__(self):
        return hash(tuple(self._base[k] for k in RelationKind))

    def __repr__(self):
        sizes = ", ".join(f"{k.value}={len(v)}" for k, v in self._base.items())
        return f"RelationStore({sizes})"


EMPTY_STORE = RelationStore()


def char_related(c: str, c2: str, kind: RelationKind, store: RelationStore) -> bool:
    return store.related(canonical_label(c), canonical_label(c2), kind)


def msg_related(m: Message, m2: Message, kind: RelationKind, store: RelationStore) -> bool:
    """Existential lifting: some character of ``m`` relates to some character of ``m2``."""
    view = store.derived(kind)
    return any((c, c2) in view for c in m.characters for c2 in m2.characters)
