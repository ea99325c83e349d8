"""JSON persistence for DNDBs and query results.

A database document looks like::

    {
      "format": 1,
      "relations": {"specialization": [["black women", "women"]], "spatial": [],
                    "temporal": [], "similarity": []},
      "narratives": [
        {"name": "n1", "length": 1,
         "messages": [{"characters": ["women"], "measures": ["risk"], "predicate": "p"}]}
      ]
    }

``length`` is optional; when present it must match the message count.
Result documents use the same ``narratives`` layout and load back as databases.
"""

from __future__ import annotations

import json
import warnings
from importlib import resources
from pathlib import Path
from typing import Any

from .errors import DatabaseFormatError, DuplicateNarrativeWarning, ModelError, SpecializationCycleError
from .expr import Environment
from .model import (
    DndbInstance,
    Message,
    Narrative,
    NarrativeSchema,
    RelationKind,
    RelationStore,
    canonical_label,
    validate_instance,
)
from .syntax import IDENT_RE

FORMAT_VERSION = 1
_ROOT_KEYS = {"format", "relations", "narratives", "query", "plan"}
_NARRATIVE_KEYS = {"name", "length", "messages"}
_MESSAGE_KEYS = {"characters", "measures", "predicate"}


def _fail(path, message):
    raise DatabaseFormatError(path, message)


def _expect(value, kind, path, what):
    if not isinstance(value, kind) or (kind is int and isinstance(value, bool)):
        _fail(path, f"expected {what}, got {type(value).__name__}")
    return value


def _check_keys(obj: dict, allowed, path):
    extra = sorted(set(obj) - allowed)
    if extra:
        _fail(f"{path}.{extra[0]}", "unknown field")


def _labels(value, path, what) -> frozenset[str]:
    _expect(value, list, path, f"a list of {what} labels")
    out = set()
    for j, raw in enumerate(value):
        _expect(raw, str, f"{path}[{j}]", "a string")
        label = canonical_label(raw)
        if not label:
            _fail(f"{path}[{j}]", f"{what} label is empty")
        out.add(label)
    return frozenset(out)


def _message(obj, path) -> Message:
    _expect(obj, dict, path, "a message object")
    _check_keys(obj, _MESSAGE_KEYS, path)
    chars = _labels(obj.get("characters", []), f"{path}.characters", "character")
    measures = _labels(obj.get("measures", []), f"{path}.measures", "measure")
    pred = _expect(obj.get("predicate", ""), str, f"{path}.predicate", "a string")
    return Message(chars, measures, pred)


def _relations(obj, path) -> RelationStore:
    _expect(obj, dict, path, "an object")
    kinds = {k.value: k for k in RelationKind}
    _check_keys(obj, set(kinds), path)
    base = {}
    for key, kind in kinds.items():
        pairs = []
        kpath = f"{path}.{key}"
        for j, pair in enumerate(_expect(obj.get(key, []), list, kpath, "a list of pairs")):
            ppath = f"{kpath}[{j}]"
            if not isinstance(pair, list) or len(pair) != 2:
                _fail(ppath, "expected a [character, character] pair")
            a = canonical_label(_expect(pair[0], str, f"{ppath}[0]", "a string"))
            b = canonical_label(_expect(pair[1], str, f"{ppath}[1]", "a string"))
            if not a or not b:
                _fail(ppath, "character label is empty")
            pairs.append((a, b))
        base[kind] = pairs
    try:
        return RelationStore(base)
    except SpecializationCycleError as exc:
        raise DatabaseFormatError(f"{path}.specialization", str(exc)) from exc


def parse_database(doc: Any) -> tuple[DndbInstance, RelationStore]:
    """Validate a decoded JSON document and build the model values."""
    _expect(doc, dict, "$", "a JSON object")
    _check_keys(doc, _ROOT_KEYS, "$")
    if doc.get("format") != FORMAT_VERSION:
        _fail("$.format", f"expected format {FORMAT_VERSION}, got {doc.get('format')!r}")
    store = _relations(doc.get("relations", {}), "$.relations")

    narratives = []
    names: dict[str, int] = {}
    items = _expect(doc.get("narratives", []), list, "$.narratives", "a list of narratives")
    for i, item in enumerate(items):
        path = f"$.narratives[{i}]"
        _expect(item, dict, path, "a narrative object")
        _check_keys(item, _NARRATIVE_KEYS, path)
        if "name" not in item:
            _fail(f"{path}.name", "missing")
        name = _expect(item["name"], str, f"{path}.name", "a string").strip()
        if not name:
            _fail(f"{path}.name", "narrative name is empty")
        if name in names:
            _fail(f"{path}.name", f"duplicate narrative name {name!r} (first at index {names[name]})")
        names[name] = i
        raw = _expect(item.get("messages", []), list, f"{path}.messages", "a list of messages")
        messages = tuple(_message(m, f"{path}.messages[{j}]") for j, m in enumerate(raw))
        length = item.get("length", len(messages))
        _expect(length, int, f"{path}.length", "an integer")
        if length != len(messages):
            _fail(f"{path}.length", f"schema length {length} but {len(messages)} messages")
        narratives.append(Narrative(NarrativeSchema(name, length), messages))

    report = validate_instance(narratives)
    if not report.ok:
        _fail("$.narratives", "; ".join(str(v) for v in report.violations))
    for w in report.warnings:
        warnings.warn(w, DuplicateNarrativeWarning, stacklevel=3)
    return DndbInstance(narratives), store


def loads_database(text: str) -> tuple[DndbInstance, RelationStore]:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DatabaseFormatError("$", f"invalid JSON: {exc}") from exc
    return parse_database(doc)


def load_database(path) -> tuple[DndbInstance, RelationStore]:
    text = Path(path).read_text(encoding="utf-8")
    try:
        return loads_database(text)
    except ModelError as exc:
        raise DatabaseFormatError("$", str(exc)) from exc


# -- serialization -----------------------------------------------------------


def message_to_json(m: Message) -> dict:
    return {
        "characters": sorted(m.characters),
        "measures": sorted(m.measures),
        "predicate": m.predicate,
    }


def narrative_to_json(n: Narrative) -> dict:
    return {
        "name": n.name,
        "length": len(n.messages),
        "messages": [message_to_json(m) for m in n.messages],
    }


def relations_to_json(store: RelationStore) -> dict:
    return {k.value: [list(p) for p in sorted(store.base_pairs(k))] for k in RelationKind}


def dump_database(instance: DndbInstance, store: RelationStore) -> dict:
    return {
        "format": FORMAT_VERSION,
        "relations": relations_to_json(store),
        "narratives": [narrative_to_json(n) for n in instance],
    }


def to_json_text(doc: dict) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def save_database(path, instance: DndbInstance, store: RelationStore) -> None:
    Path(path).write_text(to_json_text(dump_database(instance, store)), encoding="utf-8")


# -- fixture and environments ------------------------------------------------


def fixture_path():
    return resources.files("dnml") / "data" / "fixture.json"


def load_fixture() -> tuple[DndbInstance, RelationStore]:
    return loads_database(fixture_path().read_text(encoding="utf-8"))


def environment_for(instance: DndbInstance, store: RelationStore, name: str = "db") -> Environment:
    """Bind the whole instance as ``name`` and each identifier-named narrative on its own."""
    sources = {
        n.name: DndbInstance([n]) for n in instance if IDENT_RE.fullmatch(n.name)
    }
    sources[name] = instance
    return Environment(sources, store)
