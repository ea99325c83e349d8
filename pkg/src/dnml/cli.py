"""Command-line interface: ``dnml query|repl|explain|validate``.

Exit statuses: 0 success, 1 I/O or database validation failure, 2 query error.
"""

from __future__ import annotations

import argparse
import sys
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import TextIO

from .errors import DatabaseFormatError, DnmlError, EvaluationError, ModelError, QuerySyntaxError
from .expr import AlgebraExpr, evaluate
from .model import DndbInstance, RelationKind, RelationStore, validate_instance
from .rewrite import explain_plan, rewrite
from .storage import (
    FORMAT_VERSION,
    environment_for,
    load_database,
    narrative_to_json,
    to_json_text,
)
from .syntax import parse_query, render

EXIT_OK, EXIT_IO, EXIT_QUERY = 0, 1, 2


@dataclass(frozen=True)
class ResultDocument:
    query: str
    parsed: AlgebraExpr
    rewritten: AlgebraExpr
    result: DndbInstance

    def to_dict(self) -> dict:
        return {
            "format": FORMAT_VERSION,
            "query": self.query,
            "plan": {"parsed": render(self.parsed), "rewritten": render(self.rewritten)},
            "narratives": [narrative_to_json(n) for n in self.result.by_tuple_order()],
        }

    def to_json(self) -> str:
        return to_json_text(self.to_dict())


def execute(query: str, instance: DndbInstance, store: RelationStore,
            query_id: int = 1) -> ResultDocument:
    """Parse (expanding macros), rewrite, evaluate."""
    parsed = parse_query(query)
    rewritten = rewrite(parsed)
    result = evaluate(rewritten, environment_for(instance, store), query_id)
    return ResultDocument(query, parsed, rewritten, result)


def run_query(db_path, query: str, output_path=None) -> ResultDocument:
    instance, store = load_database(db_path)
    doc = execute(query, instance, store)
    if output_path is not None:
        Path(output_path).write_text(doc.to_json(), encoding="utf-8")
    return doc


# -- table rendering ---------------------------------------------------------


def _set_text(labels) -> str:
    return "{" + ", ".join(sorted(labels)) + "}"


def render_table(instance: DndbInstance) -> str:
    """Narratives x messages as a plain-text table."""
    if not len(instance):
        return "(no narratives)"
    header = ("narrative", "#", "characters", "measures", "predicate")
    rows = []
    for n in instance.by_tuple_order():
        if not n.messages:
            rows.append((n.name, "-", "<empty narrative>", "", ""))
        for pos, m in enumerate(n.messages, start=1):
            if m.is_empty:
                rows.append((n.name, str(pos), "<empty message>", "", ""))
            else:
                rows.append((n.name, str(pos), _set_text(m.characters),
                             _set_text(m.measures), m.predicate))
    widths = [max(len(r[i]) for r in [header, *rows]) for i in range(len(header))]

    def line(r):
        return " | ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip()

    sep = "-+-".join("-" * w for w in widths)
    count = f"({len(instance)} narrative{'s' if len(instance) != 1 else ''})"
    return "\n".join([line(header), sep, *map(line, rows), count])


# -- REPL --------------------------------------------------------------------


class Repl:
    """Line-oriented shell. Commands: ``:load <path>``, ``:explain <query>``, ``:quit``."""

    prompt = "dnml> "

    def __init__(self, instance, store, stdin: TextIO = sys.stdin, stdout: TextIO = sys.stdout):
        self.instance = instance
        self.store = store
        self.stdin = stdin
        self.stdout = stdout
        self.query_id = 0

    def say(self, text=""):
        print(text, file=self.stdout)

    def run(self) -> int:
        while True:
            self.stdout.write(self.prompt)
            self.stdout.flush()
            line = self.stdin.readline()
            if not line:
                self.say()
                return EXIT_OK
            line = line.strip()
            if not line:
                continue
            if not self.handle(line):
                return EXIT_OK

    def handle(self, line: str) -> bool:
        """Run one input line; False ends the session."""
        cmd, _, arg = line.partition(" ")
        arg = arg.strip()
        try:
            if cmd in (":quit", ":q", ":exit"):
                return False
            if cmd == ":help":
                self.say("queries end at the newline; commands: :load <path>, "
                         ":explain <query>, :quit")
            elif cmd == ":load":
                self.instance, self.store = load_database(arg)
                self.say(f"loaded {len(self.instance)} narratives from {arg}")
            elif cmd == ":explain":
                self.say(explain_plan(parse_query(arg)))
            elif cmd.startswith(":"):
                self.say(f"error: unknown command {cmd}")
            else:
                self.query_id += 1
                doc = execute(line, self.instance, self.store, self.query_id)
                self.say(render_table(doc.result))
        except (DnmlError, OSError) as exc:
            self.say(f"error: {exc}")
        return True


# -- entry point -------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dnml", description="Query data narrative databases.")
    sub = p.add_subparsers(dest="command", required=True)

    q = sub.add_parser("query", help="evaluate one query and write a result document")
    q.add_argument("-d", "--db", required=True, help="database JSON file")
    q.add_argument("-q", "--query", required=True, help="query text")
    q.add_argument("-o", "--output", help="write the result document here instead of stdout")

    r = sub.add_parser("repl", help="interactive shell")
    r.add_argument("-d", "--db", required=True)

    e = sub.add_parser("explain", help="show the plan before and after rewriting")
    e.add_argument("-q", "--query", required=True)

    v = sub.add_parser("validate", help="load and validate a database file")
    v.add_argument("-d", "--db", required=True)
    return p


def _error(message) -> None:
    print(f"dnml: error: {message}", file=sys.stderr)


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "explain":
            print(explain_plan(parse_query(args.query)))
            return EXIT_OK
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            instance, store = load_database(args.db)
        for w in caught:
            print(f"dnml: warning: {w.message}", file=sys.stderr)
        if args.command == "validate":
            report = validate_instance(instance)
            for v in report.violations:
                _error(v)
            if not report.ok:
                return EXIT_IO
            print(f"ok: {len(instance)} narratives, "
                  f"{sum(len(store.base_pairs(k)) for k in RelationKind)} relation pairs")
            return EXIT_OK
        if args.command == "repl":
            return Repl(instance, store).run()
        doc = execute(args.query, instance, store)
        if args.output:
            Path(args.output).write_text(doc.to_json(), encoding="utf-8")
        else:
            sys.stdout.write(doc.to_json())
        return EXIT_OK
    except (QuerySyntaxError, EvaluationError) as exc:
        _error(exc)
        return EXIT_QUERY
    except (OSError, DatabaseFormatError, ModelError) as exc:
        _error(exc)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
