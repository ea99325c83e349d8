"""Textual DNML: tokenizer, recursive-descent parser and the inverse renderer.

The syntax is functional, one call per operator::

    select(exists(hasMeasure("stroke deaths")), db)
    groupagg([hasChar("black women"): unionMerge, not(isEmpty): drop], db)
    rollup("black women", db)

Keywords are case-insensitive, string contents and source names are not.
Macros (join, rollup, drilldown, compare) are expanded while parsing.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from . import macros
from .algebra import (
    AggregatorKind,
    ByCharLex,
    ByMeasureLex,
    ByPosition,
    Reversed,
    SorterKind,
)
from .conditions import (
    And,
    Const,
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
from .errors import ModelError, QuerySyntaxError
from .expr import (
    AlgebraExpr,
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
from .model import Message, RelationKind

IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_PUNCT = {"(": "LPAREN", ")": "RPAREN", "[": "LBRACK", "]": "RBRACK",
          ",": "COMMA", ";": "SEMI", ":": "COLON"}
_ESCAPES = {"n": "\n", "t": "\t", "r": "\r"}


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    value: str
    line: int
    column: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    i, line, col = 0, 1, 1

    def advance(n):
        nonlocal i, line, col
        for ch in text[i:i + n]:
            if ch == "\n":
                line, col = line + 1, 1
            else:
                col += 1
        i += n

    while i < len(text):
        ch = text[i]
        if ch.isspace():
            advance(1)
        elif ch in _PUNCT:
            tokens.append(Token(_PUNCT[ch], ch, ch, line, col))
            advance(1)
        elif ch == '"':
            start_line, start_col = line, col
            j, chars = i + 1, []
            while True:
                if j >= len(text):
                    raise QuerySyntaxError("unterminated string", start_line, start_col, ['"'])
                c = text[j]
                if c == '"':
                    break
                if c == "\\":
                    if j + 1 >= len(text):
                        raise QuerySyntaxError("unterminated string", start_line, start_col, ['"'])
                    nxt = text[j + 1]
                    chars.append(_ESCAPES.get(nxt, nxt))
                    j += 2
                else:
                    chars.append(c)
                    j += 1
            raw = text[i:j + 1]
            tokens.append(Token("STRING", raw, "".join(chars), start_line, start_col))
            advance(j + 1 - i)
        else:
            m = IDENT_RE.match(text, i)
            if not m:
                raise QuerySyntaxError(f"unexpected character {ch!r}", line, col)
            tokens.append(Token("IDENT", m.group(), m.group(), line, col))
            advance(m.end() - i)
    tokens.append(Token("EOF", "", "", line, col))
    return tokens


_AGGREGATORS = {k.value.lower(): k for k in AggregatorKind}
_SORTERS = {"bycharlex": ByCharLex, "bymeasurelex": ByMeasureLex, "byposition": ByPosition}
_RELATIONS = [k.keyword for k in RelationKind]

# operator -> argument kinds; "message" is the only one separated by ";"
_OPERATORS = {
    "select": ("dncond", "expr"),
    "project": ("msgcond", "expr"),
    "dedup": ("expr",),
    "groupagg": ("aggspecs", "expr"),
    "groupaggacross": ("aggspecs", "expr"),
    "orderby": ("sortspecs", "expr"),
    "concat": ("expr",),
    "cross": ("expr", "expr"),
    "union": ("expr", "expr"),
    "intersect": ("expr", "expr"),
    "diff": ("expr", "expr"),
    "message": ("strlist", "strlist", "str"),
    "emptyset": (),
    "emptydn": (),
    "join": ("strlist", "expr", "expr"),
    "rollup": ("str", "expr"),
    "drilldown": ("str", "expr"),
    "compare": ("strlist", "expr"),
}

_MSG_ATOMS = {"haschar": ("str",), "hasmeasure": ("str",), "haspredicate": ("str",),
              "hascharrel": ("rel", "str"), "hascharrelinv": ("rel", "str")}
_DN_ATOMS = {"exists": ("msgcond",), "forall": ("msgcond",), "msgrel": ("rel",)}
_CONNECTIVES = ["and", "or", "not", "true", "false"]
_COND_DISPLAY = {
    "msgcond": ["hasChar", "hasMeasure", "hasPredicate", "hasCharRel", "hasCharRelInv",
                "isEmpty", *_CONNECTIVES],
    "dncond": ["exists", "forall", "msgrel", *_CONNECTIVES],
}


class Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.pos = 0

    # -- token helpers --

    def peek(self, offset=0) -> Token:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def next(self) -> Token:
        tok = self.peek()
        self.pos += 1
        return tok

    def error(self, message, tok=None, expected=()):
        tok = tok or self.peek()
        found = "end of input" if tok.kind == "EOF" else repr(tok.text)
        return QuerySyntaxError(f"{message}, found {found}", tok.line, tok.column, expected)

    def expect(self, kind, display):
        if self.peek().kind != kind:
            raise self.error("syntax error", expected=[display])
        return self.next()

    def keyword(self, expected) -> Token:
        tok = self.peek()
        if tok.kind != "IDENT":
            raise self.error("syntax error", expected=expected)
        return self.next()

    # -- entry --

    def parse(self) -> AlgebraExpr:
        e = self.expr()
        if self.peek().kind == "SEMI":
            self.next()
        if self.peek().kind != "EOF":
            raise self.error("unexpected trailing input", expected=["end of input"])
        return e

    def args(self, name, kinds, sep="COMMA"):
        sep_text = ";" if sep == "SEMI" else ","
        self.expect("LPAREN", "(")
        values = []
        for idx, kind in enumerate(kinds):
            if self.peek().kind == "RPAREN":
                raise self.error(
                    f"arity mismatch: {name} takes {len(kinds)} argument(s), got {idx}",
                    expected=[sep_text] if idx else [f"<{kinds[0]}>"],
                )
            if idx:
                self.expect(sep, sep_text)
            values.append(getattr(self, "p_" + kind)())
        if self.peek().kind != "RPAREN" and (not kinds or self.peek().kind in ("COMMA", "SEMI")):
            raise self.error(f"arity mismatch: {name} takes {len(kinds)} argument(s)",
                             expected=[")"])
        self.expect("RPAREN", ")")
        return values

    # -- expressions --

    def expr(self) -> AlgebraExpr:
        return self.p_expr()

    def p_expr(self) -> AlgebraExpr:
        expected = ["<source name>", *_OPERATORS]
        tok = self.keyword(expected)
        if self.peek().kind != "LPAREN":
            return Source(tok.value)
        name = tok.value.lower()
        if name not in _OPERATORS:
            raise QuerySyntaxError(f"unknown operator or macro {tok.value!r}",
                                   tok.line, tok.column, _OPERATORS)
        kinds = _OPERATORS[name]
        a = self.args(name, kinds, "SEMI" if name == "message" else "COMMA")
        try:
            return self._build(name, a)
        except ModelError as exc:
            raise QuerySyntaxError(str(exc), tok.line, tok.column) from None

    @staticmethod
    def _build(name, a) -> AlgebraExpr:
        if name == "select":
            return Select(a[0], a[1])
        if name == "project":
            return Project(a[0], a[1])
        if name == "dedup":
            return Dedup(a[0])
        if name == "groupagg":
            return GroupAgg(a[0], a[1])
        if name == "groupaggacross":
            return GroupAggAcross(a[0], a[1])
        if name == "orderby":
            return OrderBy(a[0], a[1])
        if name == "concat":
            return Concat(a[0])
        if name in ("cross", "union", "intersect", "diff"):
            node = {"cross": Cross, "union": SetUnion, "intersect": Intersect,
                    "diff": Difference}[name]
            return node(a[0], a[1])
        if name == "message":
            return Constant(Message(frozenset(a[0]), frozenset(a[1]), a[2]))
        if name == "emptyset":
            return EmptyInstance()
        if name == "emptydn":
            return EmptyNarrative()
        if name == "join":
            return macros.expand_join(a[0], a[1], a[2])
        if name == "rollup":
            return macros.expand_rollup(a[0], a[1])
        if name == "drilldown":
            return macros.expand_drilldown(a[0], a[1])
        return macros.expand_compare(a[0], a[1])

    # -- leaves --

    def p_str(self) -> str:
        return self.expect("STRING", "<string>").value

    def p_strlist(self) -> list[str]:
        self.expect("LBRACK", "[")
        out = []
        if self.peek().kind != "RBRACK":
            out.append(self.p_str())
            while self.peek().kind == "COMMA":
                self.next()
                out.append(self.p_str())
        self.expect("RBRACK", "]")
        return out

    def p_rel(self) -> RelationKind:
        tok = self.keyword(_RELATIONS)
        try:
            return RelationKind.from_keyword(tok.value)
        except KeyError:
            raise self.error("unknown relation", tok, _RELATIONS) from None

    def p_agg(self) -> AggregatorKind:
        names = [k.value for k in AggregatorKind]
        tok = self.keyword(names)
        try:
            return _AGGREGATORS[tok.value.lower()]
        except KeyError:
            raise QuerySyntaxError(f"unknown aggregator {tok.value!r}",
                                   tok.line, tok.column, names) from None

    def p_sort(self) -> SorterKind:
        names = ["byCharLex", "byMeasureLex", "byPosition", "reversed"]
        tok = self.keyword(names)
        word = tok.value.lower()
        if word == "reversed":
            (inner,) = self.args("reversed", ("sort",))
            return Reversed(inner)
        try:
            return _SORTERS[word]()
        except KeyError:
            raise QuerySyntaxError(f"unknown sorter {tok.value!r}",
                                   tok.line, tok.column, names) from None

    def _specs(self, fn_kind):
        self.expect("LBRACK", "[")
        specs = []
        while True:
            cond = self.p_msgcond()
            self.expect("COLON", ":")
            specs.append((cond, getattr(self, "p_" + fn_kind)()))
            if self.peek().kind != "COMMA":
                break
            self.next()
        self.expect("RBRACK", "]")
        return tuple(specs)

    def p_aggspecs(self):
        return self._specs("agg")

    def p_sortspecs(self):
        return self._specs("sort")

    # -- conditions --

    def p_msgcond(self):
        return self.condition(_MSG_ATOMS, "msgcond")

    def p_dncond(self):
        return self.condition(_DN_ATOMS, "dncond")

    def condition(self, atoms, level):
        tok = self.keyword(_COND_DISPLAY[level])
        word = tok.value.lower()
        if word in ("true", "false"):
            return Const(word == "true")
        if word == "isempty" and level == "msgcond":
            if self.peek().kind == "LPAREN":
                self.args("isEmpty", ())
            return IsEmpty()
        if word == "not":
            (inner,) = self.args("not", (level,))
            return Not(inner)
        if word in ("and", "or"):
            parts = self.variadic(word, level)
            node = And if word == "and" else Or
            out = parts[0]
            for p in parts[1:]:
                out = node(out, p)
            return out
        if word in atoms:
            a = self.args(word, atoms[word])
            try:
                return self._atom(word, a)
            except ModelError as exc:
                raise QuerySyntaxError(str(exc), tok.line, tok.column) from None
        where = "message" if level == "msgcond" else "narrative"
        raise QuerySyntaxError(f"unknown {where} condition {tok.value!r}",
                               tok.line, tok.column, _COND_DISPLAY[level])

    def variadic(self, name, level):
        self.expect("LPAREN", "(")
        parts = [self.condition(_MSG_ATOMS if level == "msgcond" else _DN_ATOMS, level)]
        while self.peek().kind == "COMMA":
            self.next()
            parts.append(self.condition(_MSG_ATOMS if level == "msgcond" else _DN_ATOMS, level))
        if len(parts) < 2:
            raise self.error(f"arity mismatch: {name} takes at least 2 arguments, got 1",
                             expected=[","])
        self.expect("RPAREN", ")")
        return parts

    @staticmethod
    def _atom(word, a):
        if word == "haschar":
            return HasChar(a[0])
        if word == "hasmeasure":
            return HasMeasure(a[0])
        if word == "haspredicate":
            return HasPredicate(a[0])
        if word == "hascharrel":
            return HasCharRel(a[0], a[1])
        if word == "hascharrelinv":
            return HasCharRel(a[0], a[1], converse=True)
        if word == "exists":
            return Exists(a[0])
        if word == "forall":
            return ForAll(a[0])
        return MsgPairRel(a[0])


def parse_query(text: str) -> AlgebraExpr:
    return Parser(text).parse()


def parse_condition(text: str, level: str = "msgcond"):
    p = Parser(text)
    cond = p.condition(_MSG_ATOMS if level == "msgcond" else _DN_ATOMS, level)
    if p.peek().kind != "EOF":
        raise p.error("unexpected trailing input", expected=["end of input"])
    return cond


# -- rendering ---------------------------------------------------------------


def quote(s: str) -> str:
    out = s.replace("\\", "\\\\").replace('"', '\\"')
    out = out.replace("\n", "\\n").replace("\t", "\\t").replace("\r", "\\r")
    return f'"{out}"'


def render_condition(c) -> str:
    if isinstance(c, Const):
        return "true" if c.value else "false"
    if isinstance(c, And):
        return f"and({render_condition(c.left)}, {render_condition(c.right)})"
    if isinstance(c, Or):
        return f"or({render_condition(c.left)}, {render_condition(c.right)})"
    if isinstance(c, Not):
        return f"not({render_condition(c.operand)})"
    if isinstance(c, HasChar):
        return f"hasChar({quote(c.character)})"
    if isinstance(c, HasMeasure):
        return f"hasMeasure({quote(c.measure)})"
    if isinstance(c, HasPredicate):
        return f"hasPredicate({quote(c.predicate)})"
    if isinstance(c, HasCharRel):
        fn = "hasCharRelInv" if c.converse else "hasCharRel"
        return f"{fn}({c.kind.keyword}, {quote(c.character)})"
    if isinstance(c, IsEmpty):
        return "isEmpty"
    if isinstance(c, Exists):
        return f"exists({render_condition(c.condition)})"
    if isinstance(c, ForAll):
        return f"forall({render_condition(c.condition)})"
    if isinstance(c, MsgPairRel):
        return f"msgrel({c.kind.keyword})"
    raise TypeError(f"not a condition: {c!r}")


def render_sorter(s: SorterKind) -> str:
    if isinstance(s, Reversed):
        return f"reversed({render_sorter(s.inner)})"
    return {ByCharLex: "byCharLex", ByMeasureLex: "byMeasureLex",
            ByPosition: "byPosition"}[type(s)]


def render_specs(specs) -> str:
    parts = []
    for cond, fn in specs:
        fn_text = fn.value if isinstance(fn, AggregatorKind) else render_sorter(fn)
        parts.append(f"{render_condition(cond)}: {fn_text}")
    return "[" + ", ".join(parts) + "]"


def render_message(m: Message) -> str:
    chars = ", ".join(quote(c) for c in sorted(m.characters))
    measures = ", ".join(quote(v) for v in sorted(m.measures))
    return f"message([{chars}]; [{measures}]; {quote(m.predicate)})"


_BINARY_WORDS = {Cross: "cross", SetUnion: "union", Intersect: "intersect", Difference: "diff"}


def render(e: AlgebraExpr) -> str:
    """Inverse of ``parse_query`` on core (macro-free) expressions."""
    if isinstance(e, Source):
        if not IDENT_RE.fullmatch(e.name):
            raise ValueError(f"source name {e.name!r} is not a valid identifier")
        return e.name
    if isinstance(e, Constant):
        return render_message(e.message)
    if isinstance(e, EmptyInstance):
        return "emptyset()"
    if isinstance(e, EmptyNarrative):
        return "emptydn()"
    if isinstance(e, Select):
        return f"select({render_condition(e.condition)}, {render(e.child)})"
    if isinstance(e, Project):
        return f"project({render_condition(e.condition)}, {render(e.child)})"
    if isinstance(e, Dedup):
        return f"dedup({render(e.child)})"
    if isinstance(e, GroupAgg):
        return f"groupagg({render_specs(e.specs)}, {render(e.child)})"
    if isinstance(e, GroupAggAcross):
        return f"groupaggacross({render_specs(e.specs)}, {render(e.child)})"
    if isinstance(e, OrderBy):
        return f"orderby({render_specs(e.specs)}, {render(e.child)})"
    if isinstance(e, Concat):
        return f"concat({render(e.child)})"
    word = _BINARY_WORDS.get(type(e))
    if word:
        return f"{word}({render(e.left)}, {render(e.right)})"
    raise TypeError(f"not an algebra expression: {e!r}")
