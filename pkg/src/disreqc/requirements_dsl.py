"""Textual language for requirements documents.

A document declares one business block (activities and their contexts),
then actors, then goals:

    business "Retail" {
      activity "Sales" {
        context "In-store sales"
      }
    }

    actor strategic "Sales director"

    goal strategic g1 "Increase revenue" actor "Sales director"
      activity "Sales" context "In-store sales"

Informational goals append a formalization block:

    { verb "analyze" fact amount dimension store, month }

`#` starts a line comment.  Strings are double-quoted with backslash
escapes for `"` and `\\`.  Parsing is total: invalid input produces
located diagnostics (P001 lexical, P002 syntax, P003 duplicate
declaration), never an exception.  The emitter writes the canonical
form: business, then actors sorted by (kind, name), then goals sorted
by id, 2-space indentation, LF newlines.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from disreqc.goal_model import (
    Activity,
    Actor,
    ActorKind,
    BusinessDiagnosis,
    FormalizationBlock,
    Goal,
    GoalKind,
    RequirementsModel,
    SourceKey,
    SourceLocation,
    make_model,
)

KEYWORDS = frozenset(
    {
        "business",
        "activity",
        "context",
        "actor",
        "goal",
        "strategic",
        "tactical",
        "informational",
        "system",
        "refines",
        "verb",
        "fact",
        "dimension",
    }
)

_IDENT = re.compile(r"[A-Za-z][A-Za-z0-9_]*")

FILE_EXTENSION = ".dis"


@dataclass(frozen=True)
class ParseDiagnostic:
    severity: str
    code: str
    message: str
    line: int
    column: int


@dataclass(frozen=True)
class ParseResult:
    """Either a model or error diagnostics, never both.

    model is None exactly when diagnostics contains an error.
    """

    model: RequirementsModel | None
    diagnostics: tuple[ParseDiagnostic, ...]

    @property
    def ok(self) -> bool:
        return self.model is not None


@dataclass(frozen=True)
class _Token:
    kind: str  # "keyword" | "ident" | "string" | "punct" | "eof"
    value: str
    line: int
    column: int

    def describe(self) -> str:
        if self.kind == "eof":
            return "end of input"
        if self.kind == "string":
            return "string"
        return f'"{self.value}"'


class _Lexer:
    def __init__(self, text: str, diagnostics: list[ParseDiagnostic]):
        self.text = text
        self.pos = 0
        self.line = 1
        self.column = 1
        self.diagnostics = diagnostics

    def _error(self, message: str, line: int, column: int) -> None:
        self.diagnostics.append(
            ParseDiagnostic("error", "P001", message, line, column)
        )

    def _advance(self, n: int = 1) -> None:
        for _ in range(n):
            if self.pos >= len(self.text):
                return
            if self.text[self.pos] == "\n":
                self.line += 1
                self.column = 1
            else:
                self.column += 1
            self.pos += 1

    def tokens(self) -> list[_Token]:
        out: list[_Token] = []
        while True:
            tok = self._next()
            out.append(tok)
            if tok.kind == "eof":
                return out

    def _next(self) -> _Token:
        text = self.text
        while self.pos < len(text):
            ch = text[self.pos]
            if ch in " \t\r\n":
                self._advance()
                continue
            if ch == "#":
                while self.pos < len(text) and text[self.pos] != "\n":
                    self._advance()
                continue
            line, column = self.line, self.column
            if ch in "{},":
                self._advance()
                return _Token("punct", ch, line, column)
            if ch == '"':
                return self._string(line, column)
            match = _IDENT.match(text, self.pos)
            if match:
                word = match.group(0)
                self._advance(len(word))
                kind = "keyword" if word in KEYWORDS else "ident"
                return _Token(kind, word, line, column)
            self._error(f"unexpected character {ch!r}", line, column)
            self._advance()
        return _Token("eof", "", self.line, self.column)

    def _string(self, line: int, column: int) -> _Token:
        self._advance()  # opening quote
        parts: list[str] = []
        text = self.text
        while self.pos < len(text):
            ch = text[self.pos]
            if ch == '"':
                self._advance()
                return _Token("string", "".join(parts), line, column)
            if ch == "\n":
                break
            if ch == "\\":
                if self.pos + 1 < len(text) and text[self.pos + 1] in ('"', "\\"):
                    parts.append(text[self.pos + 1])
                    self._advance(2)
                    continue
                self._error(
                    "invalid escape sequence in string", self.line, self.column
                )
                self._advance()
                continue
            parts.append(ch)
            self._advance()
        self._error("unterminated string", line, column)
        return _Token("string", "".join(parts), line, column)


class _Parser:
    """Recursive descent over the token list with panic-mode recovery."""

    _SYNC = frozenset({"business", "activity", "context", "actor", "goal"})

    def __init__(self, tokens: list[_Token], diagnostics: list[ParseDiagnostic], filename: str | None):
        self.tokens = tokens
        self.index = 0
        self.diagnostics = diagnostics
        self.filename = filename
        self.activities: list[Activity] = []
        self.actors: list[Actor] = []
        self.goals: list[Goal] = []
        self.source_map: dict[SourceKey, SourceLocation] = {}

    # -- token helpers -------------------------------------------------

    @property
    def current(self) -> _Token:
        return self.tokens[self.index]

    def _advance(self) -> _Token:
        tok = self.current
        if tok.kind != "eof":
            self.index += 1
        return tok

    def _at_keyword(self, word: str) -> bool:
        tok = self.current
        return tok.kind == "keyword" and tok.value == word

    def _at_punct(self, ch: str) -> bool:
        tok = self.current
        return tok.kind == "punct" and tok.value == ch

    def _error(self, code: str, message: str, tok: _Token | None = None) -> None:
        tok = tok or self.current
        self.diagnostics.append(
            ParseDiagnostic("error", code, message, tok.line, tok.column)
        )

    def _syntax(self, expected: str) -> None:
        self._error("P002", f"expected {expected}, found {self.current.describe()}")

    def _expect_keyword(self, word: str) -> _Token | None:
        if self._at_keyword(word):
            return self._advance()
        self._syntax(f'"{word}"')
        return None

    def _expect_punct(self, ch: str) -> _Token | None:
        if self._at_punct(ch):
            return self._advance()
        self._syntax(f'"{ch}"')
        return None

    def _expect_string(self, what: str) -> _Token | None:
        if self.current.kind == "string":
            return self._advance()
        self._syntax(f"{what} (a string)")
        return None

    def _expect_ident(self, what: str) -> _Token | None:
        if self.current.kind == "ident":
            return self._advance()
        if self.current.kind == "keyword":
            self._error(
                "P002",
                f'keyword "{self.current.value}" cannot be used as {what}',
            )
            return None
        self._syntax(f"{what} (an identifier)")
        return None

    def _skip_to(self, keywords: frozenset[str], stop_on_close: bool = False) -> None:
        while self.current.kind != "eof":
            if self.current.kind == "keyword" and self.current.value in keywords:
                return
            if stop_on_close and self._at_punct("}"):
                return
            self._advance()

    def _location(self, tok: _Token) -> SourceLocation:
        return SourceLocation(tok.line, tok.column, self.filename)

    # -- grammar -------------------------------------------------------

    def parse_document(self) -> None:
        if self._at_keyword("business"):
            self.parse_business()
        else:
            self._syntax('"business"')
            self._skip_to(frozenset({"business", "actor", "goal"}))
            if self._at_keyword("business"):
                self.parse_business()
        seen_goal = False
        while self.current.kind != "eof":
            if self._at_keyword("actor"):
                tok = self.current
                if seen_goal:
                    self._error(
                        "P002",
                        "actor declarations must appear before goal declarations",
                        tok,
                    )
                self.parse_actor()
            elif self._at_keyword("goal"):
                seen_goal = True
                self.parse_goal()
            elif self._at_keyword("business"):
                self._error("P003", "duplicate business block")
                self._skip_business_block()
            else:
                self._syntax('"actor" or "goal"')
                self._advance()
                self._skip_to(frozenset({"actor", "goal", "business"}))

    def _skip_business_block(self) -> None:
        self._advance()  # business
        depth = 0
        while self.current.kind != "eof":
            if self._at_punct("{"):
                depth += 1
            elif self._at_punct("}"):
                depth -= 1
                if depth <= 0:
                    self._advance()
                    return
            elif depth == 0 and self.current.kind == "keyword" and self.current.value in ("actor", "goal"):
                return
            self._advance()

    def parse_business(self) -> None:
        head = self._advance()  # business
        name_tok = self._expect_string("business name")
        if name_tok is None:
            self._skip_to(self._SYNC, stop_on_close=True)
        if self._expect_punct("{") is None:
            self._skip_to(frozenset({"activity", "actor", "goal"}))
        while True:
            if self._at_keyword("activity"):
                self.parse_activity()
            elif self._at_punct("}"):
                self._advance()
                break
            elif self.current.kind == "eof":
                self._syntax('"activity" or "}"')
                break
            else:
                self._syntax('"activity" or "}"')
                self._advance()
                self._skip_to(frozenset({"activity"}), stop_on_close=True)
        name = name_tok.value if name_tok else ""
        self.business_name = name
        self.source_map[("business", name)] = self._location(head)

    def parse_activity(self) -> None:
        head = self._advance()  # activity
        name_tok = self._expect_string("activity name")
        if self._expect_punct("{") is None:
            self._skip_to(frozenset({"activity", "context"}), stop_on_close=True)
        contexts: list[str] = []
        name = name_tok.value if name_tok else ""
        while True:
            if self._at_keyword("context"):
                ctx_head = self._advance()
                ctx_tok = self._expect_string("context name")
                if ctx_tok is None:
                    self._skip_to(frozenset({"context"}), stop_on_close=True)
                    continue
                if ctx_tok.value in contexts:
                    self._error(
                        "P003",
                        f'duplicate context "{ctx_tok.value}" in activity "{name}"',
                        ctx_head,
                    )
                    continue
                contexts.append(ctx_tok.value)
                self.source_map[("context", name, ctx_tok.value)] = self._location(ctx_head)
            elif self._at_punct("}"):
                self._advance()
                break
            elif self.current.kind == "eof":
                self._syntax('"context" or "}"')
                break
            else:
                self._syntax('"context" or "}"')
                self._advance()
                self._skip_to(frozenset({"context"}), stop_on_close=True)
        if name_tok is None:
            return
        if any(a.name == name for a in self.activities):
            self._error("P003", f'duplicate activity "{name}"', head)
            return
        self.activities.append(Activity(name=name, contexts=tuple(contexts)))
        self.source_map[("activity", name)] = self._location(head)

    def parse_actor(self) -> None:
        head = self._advance()  # actor
        kind = self._actor_kind()
        name_tok = self._expect_string("actor name")
        if kind is None or name_tok is None:
            self._skip_to(self._SYNC)
            return
        if any(a.name == name_tok.value for a in self.actors):
            self._error("P003", f'duplicate actor "{name_tok.value}"', head)
            return
        self.actors.append(Actor(name=name_tok.value, kind=kind))
        self.source_map[("actor", name_tok.value)] = self._location(head)

    def _actor_kind(self) -> ActorKind | None:
        tok = self.current
        if tok.kind == "keyword" and tok.value in ("strategic", "tactical", "system"):
            self._advance()
            return ActorKind(tok.value)
        self._syntax('"strategic", "tactical" or "system"')
        return None

    def _goal_kind(self) -> GoalKind | None:
        tok = self.current
        if tok.kind == "keyword" and tok.value in ("strategic", "tactical", "informational"):
            self._advance()
            return GoalKind(tok.value)
        self._syntax('"strategic", "tactical" or "informational"')
        return None

    def parse_goal(self) -> None:
        head = self._advance()  # goal
        kind = self._goal_kind()
        id_tok = self._expect_ident("goal id")
        statement_tok = self._expect_string("goal statement")
        if kind is None or id_tok is None or statement_tok is None:
            self._skip_to(self._SYNC)
            return
        fields: dict[str, str] = {}
        ok = True
        for field_kw in ("actor", "activity", "context"):
            if self._expect_keyword(field_kw) is None:
                ok = False
                break
            value = self._expect_string(f"{field_kw} name")
            if value is None:
                ok = False
                break
            fields[field_kw] = value.value
        if not ok:
            self._skip_to(self._SYNC)
            return
        parent = None
        if self._at_keyword("refines"):
            self._advance()
            parent_tok = self._expect_ident("refined goal id")
            if parent_tok is None:
                self._skip_to(self._SYNC)
                return
            parent = parent_tok.value
        formalization = None
        if self._at_punct("{"):
            if kind is not GoalKind.INFORMATIONAL:
                self._error(
                    "P002",
                    f"formalization block not allowed on {kind.value} goal",
                )
                self._skip_formalization()
            else:
                formalization = self.parse_formalization()
        if any(g.id == id_tok.value for g in self.goals):
            self._error("P003", f'duplicate goal id "{id_tok.value}"', head)
            return
        self.goals.append(
            Goal(
                id=id_tok.value,
                kind=kind,
                statement=statement_tok.value,
                actor=fields["actor"],
                activity=fields["activity"],
                context=fields["context"],
                parent=parent,
                formalization=formalization,
            )
        )
        self.source_map[("goal", id_tok.value)] = self._location(head)

    def _skip_formalization(self) -> None:
        self._advance()  # {
        while self.current.kind != "eof" and not self._at_punct("}"):
            self._advance()
        if self._at_punct("}"):
            self._advance()

    def _ident_list(self, what: str, allow_empty: bool) -> list[str] | None:
        names: list[str] = []
        if allow_empty and self.current.kind != "ident":
            return names
        first = self._expect_ident(what)
        if first is None:
            return None
        names.append(first.value)
        while self._at_punct(","):
            self._advance()
            nxt = self._expect_ident(what)
            if nxt is None:
                return None
            names.append(nxt.value)
        return names

    def parse_formalization(self) -> FormalizationBlock | None:
        self._advance()  # {
        if self._expect_keyword("verb") is None:
            self._skip_formalization_tail()
            return None
        verb_tok = self._expect_string("verb")
        if verb_tok is None:
            self._skip_formalization_tail()
            return None
        if self._expect_keyword("fact") is None:
            self._skip_formalization_tail()
            return None
        facts = self._ident_list("fact parameter", allow_empty=False)
        if facts is None:
            self._skip_formalization_tail()
            return None
        if self._expect_keyword("dimension") is None:
            self._skip_formalization_tail()
            return None
        dims = self._ident_list("dimension parameter", allow_empty=True)
        if dims is None:
            self._skip_formalization_tail()
            return None
        if self._expect_punct("}") is None:
            self._skip_formalization_tail()
        return FormalizationBlock(
            verb=verb_tok.value,
            fact_params=tuple(facts),
            dimension_params=tuple(dims),
        )

    def _skip_formalization_tail(self) -> None:
        while self.current.kind != "eof" and not self._at_punct("}"):
            if self.current.kind == "keyword" and self.current.value in self._SYNC:
                return
            self._advance()
        if self._at_punct("}"):
            self._advance()


def parse(text: str, filename: str | None = None) -> ParseResult:
    """Parse a requirements document.

    Returns a ParseResult whose model is populated only when the input
    carries no errors; all P-diagnostics are collected either way.
    """
    diagnostics: list[ParseDiagnostic] = []
    tokens = _Lexer(text, diagnostics).tokens()
    parser = _Parser(tokens, diagnostics, filename)
    parser.parse_document()
    if any(d.severity == "error" for d in diagnostics):
        return ParseResult(None, tuple(diagnostics))
    model = make_model(
        diagnosis=BusinessDiagnosis(
            business_name=getattr(parser, "business_name", ""),
            activities=tuple(parser.activities),
        ),
        actors=parser.actors,
        goals=parser.goals,
        source_map=parser.source_map,
    )
    return ParseResult(model, tuple(diagnostics))


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def emit(model: RequirementsModel) -> str:
    """Render a model in canonical form; pure and byte-stable."""
    lines: list[str] = []
    diag = model.diagnosis
    if diag.activities:
        lines.append(f"business {_quote(diag.business_name)} {{")
        for activity in diag.activities:
            if activity.contexts:
                lines.append(f"  activity {_quote(activity.name)} {{")
                for context in activity.contexts:
                    lines.append(f"    context {_quote(context)}")
                lines.append("  }")
            else:
                lines.append(f"  activity {_quote(activity.name)} {{ }}")
        lines.append("}")
    else:
        lines.append(f"business {_quote(diag.business_name)} {{ }}")
    actors = sorted(model.actors, key=lambda a: (a.kind.value, a.name))
    if actors:
        lines.append("")
        for actor in actors:
            lines.append(f"actor {actor.kind.value} {_quote(actor.name)}")
    for goal in sorted(model.goals, key=lambda g: g.id):
        lines.append("")
        head = (
            f"goal {goal.kind.value} {goal.id} {_quote(goal.statement)}"
            f" actor {_quote(goal.actor)}"
            f" activity {_quote(goal.activity)}"
            f" context {_quote(goal.context)}"
        )
        if goal.parent is not None:
            head += f" refines {goal.parent}"
        if goal.formalization is not None:
            block = goal.formalization
            lines.append(head + " {")
            lines.append(f"  verb {_quote(block.verb)}")
            lines.append(f"  fact {', '.join(block.fact_params)}")
            if block.dimension_params:
                lines.append(f"  dimension {', '.join(block.dimension_params)}")
            else:
                lines.append("  dimension")
            lines.append("}")
        else:
            lines.append(head)
    return "\n".join(lines) + "\n"
