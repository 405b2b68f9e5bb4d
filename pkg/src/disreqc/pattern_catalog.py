"""Pattern catalog: reusable analysis-pattern sheets and their ordering.

Each pattern sheet has three parts and ten rubric fields: Interface
(symbol, name, classification, context, problem, strength), Realization
(process solution steps, model solution template id) and Relationship
(uses, requires).  `uses` is a soft reference: it may point at a pattern
outside the catalog and never constrains ordering.  `requires` is hard:
every symbol must resolve inside the catalog, the relation must be
acyclic, and it drives the stage order of the analysis pipeline.

The built-in catalog holds the five analysis patterns the pipeline
executes, chained by `requires` from organization diagnosis down to the
formalization of informational goals.
"""

from __future__ import annotations

import heapq
import re
from dataclasses import dataclass

# Symbols of the built-in patterns, in dependency order.
DIAGNOSIS = "DiagnosisSID"
IDENTIFY = "RecenseBesomsSID"
ASSOCIATE_ST = "AssocieButStra-ButTact"
ASSOCIATE_TI = "AssocieButTact-ButInfo"
FORMALIZE = "FormaliseButInfo"

BUILTIN_SYMBOLS = (DIAGNOSIS, IDENTIFY, ASSOCIATE_ST, ASSOCIATE_TI, FORMALIZE)

# model_solution must name one of these report templates.
TEMPLATE_IDS = frozenset(
    {"diagnosis", "usecase", "assoc_st", "assoc_ti", "formalization", "pattern_sheet"}
)

_FIELD_ORDER = (
    "symbol",
    "name",
    "classification",
    "context",
    "problem",
    "strength",
    "process_solution",
    "model_solution",
    "uses",
    "requires",
)


class UnknownPatternError(Exception):
    def __init__(self, symbol: str):
        super().__init__(f'unknown pattern "{symbol}"')
        self.symbol = symbol


class PatternCycleError(Exception):
    def __init__(self, members: list[str]):
        super().__init__(
            "requires cycle through: " + ", ".join(sorted(members))
        )
        self.members = tuple(sorted(members))


class CatalogError(Exception):
    """Catalog file problem; code is C001..C004."""

    def __init__(self, code: str, message: str):
        super().__init__(f"{code}: {message}")
        self.code = code
        self.detail = message


@dataclass(frozen=True)
class Pattern:
    symbol: str
    name: str
    classification: tuple[str, ...]
    context: str
    problem: str
    strength: str
    process_solution: tuple[str, ...]
    model_solution: str
    uses: tuple[str, ...] = ()
    requires: tuple[str, ...] = ()


@dataclass(frozen=True)
class Catalog:
    name: str
    patterns: tuple[Pattern, ...]

    def find(self, symbol: str) -> Pattern | None:
        for pattern in self.patterns:
            if pattern.symbol == symbol:
                return pattern
        return None

    def symbols(self) -> tuple[str, ...]:
        return tuple(p.symbol for p in self.patterns)


def builtin_catalog() -> Catalog:
    """The five built-in analysis patterns."""
    return Catalog(name="builtin", patterns=_BUILTIN)


_BUILTIN = (
    Pattern(
        symbol=DIAGNOSIS,
        name="Diagnosis of business organization",
        classification=("DIS", "Analysis", "Product", "Process"),
        context="This pattern is reused in the definition of business organization.",
        problem=(
            "Guide the discovery of an organization's activities and contexts"
            " associated with them."
        ),
        strength=(
            "This pattern details the steps to determine the contexts associated"
            " with the activities of the organization."
        ),
        process_solution=(
            "Define the business of the organization.",
            "Determine the activities that make up the business.",
            "List the contexts associated with each activity.",
        ),
        model_solution="diagnosis",
        uses=("AnalyseDIS",),
        requires=(),
    ),
    Pattern(
        symbol=IDENTIFY,
        name="Identification of business requirements",
        classification=("SID", "Analysis", "Process", "Product"),
        context="This pattern is reused in a new collection of a DIS's business requirements.",
        problem="To guide the collection of a DIS's business requirements.",
        strength="This pattern describes how to identify a DIS's business requirements.",
        process_solution=(
            "Define the actors of the organization.",
            "Identify the requirements of each actor.",
            "Establish the use-case model of the collected requirements.",
        ),
        model_solution="usecase",
        uses=(),
        requires=(DIAGNOSIS,),
    ),
    Pattern(
        symbol=ASSOCIATE_ST,
        name="Association of the strategic goals to the tactical goals",
        classification=("SID", "Analysis", "Product"),
        context="This pattern is reused in the association of the strategic goals to tactical goals.",
        problem=(
            "To guide the treatment of business goals and the association of"
            " strategic goals to tactical goals."
        ),
        strength=(
            "This pattern describes how to assemble the tactical goals associated"
            " with each strategic goal."
        ),
        process_solution=(
            "Classify the collected goals into strategic, tactical and informational types.",
            "Associate each strategic goal with the tactical goals attached to it"
            " in a predefined context.",
        ),
        model_solution="assoc_st",
        uses=(DIAGNOSIS,),
        requires=(IDENTIFY,),
    ),
    Pattern(
        symbol=ASSOCIATE_TI,
        name="Association of the tactical goals to the informational goals",
        classification=("SID", "Analysis", "Product"),
        context="This pattern is reused when associating the tactical goals to informational goals.",
        problem=(
            "To guide the treatment of business goals and the association of"
            " the tactical to informational goals."
        ),
        strength=(
            "This pattern describes how to assemble informational goals associated"
            " with each tactical goal."
        ),
        process_solution=(
            "Classify the collected goals into strategic, tactical and informational types.",
            "Associate each strategic goal with its tactical goals.",
            "Select each tactical goal and associate it with the informational"
            " goals attached to it in a predefined context.",
        ),
        model_solution="assoc_ti",
        uses=(DIAGNOSIS,),
        requires=(IDENTIFY, ASSOCIATE_ST),
    ),
    Pattern(
        symbol=FORMALIZE,
        name="Formalization of informational goals",
        classification=("SID", "Analysis", "Product"),
        context=(
            "This pattern is reused when analyzing informational goals:"
            " extracting facts and dimensions."
        ),
        problem=(
            "To guide the extraction of facts and dimensions after the"
            " formalization of informational goals."
        ),
        strength=(
            "This pattern describes how to formalize informational goals associated"
            " with each tactical goal which is in turn associated with a strategic"
            " goal in a predefined context."
        ),
        process_solution=(
            "Classify the collected goals into strategic, tactical and informational types.",
            "Associate each strategic goal with its tactical goals.",
            "Associate each tactical goal with its informational goals in a"
            " predefined context.",
            "Formalize each informational goal by fact parameters and dimension"
            " parameters.",
        ),
        model_solution="formalization",
        uses=(DIAGNOSIS,),
        requires=(IDENTIFY, ASSOCIATE_ST, ASSOCIATE_TI),
    ),
)


# -- classification matching -----------------------------------------------

_MERGEABLE = frozenset({"Product", "Process"})


def _normalize_label(label: str) -> str:
    return "DIS" if label == "SID" else label


def _segments(path: tuple[str, ...] | list[str]) -> tuple[frozenset[str], ...]:
    """Split a classification path into comparable segments.

    Labels normalize DIS/SID to DIS.  A run of Product/Process labels is
    one unordered segment, so Product^Process and Process^Product match.
    """
    segments: list[frozenset[str]] = []
    run: set[str] = set()
    for raw in path:
        label = _normalize_label(raw)
        if label in _MERGEABLE:
            run.add(label)
            continue
        if run:
            segments.append(frozenset(run))
            run = set()
        segments.append(frozenset({label}))
    if run:
        segments.append(frozenset(run))
    return tuple(segments)


def query(catalog: Catalog, prefix: list[str] | tuple[str, ...]) -> list[Pattern]:
    """Patterns whose classification starts with the given path prefix.

    Matching is segment-wise: each prefix segment must equal the pattern's
    segment at the same position, so a prefix ending in Product selects
    only product-only classifications.
    """
    want = _segments(tuple(prefix))
    found = [
        pattern
        for pattern in catalog.patterns
        if _segments(pattern.classification)[: len(want)] == want
    ]
    return sorted(found, key=lambda p: p.symbol)


# -- ordering ---------------------------------------------------------------


def resolve_order(catalog: Catalog, targets: list[str] | tuple[str, ...]) -> list[str]:
    """Topological order of the requires-closure of the targets.

    Dependencies come first; ties break lexicographically by symbol.
    Raises UnknownPatternError for unresolved symbols and
    PatternCycleError when requires is cyclic.
    """
    closure: dict[str, Pattern] = {}
    stack = list(targets)
    while stack:
        symbol = stack.pop()
        if symbol in closure:
            continue
        pattern = catalog.find(symbol)
        if pattern is None:
            raise UnknownPatternError(symbol)
        closure[symbol] = pattern
        stack.extend(pattern.requires)

    indegree = {symbol: 0 for symbol in closure}
    dependents: dict[str, list[str]] = {symbol: [] for symbol in closure}
    for symbol, pattern in closure.items():
        for dep in pattern.requires:
            indegree[symbol] += 1
            dependents[dep].append(symbol)

    ready = [symbol for symbol, deg in indegree.items() if deg == 0]
    heapq.heapify(ready)
    order: list[str] = []
    while ready:
        symbol = heapq.heappop(ready)
        order.append(symbol)
        for follower in sorted(dependents[symbol]):
            indegree[follower] -= 1
            if indegree[follower] == 0:
                heapq.heappush(ready, follower)
    if len(order) != len(closure):
        raise PatternCycleError([s for s in closure if s not in order])
    return order


# -- file format --------------------------------------------------------------


def save_catalog(catalog: Catalog) -> str:
    """Serialize a catalog; load_catalog inverts this exactly."""
    sections: list[str] = []
    for pattern in catalog.patterns:
        lines = [
            f"symbol: {pattern.symbol}",
            f"name: {pattern.name}",
            f"classification: {'/'.join(pattern.classification)}",
            f"context: {pattern.context}",
            f"problem: {pattern.problem}",
            f"strength: {pattern.strength}",
            "process_solution:",
        ]
        for index, step in enumerate(pattern.process_solution, start=1):
            lines.append(f"  {index}. {step}")
        lines.append(f"model_solution: {pattern.model_solution}")
        lines.append(f"uses: {', '.join(pattern.uses)}".rstrip())
        lines.append(f"requires: {', '.join(pattern.requires)}".rstrip())
        sections.append("\n".join(lines) + "\n")
    header = f"catalog: {catalog.name}\n\n" if catalog.name else ""
    return header + "---\n".join(sections)


_STEP_NUMBER = re.compile(r"^\d+\.\s*(.*)$")


def _split_csv(value: str) -> tuple[str, ...]:
    return tuple(part.strip() for part in value.split(",") if part.strip())


def load_catalog(text: str) -> Catalog:
    """Parse the catalog file format; raises CatalogError (C001..C004)."""
    name = ""
    patterns: list[Pattern] = []
    fields: dict[str, str] = {}
    steps: list[str] = []
    steps_seen = False
    in_steps = False
    seen_any = False

    def finish_section(line_no: int) -> None:
        nonlocal fields, steps, steps_seen, in_steps
        if not fields and not steps_seen:
            return
        patterns.append(_pattern_from_fields(fields, steps, line_no))
        fields = {}
        steps = []
        steps_seen = False
        in_steps = False

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.rstrip("\r")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        if line.strip() == "---":
            finish_section(line_no)
            seen_any = True
            continue
        if line[0] in " \t":
            if not in_steps:
                raise CatalogError(
                    "C001", f"line {line_no}: unexpected continuation line"
                )
            step = line.strip()
            numbered = _STEP_NUMBER.match(step)
            steps.append(numbered.group(1) if numbered else step)
            continue
        if ":" not in line:
            raise CatalogError("C001", f"line {line_no}: expected 'key: value'")
        key, _, value = line.partition(":")
        key = key.strip()
        value = value.strip()
        if key == "catalog":
            if seen_any or fields or steps_seen:
                raise CatalogError(
                    "C001", f"line {line_no}: catalog name must come first"
                )
            name = value
            continue
        if key not in _FIELD_ORDER:
            raise CatalogError("C001", f'line {line_no}: unknown field "{key}"')
        if key in fields or (key == "process_solution" and steps_seen):
            raise CatalogError("C001", f'line {line_no}: duplicate field "{key}"')
        seen_any = True
        if key == "process_solution":
            if value:
                raise CatalogError(
                    "C001",
                    f"line {line_no}: process_solution steps belong on indented lines",
                )
            steps_seen = True
            in_steps = True
            continue
        in_steps = False
        fields[key] = value
    finish_section(len(text.splitlines()))

    symbols: set[str] = set()
    for pattern in patterns:
        if pattern.symbol in symbols:
            raise CatalogError("C002", f'duplicate symbol "{pattern.symbol}"')
        symbols.add(pattern.symbol)
    for pattern in patterns:
        for dep in pattern.requires:
            if dep not in symbols:
                raise CatalogError(
                    "C003",
                    f'pattern "{pattern.symbol}" requires unknown pattern "{dep}"',
                )
    catalog = Catalog(name=name, patterns=tuple(patterns))
    try:
        resolve_order(catalog, catalog.symbols())
    except PatternCycleError as err:
        raise CatalogError("C004", str(err)) from err
    return catalog


def _pattern_from_fields(
    fields: dict[str, str], steps: list[str], line_no: int
) -> Pattern:
    for required in ("symbol", "name", "classification", "model_solution"):
        if not fields.get(required):
            raise CatalogError(
                "C001", f'pattern section near line {line_no} lacks "{required}"'
            )
    classification = tuple(
        label.strip() for label in fields["classification"].split("/") if label.strip()
    )
    if not classification:
        raise CatalogError(
            "C001", f"pattern section near line {line_no}: empty classification"
        )
    if fields["model_solution"] not in TEMPLATE_IDS:
        raise CatalogError(
            "C001",
            f'unknown model_solution "{fields["model_solution"]}"'
            f" near line {line_no}",
        )
    return Pattern(
        symbol=fields["symbol"],
        name=fields["name"],
        classification=classification,
        context=fields.get("context", ""),
        problem=fields.get("problem", ""),
        strength=fields.get("strength", ""),
        process_solution=tuple(steps),
        model_solution=fields["model_solution"],
        uses=_split_csv(fields.get("uses", "")),
        requires=_split_csv(fields.get("requires", "")),
    )
