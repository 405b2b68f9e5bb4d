"""Text rendering of the pipeline artifacts and pattern sheets.

Reports are markdown tables shaped like the models the pipeline builds:
the organization diagnosis (business row, then one row per activity with
its context list), the goal association tables (parent goals as columns,
child lists beneath) and the formalization tables (verb, fact parameters,
dimension parameters per informational goal).  The use-case model renders
as a DOT graph, and the formalization table additionally exports to CSV
for spreadsheet hand-off.

All renderers are pure; cell text is pipe-escaped so no input can break
a table row.
"""

from __future__ import annotations

import csv
import io

from disreqc.analysis_pipeline import (
    AssociationTable,
    FormalizationTable,
    UseCaseModel,
)
from disreqc.goal_model import BusinessDiagnosis
from disreqc.pattern_catalog import TEMPLATE_IDS, Pattern

EMPTY_MARK = "\u2014"


def _cell(text: str) -> str:
    return text.replace("|", "\\|").replace("\n", " ")


def _table(rows: list[list[str]]) -> list[str]:
    """Markdown table lines from header + body rows."""
    lines = ["| " + " | ".join(_cell(col) for col in rows[0]) + " |"]
    lines.append("| " + " | ".join("---" for _ in rows[0]) + " |")
    for row in rows[1:]:
        lines.append("| " + " | ".join(_cell(col) for col in row) + " |")
    return lines


def render_diagnosis(doc: BusinessDiagnosis) -> str:
    """Business row, then one row per activity with its context list."""
    rows = [["Business", doc.business_name]]
    for activity in doc.activities:
        rows.append([activity.name, ", ".join(activity.contexts)])
    return "\n".join(_table(rows)) + "\n"


def _render_association(
    tables: tuple[AssociationTable, ...] | list[AssociationTable],
    child_label: str,
) -> str:
    blocks: list[str] = []
    for table in tables:
        lines = [f"Activity: {table.activity}", f"Context: {table.context}"]
        if table.strategic_goal is not None:
            lines.append(f"Strategic goal: {table.strategic_goal}")
        lines.append("")
        if table.rows:
            header = [parent for parent, _ in table.rows]
            body = [", ".join(children) for _, children in table.rows]
            lines.extend(_table([header, body]))
        else:
            lines.append(f"(no {child_label})")
        blocks.append("\n".join(lines) + "\n")
    return "\n".join(blocks)


def render_assoc_st(
    tables: tuple[AssociationTable, ...] | list[AssociationTable],
) -> str:
    """One block per activity context: strategic goal columns over
    tactical goal lists."""
    return _render_association(tables, "strategic goals")


def render_assoc_ti(
    tables: tuple[AssociationTable, ...] | list[AssociationTable],
) -> str:
    """One block per strategic goal: tactical goal columns over
    informational goal lists."""
    return _render_association(tables, "tactical goals")


_FORMALIZATION_HEADER = ["Verb", "Fact parameters", "Dimension parameters"]


def render_formalization(
    tables: tuple[FormalizationTable, ...] | list[FormalizationTable],
) -> str:
    """One block per tactical goal: a verb/fact/dimension row per child."""
    blocks: list[str] = []
    for table in tables:
        lines = [
            f"Activity: {table.activity}",
            f"Context: {table.context}",
            f"Strategic goal: {table.strategic_goal}",
            f"Tactical goal: {table.tactical_goal}",
            "",
        ]
        rows = [_FORMALIZATION_HEADER]
        for row in table.rows:
            rows.append(
                [
                    row.verb,
                    ", ".join(row.fact_params),
                    ", ".join(row.dimension_params),
                ]
            )
        lines.extend(_table(rows))
        blocks.append("\n".join(lines) + "\n")
    return "\n".join(blocks)


def render_formalization_csv(
    tables: tuple[FormalizationTable, ...] | list[FormalizationTable],
) -> str:
    """Flat CSV of the formalization rows with their full goal scope."""
    out = io.StringIO()
    writer = csv.writer(out)
    writer.writerow(
        [
            "activity",
            "context",
            "strategic_goal",
            "tactical_goal",
            "informational_goal",
            "verb",
            "fact_parameters",
            "dimension_parameters",
        ]
    )
    for table in tables:
        for row in table.rows:
            writer.writerow(
                [
                    table.activity,
                    table.context,
                    table.strategic_goal,
                    table.tactical_goal,
                    row.goal_id,
                    row.verb,
                    ", ".join(row.fact_params),
                    ", ".join(row.dimension_params),
                ]
            )
    return out.getvalue()


def _dot_quote(name: str) -> str:
    return '"' + name.replace("\\", "\\\\").replace('"', '\\"') + '"'


def render_usecase(ucm: UseCaseModel) -> str:
    """DOT graph: actor boxes, goal ellipses, one edge per ownership."""
    actors = sorted({actor for actor, _ in ucm.edges})
    goals = sorted({goal for _, goal in ucm.edges})
    lines = ["digraph use_cases {"]
    for actor in actors:
        lines.append(f"  {_dot_quote(actor)} [shape=box];")
    for goal in goals:
        lines.append(f"  {_dot_quote(goal)} [shape=ellipse];")
    for actor, goal in sorted(ucm.edges):
        lines.append(f"  {_dot_quote(actor)} -> {_dot_quote(goal)};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def render_pattern_sheet(pattern: Pattern) -> str:
    """The ten rubric fields of one pattern in three sections."""

    def joined(symbols: tuple[str, ...]) -> str:
        return ", ".join(symbols) if symbols else EMPTY_MARK

    steps = (
        "<br>".join(
            f"{index}. {step}"
            for index, step in enumerate(pattern.process_solution, start=1)
        )
        if pattern.process_solution
        else EMPTY_MARK
    )
    lines = [f"# {pattern.symbol}", "", "## Interface", ""]
    lines.extend(
        _table(
            [
                ["Rubric", "Fields"],
                ["Symbol", pattern.symbol],
                ["Name", pattern.name],
                ["Classification", "/".join(pattern.classification)],
                ["Context", pattern.context or EMPTY_MARK],
                ["Problem", pattern.problem or EMPTY_MARK],
                ["Strength", pattern.strength or EMPTY_MARK],
            ]
        )
    )
    lines.extend(["", "## Realization", ""])
    lines.extend(
        _table(
            [
                ["Rubric", "Fields"],
                ["Process solution", steps],
                ["Model solution", pattern.model_solution],
            ]
        )
    )
    lines.extend(["", "## Relationship", ""])
    lines.extend(
        _table(
            [
                ["Rubric", "Fields"],
                ["Uses", joined(pattern.uses)],
                ["Requires", joined(pattern.requires)],
            ]
        )
    )
    return "\n".join(lines) + "\n"


# Renderers reachable from a pattern's model_solution field.
RENDERERS = {
    "diagnosis": render_diagnosis,
    "usecase": render_usecase,
    "assoc_st": render_assoc_st,
    "assoc_ti": render_assoc_ti,
    "formalization": render_formalization,
    "pattern_sheet": render_pattern_sheet,
}

assert set(RENDERERS) == TEMPLATE_IDS
