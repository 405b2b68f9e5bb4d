"""Star-schema construction from formalized informational goals.

Each tactical goal with at least one formalized informational child
becomes one fact table: its measures are the children's fact parameters
and its dimension references the children's dimension parameters, both
deduplicated by normalized name with first occurrence deciding order
(children visited by goal id).  Dimension identity is global: the same
parameter name in two goals means one conformed dimension table whose
source set merges all contributing goals.

Emitters (SQL DDL, canonical JSON, DOT) are pure and byte-stable.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from disreqc.goal_model import (
    Goal,
    GoalKind,
    RequirementsModel,
    goals_by_kind,
    normalize_param,
)


class NotFormalizedError(Exception):
    def __init__(self, goal_id: str):
        super().__init__(
            f'informational goal "{goal_id}" has no formalization block'
        )
        self.goal_id = goal_id


@dataclass(frozen=True)
class Measure:
    name: str
    source_goal: str
    verb: str


@dataclass(frozen=True)
class DimensionTable:
    name: str
    source_goals: tuple[str, ...]


@dataclass(frozen=True)
class FactTable:
    name: str
    grain: tuple[str, str, str]  # (activity, context, tactical goal id)
    measures: tuple[Measure, ...]
    dimension_refs: tuple[str, ...]


@dataclass(frozen=True)
class StarSchema:
    fact: FactTable
    dimensions: tuple[DimensionTable, ...]


def dimension_name(param: str) -> str:
    return "dim_" + normalize_param(param)


def _grouped_children(model: RequirementsModel) -> list[tuple[Goal, list[Goal]]]:
    """Tactical goals with their informational children, both by id."""
    tacticals = {g.id: g for g in goals_by_kind(model, GoalKind.TACTICAL)}
    groups: dict[str, list[Goal]] = {}
    for goal in goals_by_kind(model, GoalKind.INFORMATIONAL):
        if goal.parent in tacticals:
            groups.setdefault(goal.parent, []).append(goal)
    return [(tacticals[tid], children) for tid, children in sorted(groups.items())]


def build_star_schemas(model: RequirementsModel) -> list[StarSchema]:
    """One star schema per tactical goal with formalized children.

    Raises NotFormalizedError when a grouped informational goal lacks its
    formalization block (unreachable after a clean pipeline run).
    """
    dim_sources: dict[str, set[str]] = {}
    facts: list[FactTable] = []
    for tactical, children in _grouped_children(model):
        measures: list[Measure] = []
        measure_names: set[str] = set()
        dim_refs: list[str] = []
        for child in children:
            block = child.formalization
            if block is None:
                raise NotFormalizedError(child.id)
            for param in block.fact_params:
                name = normalize_param(param)
                if name in measure_names:
                    continue
                measure_names.add(name)
                measures.append(
                    Measure(name=name, source_goal=child.id, verb=block.verb)
                )
            for param in block.dimension_params:
                name = dimension_name(param)
                dim_sources.setdefault(name, set()).add(child.id)
                if name not in dim_refs:
                    dim_refs.append(name)
        fact = FactTable(
            name="fact_" + tactical.id,
            grain=(tactical.activity, tactical.context, tactical.id),
            measures=tuple(measures),
            dimension_refs=tuple(dim_refs),
        )
        facts.append(fact)
    dimensions = {
        name: DimensionTable(name=name, source_goals=tuple(sorted(sources)))
        for name, sources in dim_sources.items()
    }
    schemas = [
        StarSchema(
            fact=fact,
            dimensions=tuple(dimensions[name] for name in fact.dimension_refs),
        )
        for fact in facts
    ]
    schemas.sort(key=lambda s: s.fact.name)
    return schemas


def shared_dimensions(
    schemas: list[StarSchema],
) -> list[tuple[str, tuple[str, ...]]]:
    """Dimensions referenced by two or more fact tables, sorted by name."""
    referers: dict[str, set[str]] = {}
    for schema in schemas:
        for name in schema.fact.dimension_refs:
            referers.setdefault(name, set()).add(schema.fact.name)
    return [
        (name, tuple(sorted(facts)))
        for name, facts in sorted(referers.items())
        if len(facts) >= 2
    ]


def _all_dimensions(schemas: list[StarSchema]) -> list[DimensionTable]:
    tables: dict[str, DimensionTable] = {}
    for schema in schemas:
        for dim in schema.dimensions:
            tables[dim.name] = dim
    return [tables[name] for name in sorted(tables)]


def emit_sql(schemas: list[StarSchema]) -> str:
    """Dialect-neutral DDL: every dimension once, then the fact tables."""
    statements: list[str] = []
    for dim in _all_dimensions(schemas):
        statements.append(
            f"CREATE TABLE {dim.name} (\n"
            f"  {dim.name}_key INTEGER PRIMARY KEY,\n"
            f"  label TEXT NOT NULL\n"
            f");"
        )
    for schema in sorted(schemas, key=lambda s: s.fact.name):
        fact = schema.fact
        activity, context, tactical = fact.grain
        columns = [
            f"  {name}_key INTEGER NOT NULL REFERENCES {name} ({name}_key)"
            for name in fact.dimension_refs
        ]
        columns.extend(f"  {measure.name} NUMERIC" for measure in fact.measures)
        statements.append(
            f'-- grain: activity "{activity}", context "{context}",'
            f" tactical goal {tactical}\n"
            f"CREATE TABLE {fact.name} (\n" + ",\n".join(columns) + "\n);"
        )
    return "\n\n".join(statements) + "\n" if statements else ""


def emit_json(schemas: list[StarSchema]) -> str:
    """Canonical JSON with goal traceability; 2-space indent, LF, sorted."""
    payload = [
        {
            "fact": schema.fact.name,
            "grain": {
                "activity": schema.fact.grain[0],
                "context": schema.fact.grain[1],
                "tactical_goal": schema.fact.grain[2],
            },
            "measures": [
                {
                    "name": measure.name,
                    "source_goal": measure.source_goal,
                    "verb": measure.verb,
                }
                for measure in schema.fact.measures
            ],
            "dimensions": [
                {"name": dim.name, "source_goals": list(dim.source_goals)}
                for dim in schema.dimensions
            ],
        }
        for schema in sorted(schemas, key=lambda s: s.fact.name)
    ]
    return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"


def _dot_quote(name: str) -> str:
    return '"' + name.replace("\\", "\\\\").replace('"', '\\"') + '"'


def emit_dot(schemas: list[StarSchema]) -> str:
    """DOT graph: box per fact, ellipse per dimension, fact -> dimension."""
    lines = ["digraph star_schemas {"]
    for dim in _all_dimensions(schemas):
        lines.append(f"  {_dot_quote(dim.name)} [shape=ellipse];")
    for schema in sorted(schemas, key=lambda s: s.fact.name):
        lines.append(f"  {_dot_quote(schema.fact.name)} [shape=box];")
    for schema in sorted(schemas, key=lambda s: s.fact.name):
        for name in schema.fact.dimension_refs:
            lines.append(
                f"  {_dot_quote(schema.fact.name)} -> {_dot_quote(name)};"
            )
    lines.append("}")
    return "\n".join(lines) + "\n"
