"""Staged validation and derivation over a requirements model.

The pipeline runs the five catalog patterns as stages, ordered by their
`requires` edges: diagnose the organization, identify requirements as a
use-case model, associate strategic to tactical goals, associate tactical
to informational goals, and formalize informational goals.  Every stage
reads only the model and collects all of its findings; the first stage
that produces an error finding halts the run and later stages are
skipped.  Artifacts exist only for stages that ran without errors.

Rule catalog:
  E000 empty business name          W001 formalization without dimensions
  E002 dangling reference           W002 activity without contexts
  E003 actor/goal kind mismatch     W003 actor without goals
  E004 tactical goal not refined
  E005 informational goal not refined
  E006 parent goal of the wrong kind
  E007 refinement across contexts
  E008 missing/empty fact parameters
  E009 parameter name clash in a formalization
  E011 refinement cycle
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from disreqc.goal_model import (
    BusinessDiagnosis,
    Goal,
    GoalKind,
    ActorKind,
    RequirementsModel,
    SourceLocation,
    goals_by_kind,
    normalize_param,
)
from disreqc.pattern_catalog import (
    ASSOCIATE_ST,
    ASSOCIATE_TI,
    BUILTIN_SYMBOLS,
    DIAGNOSIS,
    FORMALIZE,
    IDENTIFY,
    Catalog,
    builtin_catalog,
    resolve_order,
)

ERROR = "error"
WARNING = "warning"


@dataclass(frozen=True)
class ValidationFinding:
    severity: str
    code: str
    message: str
    subject: str
    stage: str
    location: SourceLocation | None = None


@dataclass(frozen=True)
class UseCaseModel:
    """Goal ownership graph: one (actor name, goal id) edge per goal."""

    edges: tuple[tuple[str, str], ...]


@dataclass(frozen=True)
class AssociationTable:
    """Parent goals of one scope with their refining children.

    level "strategic-tactical" scopes by (activity, context); level
    "tactical-informational" additionally fixes the strategic goal.
    rows map each parent goal id to its children, both sorted by id.
    """

    activity: str
    context: str
    level: str
    rows: tuple[tuple[str, tuple[str, ...]], ...]
    strategic_goal: str | None = None


@dataclass(frozen=True)
class FormalizationRow:
    goal_id: str
    verb: str
    fact_params: tuple[str, ...]
    dimension_params: tuple[str, ...]


@dataclass(frozen=True)
class FormalizationTable:
    """Verb/fact/dimension rows of one tactical goal's children."""

    activity: str
    context: str
    strategic_goal: str
    tactical_goal: str
    rows: tuple[FormalizationRow, ...]


@dataclass(frozen=True)
class PipelineResult:
    stages_run: tuple[str, ...]
    findings: tuple[ValidationFinding, ...]
    diagnosis: BusinessDiagnosis | None = None
    usecase: UseCaseModel | None = None
    assoc_st: tuple[AssociationTable, ...] | None = None
    assoc_ti: tuple[AssociationTable, ...] | None = None
    formalization: tuple[FormalizationTable, ...] | None = None

    def errors(self) -> tuple[ValidationFinding, ...]:
        return tuple(f for f in self.findings if f.severity == ERROR)

    def warnings(self) -> tuple[ValidationFinding, ...]:
        return tuple(f for f in self.findings if f.severity == WARNING)

    @property
    def ok(self) -> bool:
        return not self.errors()


def _loc(model: RequirementsModel, *key: str) -> SourceLocation | None:
    return model.source_map.get(tuple(key))


def _goal_loc(model: RequirementsModel, goal: Goal) -> SourceLocation | None:
    return _loc(model, "goal", goal.id)


def stage_diagnose(
    model: RequirementsModel,
) -> tuple[BusinessDiagnosis, list[ValidationFinding]]:
    """Check and return the organization diagnosis (business/activities/contexts)."""
    findings: list[ValidationFinding] = []
    diagnosis = model.diagnosis
    if not diagnosis.business_name.strip():
        findings.append(
            ValidationFinding(
                ERROR,
                "E000",
                "business name is empty",
                diagnosis.business_name or "business",
                DIAGNOSIS,
                _loc(model, "business", diagnosis.business_name),
            )
        )
    for activity in diagnosis.activities:
        if not activity.contexts:
            findings.append(
                ValidationFinding(
                    WARNING,
                    "W002",
                    f'activity "{activity.name}" declares no contexts',
                    activity.name,
                    DIAGNOSIS,
                    _loc(model, "activity", activity.name),
                )
            )
    return diagnosis, findings


def stage_identify(
    model: RequirementsModel,
) -> tuple[UseCaseModel, list[ValidationFinding]]:
    """Resolve goal ownership into a use-case model and check references."""
    findings: list[ValidationFinding] = []
    actors = {actor.name: actor for actor in model.actors}
    edges: list[tuple[str, str]] = []
    owned: set[str] = set()
    for goal in model.goals:
        loc = _goal_loc(model, goal)
        actor = actors.get(goal.actor)
        if actor is None:
            findings.append(
                ValidationFinding(
                    ERROR,
                    "E002",
                    f'goal "{goal.id}" references undeclared actor "{goal.actor}"',
                    goal.id,
                    IDENTIFY,
                    loc,
                )
            )
        else:
            owned.add(actor.name)
            edges.append((actor.name, goal.id))
            expected = (
                ActorKind.STRATEGIC
                if goal.kind is GoalKind.STRATEGIC
                else ActorKind.TACTICAL
            )
            if actor.kind is not expected:
                findings.append(
                    ValidationFinding(
                        ERROR,
                        "E003",
                        f'{goal.kind.value} goal "{goal.id}" must be owned by a'
                        f" {expected.value} actor, not {actor.kind.value}"
                        f' actor "{actor.name}"',
                        goal.id,
                        IDENTIFY,
                        loc,
                    )
                )
        activity = model.diagnosis.find_activity(goal.activity)
        if activity is None:
            findings.append(
                ValidationFinding(
                    ERROR,
                    "E002",
                    f'goal "{goal.id}" references undeclared activity "{goal.activity}"',
                    goal.id,
                    IDENTIFY,
                    loc,
                )
            )
        elif goal.context not in activity.contexts:
            findings.append(
                ValidationFinding(
                    ERROR,
                    "E002",
                    f'goal "{goal.id}" references unknown context "{goal.context}"'
                    f' of activity "{goal.activity}"',
                    goal.id,
                    IDENTIFY,
                    loc,
                )
            )
    for actor in model.actors:
        if actor.kind is ActorKind.SYSTEM or actor.name in owned:
            continue
        findings.append(
            ValidationFinding(
                WARNING,
                "W003",
                f'{actor.kind.value} actor "{actor.name}" owns no goals',
                actor.name,
                IDENTIFY,
                _loc(model, "actor", actor.name),
            )
        )
    return UseCaseModel(edges=tuple(sorted(edges))), findings


def _refinement_cycles(model: RequirementsModel) -> list[list[str]]:
    """Cycles in the refinement graph, each as an id list, one per cycle."""
    parent: dict[str, str] = {}
    ids = {goal.id for goal in model.goals}
    for goal in model.goals:
        if goal.parent is not None and goal.parent in ids:
            parent[goal.id] = goal.parent
    cycles: list[list[str]] = []
    state: dict[str, int] = {}  # 1 walking, 2 done
    for start in sorted(parent):
        if state.get(start):
            continue
        path: list[str] = []
        node = start
        while node in parent and not state.get(node):
            state[node] = 1
            path.append(node)
            node = parent[node]
        if state.get(node) == 1:
            cycles.append(path[path.index(node):])
        for seen in path:
            state[seen] = 2
    return cycles


def _check_parent(
    model: RequirementsModel,
    goal: Goal,
    expected_kind: GoalKind,
    orphan_code: str,
    stage: str,
    findings: list[ValidationFinding],
) -> Goal | None:
    """Shared refinement checks; returns the valid parent goal or None."""
    loc = _goal_loc(model, goal)
    if goal.parent is None:
        findings.append(
            ValidationFinding(
                ERROR,
                orphan_code,
                f'{goal.kind.value} goal "{goal.id}" does not refine any'
                f" {expected_kind.value} goal",
                goal.id,
                stage,
                loc,
            )
        )
        return None
    parent = next((g for g in model.goals if g.id == goal.parent), None)
    if parent is None:
        findings.append(
            ValidationFinding(
                ERROR,
                "E002",
                f'goal "{goal.id}" refines unknown goal "{goal.parent}"',
                goal.id,
                stage,
                loc,
            )
        )
        return None
    if parent.kind is not expected_kind:
        findings.append(
            ValidationFinding(
                ERROR,
                "E006",
                f'{goal.kind.value} goal "{goal.id}" refines {parent.kind.value}'
                f' goal "{parent.id}"; expected a {expected_kind.value} goal',
                goal.id,
                stage,
                loc,
            )
        )
        return None
    if (parent.activity, parent.context) != (goal.activity, goal.context):
        findings.append(
            ValidationFinding(
                ERROR,
                "E007",
                f'goal "{goal.id}" in context "{goal.context}" refines'
                f' "{parent.id}" in context "{parent.context}";'
                " refinement must stay in one activity context",
                goal.id,
                stage,
                loc,
            )
        )
        return None
    return parent


def stage_associate_st(
    model: RequirementsModel,
) -> tuple[tuple[AssociationTable, ...], list[ValidationFinding]]:
    """Group tactical goals under their strategic parents per context."""
    findings: list[ValidationFinding] = []
    cycles = _refinement_cycles(model)
    in_cycle: set[str] = set()
    for cycle in cycles:
        in_cycle.update(cycle)
        anchor = min(cycle)
        start = cycle.index(anchor)
        chain = cycle[start:] + cycle[:start] + [anchor]
        findings.append(
            ValidationFinding(
                ERROR,
                "E011",
                "refinement cycle: " + " -> ".join(chain),
                anchor,
                ASSOCIATE_ST,
                _loc(model, "goal", anchor),
            )
        )
    placed: dict[str, str] = {}
    for goal in goals_by_kind(model, GoalKind.STRATEGIC):
        if goal.id in in_cycle:
            continue
        if goal.parent is not None:
            findings.append(
                ValidationFinding(
                    ERROR,
                    "E006",
                    f'strategic goal "{goal.id}" must not refine another goal',
                    goal.id,
                    ASSOCIATE_ST,
                    _goal_loc(model, goal),
                )
            )
    for goal in goals_by_kind(model, GoalKind.TACTICAL):
        if goal.id in in_cycle:
            continue
        parent = _check_parent(
            model, goal, GoalKind.STRATEGIC, "E004", ASSOCIATE_ST, findings
        )
        if parent is not None:
            placed[goal.id] = parent.id
    tables = []
    strategic = goals_by_kind(model, GoalKind.STRATEGIC)
    scopes = sorted({(g.activity, g.context) for g in strategic})
    for activity, context in scopes:
        parents = [
            g for g in strategic if (g.activity, g.context) == (activity, context)
        ]
        rows = tuple(
            (
                parent.id,
                tuple(
                    child for child, owner in sorted(placed.items()) if owner == parent.id
                ),
            )
            for parent in parents
        )
        tables.append(
            AssociationTable(
                activity=activity,
                context=context,
                level="strategic-tactical",
                rows=rows,
            )
        )
    return tuple(tables), findings


def stage_associate_ti(
    model: RequirementsModel,
) -> tuple[tuple[AssociationTable, ...], list[ValidationFinding]]:
    """Group informational goals under tactical parents per strategic goal."""
    findings: list[ValidationFinding] = []
    placed: dict[str, str] = {}
    for goal in goals_by_kind(model, GoalKind.INFORMATIONAL):
        parent = _check_parent(
            model, goal, GoalKind.TACTICAL, "E005", ASSOCIATE_TI, findings
        )
        if parent is not None:
            placed[goal.id] = parent.id
    tables = []
    for strategic in goals_by_kind(model, GoalKind.STRATEGIC):
        tacticals = [
            g
            for g in goals_by_kind(model, GoalKind.TACTICAL)
            if g.parent == strategic.id
            and (g.activity, g.context) == (strategic.activity, strategic.context)
        ]
        if not tacticals:
            continue
        rows = tuple(
            (
                tactical.id,
                tuple(
                    child
                    for child, owner in sorted(placed.items())
                    if owner == tactical.id
                ),
            )
            for tactical in tacticals
        )
        tables.append(
            AssociationTable(
                activity=strategic.activity,
                context=strategic.context,
                level="tactical-informational",
                rows=rows,
                strategic_goal=strategic.id,
            )
        )
    tables.sort(key=lambda t: (t.activity, t.context, t.strategic_goal))
    return tuple(tables), findings


def stage_formalize(
    model: RequirementsModel,
) -> tuple[tuple[FormalizationTable, ...], list[ValidationFinding]]:
    """Check formalization blocks and lay them out per tactical goal."""
    findings: list[ValidationFinding] = []
    for goal in goals_by_kind(model, GoalKind.INFORMATIONAL):
        loc = _goal_loc(model, goal)
        block = goal.formalization
        if block is None:
            findings.append(
                ValidationFinding(
                    ERROR,
                    "E008",
                    f'informational goal "{goal.id}" has no formalization block',
                    goal.id,
                    FORMALIZE,
                    loc,
                )
            )
            continue
        if not block.fact_params:
            findings.append(
                ValidationFinding(
                    ERROR,
                    "E008",
                    f'formalization of "{goal.id}" has no fact parameters',
                    goal.id,
                    FORMALIZE,
                    loc,
                )
            )
        facts = [normalize_param(p) for p in block.fact_params]
        dims = [normalize_param(p) for p in block.dimension_params]
        for label, params in (("fact", facts), ("dimension", dims)):
            seen: set[str] = set()
            for param in params:
                if param in seen:
                    findings.append(
                        ValidationFinding(
                            ERROR,
                            "E009",
                            f'duplicate {label} parameter "{param}" in'
                            f' formalization of "{goal.id}"',
                            goal.id,
                            FORMALIZE,
                            loc,
                        )
                    )
                seen.add(param)
        for param in facts:
            if param in dims:
                findings.append(
                    ValidationFinding(
                        ERROR,
                        "E009",
                        f'parameter "{param}" of "{goal.id}" appears in both'
                        " fact and dimension lists",
                        goal.id,
                        FORMALIZE,
                        loc,
                    )
                )
        if not block.dimension_params:
            findings.append(
                ValidationFinding(
                    WARNING,
                    "W001",
                    f'formalization of "{goal.id}" declares no dimension parameters',
                    goal.id,
                    FORMALIZE,
                    loc,
                )
            )
    goal_map = {g.id: g for g in model.goals}
    tables: list[FormalizationTable] = []
    for tactical in goals_by_kind(model, GoalKind.TACTICAL):
        strategic = goal_map.get(tactical.parent or "")
        if strategic is None or strategic.kind is not GoalKind.STRATEGIC:
            continue
        rows = tuple(
            FormalizationRow(
                goal_id=goal.id,
                verb=goal.formalization.verb,
                fact_params=goal.formalization.fact_params,
                dimension_params=goal.formalization.dimension_params,
            )
            for goal in goals_by_kind(model, GoalKind.INFORMATIONAL)
            if goal.parent == tactical.id
            and goal.formalization is not None
            and (goal.activity, goal.context) == (tactical.activity, tactical.context)
        )
        if not rows:
            continue
        tables.append(
            FormalizationTable(
                activity=tactical.activity,
                context=tactical.context,
                strategic_goal=strategic.id,
                tactical_goal=tactical.id,
                rows=rows,
            )
        )
    tables.sort(key=lambda t: (t.activity, t.context, t.strategic_goal, t.tactical_goal))
    return tuple(tables), findings


_STAGES = {
    DIAGNOSIS: stage_diagnose,
    IDENTIFY: stage_identify,
    ASSOCIATE_ST: stage_associate_st,
    ASSOCIATE_TI: stage_associate_ti,
    FORMALIZE: stage_formalize,
}

_ARTIFACT_FIELD = {
    DIAGNOSIS: "diagnosis",
    IDENTIFY: "usecase",
    ASSOCIATE_ST: "assoc_st",
    ASSOCIATE_TI: "assoc_ti",
    FORMALIZE: "formalization",
}


def run_pipeline(
    model: RequirementsModel, catalog: Catalog | None = None
) -> PipelineResult:
    """Run all five stages in catalog order, halting at the first failure."""
    catalog = catalog or builtin_catalog()
    order = resolve_order(catalog, BUILTIN_SYMBOLS)
    stages_run: list[str] = []
    findings: list[ValidationFinding] = []
    artifacts: dict[str, object] = {}
    for symbol in order:
        artifact, stage_findings = _STAGES[symbol](model)
        stages_run.append(symbol)
        findings.extend(stage_findings)
        if any(f.severity == ERROR for f in stage_findings):
            break
        artifacts[_ARTIFACT_FIELD[symbol]] = artifact
    return PipelineResult(
        stages_run=tuple(stages_run), findings=tuple(findings), **artifacts
    )


def finding_to_text(finding: ValidationFinding, file_label: str = "") -> str:
    """Human-readable single line for a finding."""
    prefix = file_label or "-"
    if finding.location is not None:
        prefix += f":{finding.location.line}:{finding.location.column}"
    return (
        f"{prefix}: {finding.severity} {finding.code} [{finding.stage}]"
        f" {finding.subject}: {finding.message}"
    )


def finding_to_json(finding: ValidationFinding) -> str:
    """One finding as a single-line JSON object with fixed key order."""
    return json.dumps(
        {
            "severity": finding.severity,
            "code": finding.code,
            "subject": finding.subject,
            "stage": finding.stage,
            "message": finding.message,
            "line": finding.location.line if finding.location else None,
            "column": finding.location.column if finding.location else None,
        },
        ensure_ascii=False,
    )
