"""Domain model for decisional requirements documents.

A requirements model captures an organization diagnosis (business,
activities, contexts), the declared actors, and a three-level goal
hierarchy (strategic -> tactical -> informational).  Informational goals
carry a formalization block (verb, fact parameters, dimension parameters)
from which star schemas are later derived.

Models are immutable after construction and safe to share across threads.
Structural well-formedness (dangling references, orphan goals, ...) is not
enforced here; it is checked by the analysis pipeline so that broken input
can be reported rather than rejected silently.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum


class GoalKind(str, Enum):
    STRATEGIC = "strategic"
    TACTICAL = "tactical"
    INFORMATIONAL = "informational"


class ActorKind(str, Enum):
    STRATEGIC = "strategic"
    TACTICAL = "tactical"
    SYSTEM = "system"


class ModelError(Exception):
    """Base class for lookup/traversal errors on a requirements model."""


class UnknownGoalError(ModelError):
    def __init__(self, goal_id: str):
        super().__init__(f'unknown goal "{goal_id}"')
        self.goal_id = goal_id


class WrongKindError(ModelError):
    def __init__(self, goal_id: str, expected: GoalKind, actual: GoalKind):
        super().__init__(
            f'goal "{goal_id}" is {actual.value}, expected {expected.value}'
        )
        self.goal_id = goal_id
        self.expected = expected
        self.actual = actual


class BrokenChainError(ModelError):
    def __init__(self, goal_id: str, reason: str):
        super().__init__(f'broken refinement chain at "{goal_id}": {reason}')
        self.goal_id = goal_id


_WHITESPACE_RUN = re.compile(r"\s+")


def normalize_param(name: str) -> str:
    """Normalize a fact/dimension parameter name into a schema identifier.

    Lowercases and collapses each internal whitespace run to a single
    underscore.  Idempotent: normalizing twice equals normalizing once.
    """
    return _WHITESPACE_RUN.sub("_", name.strip()).lower()


@dataclass(frozen=True)
class SourceLocation:
    """1-based position of a declaration in its source document."""

    line: int
    column: int
    file: str | None = None


@dataclass(frozen=True)
class Activity:
    """A business activity and the ordered contexts attached to it."""

    name: str
    contexts: tuple[str, ...] = ()


@dataclass(frozen=True)
class BusinessDiagnosis:
    """The organization diagnosis: one business with its activities."""

    business_name: str
    activities: tuple[Activity, ...] = ()

    def find_activity(self, name: str) -> Activity | None:
        for activity in self.activities:
            if activity.name == name:
                return activity
        return None

    def has_context(self, activity: str, context: str) -> bool:
        found = self.find_activity(activity)
        return found is not None and context in found.contexts


@dataclass(frozen=True)
class Actor:
    name: str
    kind: ActorKind


@dataclass(frozen=True)
class FormalizationBlock:
    """Verb plus fact/dimension parameters of an informational goal."""

    verb: str
    fact_params: tuple[str, ...]
    dimension_params: tuple[str, ...] = ()


@dataclass(frozen=True)
class Goal:
    """One requirement, scoped to an (activity, context) pair.

    ``parent`` names the goal this one refines: tactical goals refine a
    strategic goal, informational goals refine a tactical goal, strategic
    goals refine nothing.  Only informational goals carry a formalization.
    """

    id: str
    kind: GoalKind
    statement: str
    actor: str
    activity: str
    context: str
    parent: str | None = None
    formalization: FormalizationBlock | None = None


# source_map keys: ("business", name), ("activity", name),
# ("context", activity, name), ("actor", name), ("goal", id)
SourceKey = tuple[str, ...]


@dataclass(frozen=True)
class RequirementsModel:
    """A parsed requirements document.

    Actors are held sorted by (kind, name) and goals by id, so two models
    that differ only in declaration order compare equal.  ``source_map``
    is diagnostic metadata and excluded from equality.
    """

    diagnosis: BusinessDiagnosis
    actors: tuple[Actor, ...] = ()
    goals: tuple[Goal, ...] = ()
    source_map: dict[SourceKey, SourceLocation] = field(
        default_factory=dict, compare=False, repr=False
    )

    def goal_ids(self) -> tuple[str, ...]:
        return tuple(goal.id for goal in self.goals)

    def location_of(self, *key: str) -> SourceLocation | None:
        return self.source_map.get(tuple(key))


@dataclass(frozen=True)
class TraceChain:
    """The full lineage of one informational goal, bottom-up."""

    informational_goal_id: str
    tactical_goal_id: str
    strategic_goal_id: str
    context: str
    activity: str
    business: str

    def as_lines(self) -> tuple[str, ...]:
        return (
            f"informational: {self.informational_goal_id}",
            f"tactical: {self.tactical_goal_id}",
            f"strategic: {self.strategic_goal_id}",
            f"context: {self.context}",
            f"activity: {self.activity}",
            f"business: {self.business}",
        )


def make_model(
    diagnosis: BusinessDiagnosis,
    actors: list[Actor] | tuple[Actor, ...] = (),
    goals: list[Goal] | tuple[Goal, ...] = (),
    source_map: dict[SourceKey, SourceLocation] | None = None,
) -> RequirementsModel:
    """Build a model with actors and goals in canonical order."""
    return RequirementsModel(
        diagnosis=diagnosis,
        actors=tuple(sorted(actors, key=lambda a: (a.kind.value, a.name))),
        goals=tuple(sorted(goals, key=lambda g: g.id)),
        source_map=dict(source_map or {}),
    )


def find_goal(model: RequirementsModel, goal_id: str) -> Goal:
    """Return the goal with the given id.

    Raises UnknownGoalError when no goal has that id.
    """
    for goal in model.goals:
        if goal.id == goal_id:
            return goal
    raise UnknownGoalError(goal_id)


def goals_by_kind(model: RequirementsModel, kind: GoalKind) -> list[Goal]:
    """All goals of one kind, ordered by id."""
    return sorted((g for g in model.goals if g.kind is kind), key=lambda g: g.id)


def trace(model: RequirementsModel, goal_id: str) -> TraceChain:
    """Trace an informational goal up to the business it serves.

    Raises UnknownGoalError for an unknown id, WrongKindError when the id
    does not name an informational goal, and BrokenChainError when a parent
    link is missing or mis-kinded (only reachable on unvalidated models).
    """
    goal = find_goal(model, goal_id)
    if goal.kind is not GoalKind.INFORMATIONAL:
        raise WrongKindError(goal_id, GoalKind.INFORMATIONAL, goal.kind)
    tactical = _step_up(model, goal, GoalKind.TACTICAL)
    strategic = _step_up(model, tactical, GoalKind.STRATEGIC)
    return TraceChain(
        informational_goal_id=goal.id,
        tactical_goal_id=tactical.id,
        strategic_goal_id=strategic.id,
        context=goal.context,
        activity=goal.activity,
        business=model.diagnosis.business_name,
    )


def _step_up(model: RequirementsModel, goal: Goal, expected: GoalKind) -> Goal:
    if goal.parent is None:
        raise BrokenChainError(goal.id, "goal has no parent")
    try:
        parent = find_goal(model, goal.parent)
    except UnknownGoalError:
        raise BrokenChainError(goal.id, f'parent "{goal.parent}" does not exist')
    if parent.kind is not expected:
        raise BrokenChainError(
            goal.id, f'parent "{parent.id}" is {parent.kind.value}, expected {expected.value}'
        )
    return parent
