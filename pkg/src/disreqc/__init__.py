"""disreqc: a requirements compiler for decisional information systems.

Parses a goal-oriented requirements DSL, validates documents against a
pattern catalog through a staged analysis pipeline, and generates star
schemas and model reports from the validated goals.
"""

from disreqc.goal_model import (
    Activity,
    Actor,
    ActorKind,
    BrokenChainError,
    BusinessDiagnosis,
    FormalizationBlock,
    Goal,
    GoalKind,
    RequirementsModel,
    SourceLocation,
    TraceChain,
    UnknownGoalError,
    WrongKindError,
    find_goal,
    goals_by_kind,
    make_model,
    normalize_param,
    trace,
)

__version__ = "0.1.0"

__all__ = [
    "Activity",
    "Actor",
    "ActorKind",
    "BrokenChainError",
    "BusinessDiagnosis",
    "FormalizationBlock",
    "Goal",
    "GoalKind",
    "RequirementsModel",
    "SourceLocation",
    "TraceChain",
    "UnknownGoalError",
    "WrongKindError",
    "find_goal",
    "goals_by_kind",
    "make_model",
    "normalize_param",
    "trace",
    "__version__",
]
