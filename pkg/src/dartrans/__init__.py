"""Application of dartrans evolution patterns to dartwins."""

from src.dartrans.applicability import (
    ApplicabilityReport,
    Reason,
    TransformationContext,
    Violation,
    check_applicability,
    plan_additions,
    prepare,
)
from src.dartrans.binding import Binding, BindingError, load_binding, parse_binding
from src.dartrans.procedure import (
    NotApplicable,
    TransformationInvariantError,
    TransformationResult,
    apply_transformation,
    extend_with_after,
    finalize,
    reduce_to_core,
    run_transformation,
)
from src.dartrans.steps import step_trees

__all__ = [
    "ApplicabilityReport",
    "Binding",
    "BindingError",
    "NotApplicable",
    "Reason",
    "TransformationContext",
    "TransformationInvariantError",
    "TransformationResult",
    "Violation",
    "apply_transformation",
    "check_applicability",
    "extend_with_after",
    "finalize",
    "load_binding",
    "parse_binding",
    "plan_additions",
    "prepare",
    "reduce_to_core",
    "run_transformation",
    "step_trees",
]
