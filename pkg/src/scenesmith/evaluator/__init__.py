"""Spatial-relationship evaluation and feedback ablation."""

from .ablation import (
    CONDITIONS,
    REFERENCE_ACCURACY,
    AblationReport,
    AblationRow,
    predict_layouts,
    run_ablation,
)
from .metrics import EvaluationReport, RelationVerdict, check_relation, evaluate

__all__ = [
    "CONDITIONS",
    "REFERENCE_ACCURACY",
    "AblationReport",
    "AblationRow",
    "predict_layouts",
    "run_ablation",
    "EvaluationReport",
    "RelationVerdict",
    "check_relation",
    "evaluate",
]
