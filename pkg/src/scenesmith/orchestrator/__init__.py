"""Prompt routing and multi-stage scene construction."""

from .behaviors import BehaviorIdAllocator, attach_behavior, find_target_id
from .pipeline import (
    DeciderVerdict,
    Orchestrator,
    PipelineTrace,
    PromptOutcome,
    StageSpan,
)

__all__ = [
    "BehaviorIdAllocator",
    "attach_behavior",
    "find_target_id",
    "DeciderVerdict",
    "Orchestrator",
    "PipelineTrace",
    "PromptOutcome",
    "StageSpan",
]
