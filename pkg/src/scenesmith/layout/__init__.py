"""Spatial layout: constraint solving, placement, rendering, refinement."""

from .engine import (
    DEFAULT_MAX_ASSETS,
    DEFAULT_MAX_ITERS,
    AssetSpec,
    ImproveResult,
    LayoutEngine,
    LayoutEngineConfig,
    LayoutEntry,
    LayoutProposal,
    OrientationResult,
    render_scene,
)
from .orientation import FACING_ANGLES, FacingDirection, yaw_between
from .render import IMAGE_SIZE, MarkedRender, render_orientation_card, render_topdown
from .solver import AXES, solve_layout

__all__ = [
    "DEFAULT_MAX_ASSETS",
    "DEFAULT_MAX_ITERS",
    "AssetSpec",
    "ImproveResult",
    "LayoutEngine",
    "LayoutEngineConfig",
    "LayoutEntry",
    "LayoutProposal",
    "OrientationResult",
    "render_scene",
    "FACING_ANGLES",
    "FacingDirection",
    "yaw_between",
    "IMAGE_SIZE",
    "MarkedRender",
    "render_orientation_card",
    "render_topdown",
    "AXES",
    "solve_layout",
]
