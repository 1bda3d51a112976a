"""Facing directions and yaw arithmetic.

Yaw is measured counterclockwise looking down the vertical axis from
above, with the +x direction at 0 degrees. An asset authored facing
``detected`` needs ``yaw_between(detected, intended)`` degrees of yaw to
end up facing ``intended``.
"""

from __future__ import annotations

from enum import Enum


class FacingDirection(Enum):
    PLUS_X = "PlusX"
    MINUS_X = "MinusX"
    PLUS_Y = "PlusY"
    MINUS_Y = "MinusY"
    UNKNOWN = "Unknown"


FACING_ANGLES: dict[FacingDirection, int] = {
    FacingDirection.PLUS_X: 0,
    FacingDirection.PLUS_Y: 90,
    FacingDirection.MINUS_X: 180,
    FacingDirection.MINUS_Y: 270,
}


def yaw_between(detected: FacingDirection, intended: FacingDirection) -> int:
    """Counterclockwise degrees rotating ``detected`` onto ``intended``.

    Unknown on either side means no rotation can be justified: returns 0.
    """
    if detected is FacingDirection.UNKNOWN or intended is FacingDirection.UNKNOWN:
        return 0
    return (FACING_ANGLES[intended] - FACING_ANGLES[detected]) % 360
