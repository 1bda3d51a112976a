"""Placeholder lifecycle: the red -> yellow -> green -> gone wireframe walk."""

from __future__ import annotations

from enum import Enum

from scenesmith.errors import IllegalTransition


class PlaceholderState(Enum):
    PROPOSED = "Proposed"
    FIRST_PASS = "FirstPass"
    FINALIZED = "Finalized"
    REMOVED = "Removed"

    @property
    def display_color(self) -> str | None:
        return _COLORS[self]

    @property
    def order(self) -> int:
        return _ORDER.index(self)


_ORDER = [
    PlaceholderState.PROPOSED,
    PlaceholderState.FIRST_PASS,
    PlaceholderState.FINALIZED,
    PlaceholderState.REMOVED,
]

_COLORS = {
    PlaceholderState.PROPOSED: "red",
    PlaceholderState.FIRST_PASS: "yellow",
    PlaceholderState.FINALIZED: "green",
    PlaceholderState.REMOVED: None,
}


def successor(state: PlaceholderState) -> PlaceholderState | None:
    """The only legal next state, or None for the terminal state."""
    i = _ORDER.index(state)
    return _ORDER[i + 1] if i + 1 < len(_ORDER) else None


def check_transition(current: PlaceholderState, nxt: PlaceholderState) -> None:
    """Raise unless nxt is the immediate successor of current."""
    if successor(current) is not nxt:
        raise IllegalTransition(f"{current.value} -> {nxt.value} is not a legal transition")
