"""HTTP and WebSocket service layer."""

from .app import create_app

__all__ = ["create_app"]
