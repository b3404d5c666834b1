"""Persisted admin state."""

from .manager import StateManager

__all__ = ["StateManager"]
