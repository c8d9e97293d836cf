"""Bound checkers for the security statements simulated by this package."""

from .reports import BoundReport

__all__ = ["BoundReport"]
