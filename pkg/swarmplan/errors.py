from __future__ import annotations

from typing import Iterable


class SwarmPlanError(Exception):
    """Base class for planner errors."""


class NonConvergence(SwarmPlanError):
    def __init__(self, message: str, *, iterations: int) -> None:
        super().__init__(message)
        self.iterations = iterations


class InsufficientVertices(SwarmPlanError):
    pass


class InfeasibleCoverage(SwarmPlanError):
    def __init__(self, uncovered: Iterable[int]) -> None:
        self.uncovered = tuple(sorted(uncovered))
        super().__init__(f"{len(self.uncovered)} point(s) left uncovered: {list(self.uncovered)[:20]}")


class InstanceTooLarge(SwarmPlanError):
    pass


class EmptySample(SwarmPlanError):
    pass


class ConfigError(SwarmPlanError):
    pass


class ValidationFailure(SwarmPlanError):
    pass


class DegenerateDistance(UserWarning):
    """A point sits closer to the BS than the path-loss distance floor."""
