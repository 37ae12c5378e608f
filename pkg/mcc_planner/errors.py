"""
Exception types raised by the planning toolkit.
All of them are ValueErrors so callers can catch domain failures in one place.
"""


class MccError(ValueError):
    """Base class for planner errors."""


class InvalidArgumentError(MccError):
    """An input is outside the domain an operation accepts."""


class DomainError(MccError):
    """A computation has no real-valued result for the given inputs."""


class SearchLimitError(MccError):
    """Exhaustive search was asked to enumerate too many candidates."""

    def __init__(self, n_candidates, limit):
        super().__init__(f"Exhaustive search limited to {limit} candidates, got {n_candidates}")
        self.n_candidates = n_candidates
        self.limit = limit


class InfeasiblePlanError(MccError):
    """
    No core selection reaches the target rate.

    Attributes:
        best_rate (float): Highest aggregate rate (Gb/s) that could be reached
        best (CoreConfiguration): The configuration achieving best_rate
    """

    def __init__(self, target_rate, best):
        super().__init__(
            f"Target {target_rate:.2f} Gb/s is infeasible; best achievable is {best.total_rate:.2f} Gb/s"
        )
        self.target_rate = target_rate
        self.best = best
        self.best_rate = best.total_rate


class ScenarioError(MccError):
    """A scenario file could not be turned into a valid Scenario."""

    def __init__(self, message, line=None, key=None):
        location = f"line {line}: " if line is not None else ""
        subject = f"{key}: " if key else ""
        super().__init__(f"{location}{subject}{message}")
        self.line = line
        self.key = key
