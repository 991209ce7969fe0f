# app/core/errors.py
from __future__ import annotations


class BoobyTrapError(ValueError):
    """Base class for every error raised by the solver library."""


class InvalidInstanceError(BoobyTrapError):
    pass


class InvalidStrategyError(BoobyTrapError):
    pass


class DomainError(BoobyTrapError):
    pass


class RegimeError(BoobyTrapError):
    """A closed form was asked to solve an instance outside its regime."""


class CapacityError(BoobyTrapError):
    def __init__(self, bound: str, value: int, limit: int) -> None:
        self.bound = bound
        self.value = value
        self.limit = limit
        super().__init__(f"{bound} = {value} exceeds the configured cap {limit}")


class InfeasibleRegionError(AssertionError):
    """A hider feasibility box that must be nonempty for the chosen regime came out empty."""


__all__ = [
    "BoobyTrapError",
    "InvalidInstanceError",
    "InvalidStrategyError",
    "DomainError",
    "RegimeError",
    "CapacityError",
    "InfeasibleRegionError",
]
