"""Exception types raised across the package."""

from __future__ import annotations


class BowleyError(Exception):
    """Base class for every error raised by :mod:`bowley`."""


class InvalidAccounts(BowleyError, ValueError):
    """An accounting snapshot or rate set violates its construction invariants."""


class ZeroIncome(BowleyError, ZeroDivisionError):
    """Income shares were requested for a snapshot with Y = 0."""


class ZeroConsumptionRate(BowleyError, ZeroDivisionError):
    """A ratio over the consumption rate was requested with omega = 0."""


class NoSteadyState(BowleyError):
    """The wealth flow has no positive fixed point (omega <= r, or e = 0)."""


class NonPositiveWealth(BowleyError):
    """An integration step drove wealth to zero or below."""

    def __init__(self, wealth: float, message: str | None = None):
        self.wealth = wealth
        super().__init__(message or f"wealth fell to {wealth!r}")


class AbsorberNegative(BowleyError):
    """The residual-absorbing sector was driven below zero.

    Carries the first infeasible step index and model time.
    """

    def __init__(self, step: int, time: float, quantity: str, value: float):
        self.step = step
        self.time = time
        self.quantity = quantity
        self.value = value
        super().__init__(
            f"absorber {quantity} negative ({value:.6f}) at step {step} (t={time:.6f})"
        )


class _LineError(BowleyError, ValueError):
    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"line {line}: {message}")


class ParseError(_LineError):
    """Malformed CSV or scenario row."""


class ValidationError(_LineError):
    """A row parsed but breaks an accounting invariant."""


class OrderError(_LineError):
    """Period labels are not strictly increasing."""
