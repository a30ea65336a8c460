"""Accounting snapshots, rates, income shares and the identity chain.

Everything here is a pure function of a single :class:`NationalAccounts`
snapshot or of a pair of rates. Identity residuals are absolute; callers
choose the tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

from .errors import InvalidAccounts, ZeroConsumptionRate, ZeroIncome

__all__ = [
    "NationalAccounts",
    "RateSet",
    "ShareSet",
    "IdentityCheck",
    "IdentityReport",
    "IDENTITY_IDS",
    "rates_from_accounts",
    "shares_from_accounts",
    "bowley_from_rates",
    "profit_ratio_from_rates",
    "check_identities",
]


@dataclass(frozen=True)
class NationalAccounts:
    """One period's flows and the wealth stock of an economy or sector.

    Attributes
    ----------
    C : float
        Consumption per period.
    Y : float
        Total income per period.
    e : float
        Earnings paid to labour (the wage bill).
    pi : float
        Profit: any income from paper assets.
    W : float
        Wealth, the stock of paper assets. Must be strictly positive.

    ``Y = e + pi`` is not enforced; see :func:`check_identities`.
    """

    C: float
    Y: float
    e: float
    pi: float
    W: float

    def __post_init__(self) -> None:
        for name in ("C", "Y", "e", "pi", "W"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise InvalidAccounts(f"{name} must be finite, got {value!r}")
            if value < 0:
                raise InvalidAccounts(f"{name} must be non-negative, got {value!r}")
        if self.W <= 0:
            raise InvalidAccounts(f"W must be positive, got {self.W!r}")

    def scaled(self, k: float) -> "NationalAccounts":
        """Return the snapshot with every field multiplied by ``k``."""
        return NationalAccounts(
            C=self.C * k, Y=self.Y * k, e=self.e * k, pi=self.pi * k, W=self.W * k
        )


@dataclass(frozen=True)
class RateSet:
    """Per-period flows as fractions of wealth."""

    omega: float
    gamma: float
    r: float

    def __post_init__(self) -> None:
        for name in ("omega", "gamma", "r"):
            value = getattr(self, name)
            if not math.isfinite(value) or value < 0:
                raise InvalidAccounts(f"{name} must be finite and >= 0, got {value!r}")


@dataclass(frozen=True)
class ShareSet:
    """Labour share (Bowley ratio) and profit share of income."""

    beta: float
    rho: float


def rates_from_accounts(acc: NationalAccounts) -> RateSet:
    """Consumption, income and profit rates of a snapshot."""
    return RateSet(omega=acc.C / acc.W, gamma=acc.Y / acc.W, r=acc.pi / acc.W)


def shares_from_accounts(acc: NationalAccounts) -> ShareSet:
    """Income shares ``beta = e/Y`` and ``rho = pi/Y``.

    Raises
    ------
    ZeroIncome
        If ``acc.Y == 0``.
    """
    if acc.Y == 0:
        raise ZeroIncome("income shares are undefined when Y = 0")
    return ShareSet(beta=acc.e / acc.Y, rho=acc.pi / acc.Y)


def profit_ratio_from_rates(r: float, omega: float) -> float:
    """Profit share implied by the profit and consumption rates, ``r/omega``."""
    if omega == 0:
        raise ZeroConsumptionRate("profit ratio undefined for omega = 0")
    return r / omega


def bowley_from_rates(r: float, omega: float) -> float:
    """Bowley ratio ``1 - r/omega``.

    Not clamped: ``r > omega`` gives a negative labour share.
    """
    if omega == 0:
        raise ZeroConsumptionRate("Bowley ratio undefined for omega = 0")
    return 1.0 - r / omega


# Identity ids follow the numbering of the derivation chain.
IDENTITY_IDS = (1, 2, 8, 13, 15, 17, 19)

_IDENTITY_NAMES = {
    1: "C = Y",
    2: "Y = e + pi",
    8: "beta + rho = 1",
    13: "rho = r/omega",
    15: "beta = 1 - r/omega",
    17: "omega = gamma",
    19: "C = Y (via omega*W = gamma*W)",
}


@dataclass(frozen=True)
class IdentityCheck:
    identity: int
    name: str
    left: float
    right: float
    residual: float
    passed: bool


@dataclass(frozen=True)
class IdentityReport:
    """Result of :func:`check_identities`.

    ``rho_by_omega`` and ``rho_by_gamma`` are the two candidate profit
    ratios ``r/omega`` and ``r/gamma``; they agree only on equilibrium
    snapshots and are reported side by side rather than asserted equal.
    """

    checks: tuple[IdentityCheck, ...]
    tol: float
    rho_by_omega: float
    rho_by_gamma: float

    def __iter__(self) -> Iterator[IdentityCheck]:
        return iter(self.checks)

    def __getitem__(self, identity: int) -> IdentityCheck:
        for check in self.checks:
            if check.identity == identity:
                return check
        raise KeyError(identity)

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failed(self) -> tuple[int, ...]:
        return tuple(c.identity for c in self.checks if not c.passed)


def _ratio(num: float, den: float) -> float:
    return num / den if den != 0 else math.nan


def check_identities(acc: NationalAccounts, tol: float) -> IdentityReport:
    """Evaluate both sides of each identity in the derivation chain.

    Identities whose sides are undefined for this snapshot (shares when
    ``Y = 0``, ratios over ``omega`` when ``C = 0``) get an infinite
    residual, so they pass only under an infinite tolerance.
    """
    if not tol >= 0:
        raise ValueError(f"tolerance must be >= 0, got {tol!r}")
    rates = rates_from_accounts(acc)
    beta = _ratio(acc.e, acc.Y)
    rho = _ratio(acc.pi, acc.Y)
    rho_omega = _ratio(rates.r, rates.omega)

    sides = {
        1: (acc.C, acc.Y),
        2: (acc.Y, acc.e + acc.pi),
        8: (beta + rho, 1.0),
        13: (rho, rho_omega),
        15: (beta, 1.0 - rho_omega),
        17: (rates.omega, rates.gamma),
        19: (rates.omega * acc.W, rates.gamma * acc.W),
    }
    checks = []
    for ident in IDENTITY_IDS:
        left, right = sides[ident]
        residual = abs(left - right)
        if math.isnan(residual):
            residual = math.inf
        checks.append(
            IdentityCheck(
                identity=ident,
                name=_IDENTITY_NAMES[ident],
                left=left,
                right=right,
                residual=residual,
                passed=residual <= tol,
            )
        )
    return IdentityReport(
        checks=tuple(checks),
        tol=tol,
        rho_by_omega=rho_omega,
        rho_by_gamma=_ratio(rates.r, rates.gamma),
    )
