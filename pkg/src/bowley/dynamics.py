"""Floating-income wealth flow and the multi-sector drift scenario engine.

Single economy
--------------
The wage bill ``e``, profit rate ``r`` and consumption rate ``omega`` are
exogenous. Wealth moves by the flow residual::

    dW/dt = e + r*W - omega*W

integrated with an explicit fixed step. The income rate ``gamma = Y/W``
is never set; it floats, and for ``omega > r`` it settles on ``omega``
with ``beta = 1 - r/omega``.

Sectors
-------
Drifting sectors follow piecewise-linear multiplier schedules on their
wage bill and profit. Aggregate wealth follows the same flow as the
single economy. One absorber sector takes the remaining profit and has a
wage bill that relaxes, at rate ``lambda``, toward the value that would
balance aggregate consumption and income.
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

import numpy as np

from .accounts import NationalAccounts
from .errors import AbsorberNegative, NoSteadyState, NonPositiveWealth

__all__ = [
    "EconomyParams",
    "StepRecord",
    "Status",
    "Stability",
    "Trajectory",
    "step_single",
    "steady_state",
    "stability_classify",
    "simulate_single",
    "SweepRow",
    "sweep",
    "DriftSchedule",
    "SectorSpec",
    "SectorRecord",
    "SectoralStep",
    "SectoralTrajectory",
    "simulate_sectors",
]


@dataclass(frozen=True)
class EconomyParams:
    """Exogenous inputs of the single-economy model.

    Rates are per model year; ``step`` is in years.
    """

    wage_bill: float = 1.0
    profit_rate: float = 0.05
    consumption_rate: float = 0.25
    initial_wealth: float = 1.0
    step: float = 1.0
    max_steps: int = 100_000
    convergence_tol: float = 1e-9

    def __post_init__(self) -> None:
        checks = [
            ("wage_bill", self.wage_bill >= 0),
            ("profit_rate", self.profit_rate >= 0),
            ("consumption_rate", self.consumption_rate >= 0),
            ("initial_wealth", self.initial_wealth > 0),
            ("step", self.step > 0),
            ("max_steps", self.max_steps >= 1),
            ("convergence_tol", self.convergence_tol > 0),
        ]
        for name, ok in checks:
            value = getattr(self, name)
            if not ok or not math.isfinite(value):
                raise ValueError(f"invalid {name}: {value!r}")

    @property
    def predicted_beta(self) -> float:
        """Closed-form limit ``1 - r/omega`` (nan when omega = 0)."""
        if self.consumption_rate == 0:
            return math.nan
        return 1.0 - self.profit_rate / self.consumption_rate


@dataclass(frozen=True)
class StepRecord:
    time: float
    W: float
    C: float
    pi: float
    e: float
    Y: float
    gamma: float
    beta: float


class Status(enum.Enum):
    CONVERGED = "converged"
    MAX_STEPS = "max_steps_reached"
    DIVERGED = "diverged"


class Stability(enum.Enum):
    STABLE = "stable"
    UNSTABLE_ECONOMIC = "unstable_economic"
    UNSTABLE_NUMERICAL = "unstable_numerical"


@dataclass(frozen=True)
class Trajectory:
    params: EconomyParams
    records: tuple[StepRecord, ...]
    status: Status
    reason: str = ""

    @property
    def final(self) -> StepRecord:
        return self.records[-1]

    @property
    def steps(self) -> int:
        """Number of integration steps taken (records minus one)."""
        return len(self.records) - 1

    @property
    def converged(self) -> bool:
        return self.status is Status.CONVERGED

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(rec, name) for rec in self.records])


def _record(time: float, W: float, p: EconomyParams) -> StepRecord:
    C = p.consumption_rate * W
    pi = p.profit_rate * W
    Y = p.wage_bill + pi
    beta = p.wage_bill / Y if Y > 0 else math.nan
    return StepRecord(time=time, W=W, C=C, pi=pi, e=p.wage_bill, Y=Y, gamma=Y / W, beta=beta)


def step_single(W: float, p: EconomyParams, time: float = 0.0) -> tuple[float, StepRecord]:
    """Advance wealth by one explicit step of the flow residual.

    Returns the new wealth and the record of the flows at ``W``.

    Raises
    ------
    NonPositiveWealth
        If the step leaves wealth at or below zero.
    """
    if not W > 0:
        raise NonPositiveWealth(W, f"step_single requires W > 0, got {W!r}")
    rec = _record(time, W, p)
    W_next = W + p.step * (rec.Y - rec.C)
    if not W_next > 0:
        raise NonPositiveWealth(W_next)
    return W_next, rec


def steady_state(p: EconomyParams) -> NationalAccounts:
    """Closed-form fixed point ``W* = e/(omega - r)`` as a snapshot."""
    e, r, omega = p.wage_bill, p.profit_rate, p.consumption_rate
    if omega <= r:
        raise NoSteadyState(f"no steady state: omega ({omega}) <= r ({r})")
    if e == 0:
        raise NoSteadyState("no positive steady state: wage bill is zero, so W* = 0")
    W = e / (omega - r)
    pi = r * W
    return NationalAccounts(C=omega * W, Y=e + pi, e=e, pi=pi, W=W)


def stability_bound(p: EconomyParams) -> float:
    """Largest stable step ``2/(omega - r)``; inf when omega - r <= 0."""
    gap = p.consumption_rate - p.profit_rate
    return 2.0 / gap if gap > 0 else math.inf


def stability_classify(p: EconomyParams) -> Stability:
    # W_{t+1} - W* = (1 - step*(omega - r)) (W_t - W*): contracts iff |factor| < 1.
    if p.consumption_rate <= p.profit_rate:
        return Stability.UNSTABLE_ECONOMIC
    if p.step >= stability_bound(p):
        return Stability.UNSTABLE_NUMERICAL
    return Stability.STABLE


def _is_converged(rec: StepRecord, p: EconomyParams) -> bool:
    # |gamma - omega| is also scaled by the wage rate e/W = gamma - r, which
    # bounds the relative wealth error |W - W*|/W* by the tolerance.
    gap = abs(rec.gamma - p.consumption_rate)
    return gap <= p.convergence_tol * min(1.0, rec.gamma - p.profit_rate)


def simulate_single(p: EconomyParams) -> Trajectory:
    """Integrate the wealth flow until gamma settles on omega.

    Divergence is reported in the returned status, never raised. Parameter
    sets with no steady state, or with a step beyond the explicit-scheme
    stability bound, are rejected before integrating.
    """
    W = p.initial_wealth
    first = _record(0.0, W, p)
    stability = stability_classify(p)
    if stability is Stability.UNSTABLE_ECONOMIC:
        return Trajectory(p, (first,), Status.DIVERGED, "omega <= r")
    if stability is Stability.UNSTABLE_NUMERICAL:
        reason = (
            f"numerical instability: step {p.step:g} >= 2/(omega - r) = "
            f"{stability_bound(p):.6f}"
        )
        return Trajectory(p, (first,), Status.DIVERGED, reason)

    records = []
    for n in range(p.max_steps + 1):
        rec = _record(n * p.step, W, p)
        records.append(rec)
        if _is_converged(rec, p):
            return Trajectory(p, tuple(records), Status.CONVERGED)
        if n == p.max_steps:
            break
        W = W + p.step * (rec.Y - rec.C)
        if not W > 0:
            return Trajectory(p, tuple(records), Status.DIVERGED, "wealth fell to zero")
    return Trajectory(p, tuple(records), Status.MAX_STEPS, "max steps reached")


@dataclass(frozen=True)
class SweepRow:
    index: int
    wage_bill: float
    profit_rate: float
    consumption_rate: float
    status: Status
    steps: int
    beta: float
    predicted: float
    residual: float
    wealth: float


def _sweep_point(args: tuple[int, EconomyParams]) -> SweepRow:
    index, p = args
    traj = simulate_single(p)
    beta = traj.final.beta
    predicted = p.predicted_beta
    residual = abs(beta - predicted) if traj.converged else math.nan
    return SweepRow(
        index=index,
        wage_bill=p.wage_bill,
        profit_rate=p.profit_rate,
        consumption_rate=p.consumption_rate,
        status=traj.status,
        steps=traj.steps,
        beta=beta,
        predicted=predicted,
        residual=residual,
        wealth=traj.final.W,
    )


def sweep(
    grid: Iterable[tuple[float, float, float]],
    base: EconomyParams | None = None,
    max_workers: int | None = None,
) -> list[SweepRow]:
    """Run :func:`simulate_single` at each ``(e, r, omega)`` grid point.

    Rows come back in grid order. With ``max_workers > 1`` the points are
    evaluated in a process pool; ordering is unaffected.
    """
    base = base or EconomyParams()
    jobs = [
        (i, replace(base, wage_bill=e, profit_rate=r, consumption_rate=omega))
        for i, (e, r, omega) in enumerate(grid)
    ]
    if not jobs:
        raise ValueError("sweep grid is empty")
    if max_workers and max_workers > 1:
        with ProcessPoolExecutor(max_workers=max_workers) as pool:
            return list(pool.map(_sweep_point, jobs, chunksize=8))
    return [_sweep_point(job) for job in jobs]


# --------------------------------------------------------------------------
# Sectors


@dataclass(frozen=True)
class DriftSchedule:
    """Piecewise-linear multiplier over model years, flat outside the knots.

    An empty schedule is the constant multiplier 1.
    """

    points: tuple[tuple[float, float], ...] = ()

    def __post_init__(self) -> None:
        years = [t for t, _ in self.points]
        if any(b <= a for a, b in zip(years, years[1:])):
            raise ValueError(f"drift knots must have increasing years: {years}")
        if any(m < 0 or not math.isfinite(m) for _, m in self.points):
            raise ValueError("drift multipliers must be finite and >= 0")

    def __call__(self, t: float) -> float:
        if not self.points:
            return 1.0
        years, mults = zip(*self.points)
        return float(np.interp(t, years, mults))


@dataclass(frozen=True)
class SectorSpec:
    name: str
    wage_bill: float
    profit: float
    wage_drift: DriftSchedule = field(default_factory=DriftSchedule)
    profit_drift: DriftSchedule = field(default_factory=DriftSchedule)
    absorber: bool = False

    def __post_init__(self) -> None:
        if self.wage_bill < 0 or self.profit < 0:
            raise ValueError(f"sector {self.name!r}: initial flows must be >= 0")


@dataclass(frozen=True)
class SectorRecord:
    name: str
    e: float
    pi: float
    Y: float
    beta: float


@dataclass(frozen=True)
class SectoralStep:
    time: float
    sectors: tuple[SectorRecord, ...]
    e: float
    pi: float
    Y: float
    beta: float
    W: float
    C: float


@dataclass(frozen=True)
class SectoralTrajectory:
    r: float
    omega: float
    steps: tuple[SectoralStep, ...]

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(s.name for s in self.steps[0].sectors)

    @property
    def times(self) -> np.ndarray:
        return np.array([s.time for s in self.steps])

    @property
    def aggregate_beta(self) -> np.ndarray:
        return np.array([s.beta for s in self.steps])

    def sector_series(self, name: str, field_name: str = "beta") -> np.ndarray:
        idx = self.names.index(name)
        return np.array([getattr(s.sectors[idx], field_name) for s in self.steps])

    def after(self, burn_in: float) -> "SectoralTrajectory":
        return replace(self, steps=tuple(s for s in self.steps if s.time >= burn_in - 1e-12))


def _sector_record(name: str, e: float, pi: float) -> SectorRecord:
    Y = e + pi
    return SectorRecord(name, e, pi, Y, e / Y if Y > 0 else math.nan)


def simulate_sectors(
    sectors: Sequence[SectorSpec],
    r: float,
    omega: float,
    horizon: float,
    step: float,
    relaxation: float,
    initial_wealth: float | None = None,
) -> SectoralTrajectory:
    """Run a drift scenario with one residual-absorbing sector.

    Each step, with aggregate wealth ``W`` and drifting sectors' flows
    ``e_i``, ``pi_i`` read off their schedules:

    * aggregate profit is ``r*W``; the absorber's profit is whatever the
      drifting sectors leave of it;
    * ``W`` advances by ``step * (E + r*W - omega*W)`` with ``E`` the total
      wage bill, exactly as in :func:`step_single`;
    * the absorber's wage bill moves by
      ``step * relaxation * (omega*W - r*W - sum(e_i) - e_abs)``.

    ``initial_wealth`` defaults to total initial profit capitalised at
    ``r``, so the absorber starts from its configured profit.

    Raises
    ------
    AbsorberNegative
        At the first step where the absorber's wage bill or profit would
        go negative.
    """
    absorbers = [i for i, s in enumerate(sectors) if s.absorber]
    if len(absorbers) != 1:
        raise ValueError(f"exactly one absorber sector required, got {len(absorbers)}")
    if not omega > r:
        raise NoSteadyState(f"omega ({omega}) must exceed r ({r})")
    if not relaxation > 0 or not step > 0 or not horizon >= 0:
        raise ValueError("relaxation and step must be > 0, horizon >= 0")
    # Deviation from balance u = E - (omega - r) W obeys u' = u (1 - step (lambda + omega - r)).
    if step * (relaxation + omega - r) >= 2:
        raise ValueError(
            f"step {step} unstable: needs step < 2/(relaxation + omega - r) = "
            f"{2 / (relaxation + omega - r):.6f}"
        )
    ia = absorbers[0]
    absorber = sectors[ia]
    others = [s for i, s in enumerate(sectors) if i != ia]

    if initial_wealth is None:
        total_pi = sum(s.profit for s in sectors)
        if r == 0 or total_pi == 0:
            raise ValueError("initial_wealth is required when r = 0 or total profit is 0")
        initial_wealth = total_pi / r
    if not initial_wealth > 0:
        raise ValueError(f"initial_wealth must be > 0, got {initial_wealth!r}")

    n_steps = int(round(horizon / step))
    W = initial_wealth
    e_abs = absorber.wage_bill
    out = []
    for n in range(n_steps + 1):
        t = n * step
        flows = [(s.wage_bill * s.wage_drift(t), s.profit * s.profit_drift(t)) for s in others]
        e_others = sum(e for e, _ in flows)
        pi_agg = r * W
        pi_abs = pi_agg - sum(p for _, p in flows)
        if e_abs < 0:
            raise AbsorberNegative(n, t, "wage bill", e_abs)
        if pi_abs < 0:
            raise AbsorberNegative(n, t, "profit", pi_abs)

        records = [_sector_record(s.name, e, p) for s, (e, p) in zip(others, flows)]
        records.insert(ia, _sector_record(absorber.name, e_abs, pi_abs))
        e_agg = sum(rec.e for rec in records)
        pi_sum = sum(rec.pi for rec in records)
        Y = e_agg + pi_sum
        C = omega * W
        out.append(
            SectoralStep(
                time=t,
                sectors=tuple(records),
                e=e_agg,
                pi=pi_sum,
                Y=Y,
                beta=e_agg / Y if Y > 0 else math.nan,
                W=W,
                C=C,
            )
        )
        if n == n_steps:
            break
        e_abs = e_abs + step * relaxation * (C - pi_agg - e_others - e_abs)
        W = W + step * (e_agg + pi_agg - C)
        if not W > 0:
            raise NonPositiveWealth(W)
    return SectoralTrajectory(r=r, omega=omega, steps=tuple(out))
