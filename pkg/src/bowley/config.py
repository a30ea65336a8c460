"""Flat ``key = value`` configuration, scenario files and grid specs.

Scenario files are top-level keys followed by repeated ``[sector]``
blocks::

    r = 0.05
    omega = 0.25
    horizon = 38

    [sector]
    name = agriculture
    e0 = 0.8
    pi0 = 0.2
    wage_drift = 0:1, 38:0.75
    absorber = false
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable

from .dynamics import DriftSchedule, EconomyParams, SectorSpec
from .errors import ParseError

# Short names used in config files and --set overrides -> EconomyParams fields.
PARAM_KEYS = {
    "e": ("wage_bill", float),
    "r": ("profit_rate", float),
    "omega": ("consumption_rate", float),
    "w0": ("initial_wealth", float),
    "step": ("step", float),
    "max_steps": ("max_steps", int),
    "tol": ("convergence_tol", float),
}

SCENARIO_KEYS = {
    "r": float,
    "omega": float,
    "horizon": float,
    "step": float,
    "relaxation": float,
    "burn_in": float,
    "initial_wealth": float,
}
SECTOR_KEYS = {"name", "e0", "pi0", "wage_drift", "profit_drift", "absorber"}


def _split_kv(line: str, lineno: int) -> tuple[str, str]:
    if "=" not in line:
        raise ParseError(lineno, f"expected key = value, got {line!r}")
    key, _, value = line.partition("=")
    key, value = key.strip(), value.strip()
    if not key:
        raise ParseError(lineno, "empty key")
    return key, value


def _lines(text: str) -> Iterable[tuple[int, str]]:
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def _number(value: str, kind, lineno: int, key: str):
    try:
        out = kind(value)
    except ValueError:
        raise ParseError(lineno, f"{key}: not a number: {value!r}") from None
    if isinstance(out, float) and not math.isfinite(out):
        raise ParseError(lineno, f"{key}: must be finite")
    return out


def parse_overrides(pairs: Iterable[str], lineno: int = 0) -> dict[str, str]:
    out = {}
    for pair in pairs:
        key, value = _split_kv(pair, lineno)
        if key not in PARAM_KEYS:
            raise ParseError(lineno, f"unknown parameter {key!r}; known: {', '.join(PARAM_KEYS)}")
        out[key] = value
    return out


def read_params_file(path: str | Path) -> dict[str, str]:
    """Parse a flat parameter file; unknown keys are rejected."""
    out = {}
    for lineno, line in _lines(Path(path).read_text(encoding="utf-8")):
        key, value = _split_kv(line, lineno)
        if key not in PARAM_KEYS:
            raise ParseError(lineno, f"unknown parameter {key!r}")
        out[key] = value
    return out


def build_params(values: dict[str, str], base: EconomyParams | None = None) -> EconomyParams:
    kwargs = {}
    for key, raw in values.items():
        name, kind = PARAM_KEYS[key]
        kwargs[name] = _number(raw, kind, 0, key)
    return replace(base or EconomyParams(), **kwargs)


@dataclass
class Scenario:
    sectors: list[SectorSpec]
    r: float
    omega: float
    horizon: float
    step: float = 0.25
    relaxation: float = 1.0
    burn_in: float = 5.0
    initial_wealth: float | None = None


def parse_drift(value: str, lineno: int = 0) -> DriftSchedule:
    """``"0:1, 38:0.75"`` -> knots ``((0, 1), (38, 0.75))``."""
    points = []
    for item in value.split(","):
        item = item.strip()
        if not item:
            continue
        year, sep, mult = item.partition(":")
        if not sep:
            raise ParseError(lineno, f"drift point must be year:multiplier, got {item!r}")
        points.append((_number(year, float, lineno, "year"), _number(mult, float, lineno, "multiplier")))
    try:
        return DriftSchedule(tuple(points))
    except ValueError as exc:
        raise ParseError(lineno, str(exc)) from None


def _parse_bool(value: str, lineno: int) -> bool:
    v = value.lower()
    if v in ("true", "yes", "1"):
        return True
    if v in ("false", "no", "0"):
        return False
    raise ParseError(lineno, f"expected true/false, got {value!r}")


def _build_sector(block: dict[str, tuple[int, str]], start: int) -> SectorSpec:
    for key in ("name", "e0", "pi0"):
        if key not in block:
            raise ParseError(start, f"[sector] missing {key}")

    def num(key):
        lineno, raw = block[key]
        return _number(raw, float, lineno, key)

    def drift(key):
        if key not in block:
            return DriftSchedule()
        lineno, raw = block[key]
        return parse_drift(raw, lineno)

    absorber = False
    if "absorber" in block:
        absorber = _parse_bool(block["absorber"][1], block["absorber"][0])
    try:
        return SectorSpec(
            name=block["name"][1],
            wage_bill=num("e0"),
            profit=num("pi0"),
            wage_drift=drift("wage_drift"),
            profit_drift=drift("profit_drift"),
            absorber=absorber,
        )
    except ValueError as exc:
        raise ParseError(start, str(exc)) from None


def parse_scenario(text: str) -> Scenario:
    top: dict[str, float] = {}
    blocks: list[tuple[int, dict[str, tuple[int, str]]]] = []
    for lineno, line in _lines(text):
        if line.startswith("["):
            if line != "[sector]":
                raise ParseError(lineno, f"unknown section {line!r}")
            blocks.append((lineno, {}))
            continue
        key, value = _split_kv(line, lineno)
        if blocks:
            if key not in SECTOR_KEYS:
                raise ParseError(lineno, f"unknown sector key {key!r}")
            blocks[-1][1][key] = (lineno, value)
        else:
            if key not in SCENARIO_KEYS:
                raise ParseError(lineno, f"unknown scenario key {key!r}")
            top[key] = _number(value, SCENARIO_KEYS[key], lineno, key)
    for key in ("r", "omega", "horizon"):
        if key not in top:
            raise ParseError(0, f"scenario missing {key}")
    if not blocks:
        raise ParseError(0, "scenario has no [sector] blocks")
    sectors = [_build_sector(block, start) for start, block in blocks]
    n_abs = sum(s.absorber for s in sectors)
    if n_abs != 1:
        raise ParseError(0, f"exactly one sector must have absorber = true, got {n_abs}")
    return Scenario(sectors=sectors, **top)


def read_scenario(path: str | Path) -> Scenario:
    return parse_scenario(Path(path).read_text(encoding="utf-8"))


GRID_AXES = ("e", "r", "omega")


def parse_axis(spec: str) -> list[float]:
    """``"0.02:0.08:0.01"`` -> inclusive arithmetic range; ``"0.05"`` -> one value."""
    parts = spec.split(":")
    try:
        nums = [float(p) for p in parts]
    except ValueError:
        raise ValueError(f"bad axis spec {spec!r}") from None
    if len(nums) == 1:
        return nums
    if len(nums) != 3:
        raise ValueError(f"axis spec must be value or lo:hi:step, got {spec!r}")
    lo, hi, step = nums
    if step <= 0 or hi < lo:
        raise ValueError(f"axis spec needs lo <= hi and step > 0, got {spec!r}")
    n = int(math.floor((hi - lo) / step + 1e-9))
    # Round away accumulated float noise so 0.02 + 6*0.01 prints as 0.08.
    return [round(lo + i * step, 12) for i in range(n + 1)]


def parse_grid(spec: str, base: EconomyParams) -> list[tuple[float, float, float]]:
    """Cartesian grid over ``e``, ``r``, ``omega`` in that order (omega fastest).

    Axes not named in ``spec`` take their value from ``base``.
    """
    axes = {
        "e": [base.wage_bill],
        "r": [base.profit_rate],
        "omega": [base.consumption_rate],
    }
    seen = set()
    for item in spec.split(","):
        item = item.strip()
        if not item:
            continue
        key, sep, value = item.partition("=")
        key = key.strip()
        if not sep or key not in GRID_AXES:
            raise ValueError(f"bad grid item {item!r}; expected e|r|omega=lo:hi:step")
        if key in seen:
            raise ValueError(f"axis {key} given twice")
        seen.add(key)
        axes[key] = parse_axis(value.strip())
    if not seen:
        raise ValueError("empty grid spec")
    return list(itertools.product(axes["e"], axes["r"], axes["omega"]))


def parse_range(spec: str) -> tuple[float, float]:
    """``"lo:hi"`` or a single value ``"x"`` (degenerate range)."""
    parts = spec.split(":")
    if len(parts) not in (1, 2):
        raise ValueError(f"range must be lo:hi or a value, got {spec!r}")
    try:
        nums = [float(p) for p in parts]
    except ValueError:
        raise ValueError(f"bad range {spec!r}") from None
    lo, hi = nums[0], nums[-1]
    if hi < lo:
        raise ValueError(f"range {spec!r} has hi < lo")
    return lo, hi
