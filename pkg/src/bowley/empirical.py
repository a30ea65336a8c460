"""Back-of-envelope range checks and national-accounts series ingestion.

CSV dialect (input)::

    period,C,Y,e,pi,W
    1990,0.6,0.6,0.45,0.15,3

``period`` is an integer year or ``YYYYQn``. Lines starting with ``#`` are
comments. Ratio tables are written with header
``period,beta,rho,omega,gamma,r,c_minus_y`` and six decimals.
"""

from __future__ import annotations

import csv
import io
import math
import re
from dataclasses import dataclass
from typing import BinaryIO, Iterable, TextIO

from .accounts import (
    NationalAccounts,
    bowley_from_rates,
    rates_from_accounts,
    shares_from_accounts,
)
from .errors import InvalidAccounts, OrderError, ParseError, ValidationError, ZeroIncome

__all__ = [
    "ParameterBox",
    "REFERENCE_BOX",
    "STYLISED_RANGE",
    "bowley_range",
    "omega_from_macro",
    "AccountsSeries",
    "RatioRow",
    "ratio_series",
    "ingest_accounts_csv",
    "emit_accounts_csv",
    "emit_ratio_csv",
    "read_ratio_csv",
    "ACCOUNTS_HEADER",
    "RATIO_HEADER",
]

ACCOUNTS_HEADER = ("period", "C", "Y", "e", "pi", "W")
RATIO_HEADER = ("period", "beta", "rho", "omega", "gamma", "r", "c_minus_y")


@dataclass(frozen=True)
class ParameterBox:
    r_lo: float
    r_hi: float
    omega_lo: float
    omega_hi: float

    def __post_init__(self) -> None:
        if not 0 <= self.r_lo <= self.r_hi:
            raise ValueError(f"need 0 <= r_lo <= r_hi, got {self.r_lo}, {self.r_hi}")
        if not 0 < self.omega_lo <= self.omega_hi:
            raise ValueError(
                f"need 0 < omega_lo <= omega_hi, got {self.omega_lo}, {self.omega_hi}"
            )


# Real interest rates (2%) to equity returns (8%); consumption over capital 0.20-0.25.
REFERENCE_BOX = ParameterBox(r_lo=0.02, r_hi=0.08, omega_lo=0.20, omega_hi=0.25)
# Commonly observed labour shares, reported next to the computed range.
STYLISED_RANGE = (0.50, 0.75)


def bowley_range(box: ParameterBox) -> tuple[float, float]:
    """Extreme Bowley ratios over the box; attained at opposite corners."""
    return (
        bowley_from_rates(box.r_hi, box.omega_lo),
        bowley_from_rates(box.r_lo, box.omega_hi),
    )


def omega_from_macro(consumption_share_of_gdp: float, capital_to_gdp: float) -> float:
    """Consumption rate from ``C/Y`` and ``W/Y``: ``(C/Y) / (W/Y)``."""
    if not consumption_share_of_gdp > 0 or not capital_to_gdp > 0:
        raise ValueError("consumption share and capital/gdp must both be > 0")
    return consumption_share_of_gdp / capital_to_gdp


_PERIOD_RE = re.compile(r"^(\d{4})(?:Q([1-4]))?$")


def period_key(label: str) -> tuple[int, int]:
    """Sort key ``(year, quarter)``; annual labels have quarter 0."""
    m = _PERIOD_RE.match(label)
    if m is None:
        raise ValueError(f"bad period label {label!r}; expected YYYY or YYYYQn")
    return int(m.group(1)), int(m.group(2) or 0)


@dataclass(frozen=True)
class AccountsSeries:
    periods: tuple[str, ...]
    accounts: tuple[NationalAccounts, ...]

    def __post_init__(self) -> None:
        if len(self.periods) != len(self.accounts):
            raise ValueError("periods and accounts differ in length")
        keys = [period_key(p) for p in self.periods]
        if len({k[1] == 0 for k in keys}) > 1:
            raise OrderError(0, "series mixes annual and quarterly periods")
        for i in range(1, len(keys)):
            if keys[i] <= keys[i - 1]:
                raise OrderError(
                    i, f"period {self.periods[i]} does not follow {self.periods[i - 1]}"
                )

    def __len__(self) -> int:
        return len(self.periods)

    def __iter__(self):
        return iter(zip(self.periods, self.accounts))

    def scaled(self, k: float) -> "AccountsSeries":
        return AccountsSeries(self.periods, tuple(a.scaled(k) for a in self.accounts))


@dataclass(frozen=True)
class RatioRow:
    period: str
    beta: float
    rho: float
    omega: float
    gamma: float
    r: float
    c_minus_y: float
    error: str = ""

    def off_equilibrium(self, tol: float) -> bool:
        return abs(self.c_minus_y) > tol


def ratio_series(series: AccountsSeries) -> list[RatioRow]:
    """Shares, rates and the ``C - Y`` gap for each period.

    A period with zero income keeps its rates, gets nan shares and an
    ``error`` note; the remaining periods are unaffected.
    """
    rows = []
    for period, acc in series:
        rates = rates_from_accounts(acc)
        try:
            shares = shares_from_accounts(acc)
            beta, rho, error = shares.beta, shares.rho, ""
        except ZeroIncome as exc:
            beta, rho, error = math.nan, math.nan, str(exc)
        rows.append(
            RatioRow(period, beta, rho, rates.omega, rates.gamma, rates.r, acc.C - acc.Y, error)
        )
    return rows


def _text_lines(source: BinaryIO | TextIO | bytes | str) -> Iterable[str]:
    if isinstance(source, bytes):
        return io.StringIO(source.decode("utf-8"))
    if isinstance(source, str):
        return io.StringIO(source)
    if isinstance(source, io.TextIOBase):
        return source
    return io.TextIOWrapper(source, encoding="utf-8")


def _data_rows(source) -> Iterable[tuple[int, list[str]]]:
    for lineno, line in enumerate(_text_lines(source), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        try:
            (fields,) = csv.reader([stripped])
        except (csv.Error, ValueError) as exc:
            raise ParseError(lineno, str(exc)) from None
        yield lineno, [f.strip() for f in fields]


def ingest_accounts_csv(source: BinaryIO | TextIO | bytes | str) -> AccountsSeries:
    """Parse and validate an accounts CSV.

    ``source`` is a binary or text stream, or the raw CSV content.

    Raises
    ------
    ParseError
        Missing/wrong header, wrong field count, bad number or period label.
    ValidationError
        A negative flow or non-positive wealth.
    OrderError
        Period labels not strictly increasing.
    """
    rows = _data_rows(source)
    try:
        lineno, header = next(rows)
    except StopIteration:
        raise ParseError(0, "empty input; expected header " + ",".join(ACCOUNTS_HEADER))
    if tuple(header) != ACCOUNTS_HEADER:
        raise ParseError(lineno, f"expected header {','.join(ACCOUNTS_HEADER)}, got {','.join(header)}")

    periods: list[str] = []
    accounts: list[NationalAccounts] = []
    keys: list[tuple[int, int]] = []
    for lineno, fields in rows:
        if len(fields) != len(ACCOUNTS_HEADER):
            raise ParseError(lineno, f"expected {len(ACCOUNTS_HEADER)} fields, got {len(fields)}")
        label = fields[0]
        try:
            key = period_key(label)
        except ValueError as exc:
            raise ParseError(lineno, str(exc)) from None
        try:
            C, Y, e, pi, W = (float(f) for f in fields[1:])
        except ValueError as exc:
            raise ParseError(lineno, str(exc)) from None
        try:
            acc = NationalAccounts(C=C, Y=Y, e=e, pi=pi, W=W)
        except InvalidAccounts as exc:
            raise ValidationError(lineno, str(exc)) from None
        if keys and (key <= keys[-1] or (key[1] == 0) != (keys[-1][1] == 0)):
            raise OrderError(lineno, f"period {label} does not follow {periods[-1]}")
        periods.append(label)
        accounts.append(acc)
        keys.append(key)
    return AccountsSeries(tuple(periods), tuple(accounts))


def _fmt(x: float, decimals: int | None) -> str:
    if decimals is None:
        return repr(float(x))
    if math.isnan(x):
        return "nan"
    text = f"{x:.{decimals}f}"
    # Avoid "-0.000000" so re-emission is byte-stable.
    return text[1:] if text.startswith("-") and float(text) == 0 else text


def _write(header: Iterable[str], rows: Iterable[Iterable[str]], out: TextIO | None) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    text = buf.getvalue()
    if out is not None:
        out.write(text)
    return text


def emit_accounts_csv(
    series: AccountsSeries, out: TextIO | None = None, decimals: int | None = 6
) -> str:
    """Write ``series`` in the ingestion dialect; ``decimals=None`` keeps full precision."""
    rows = (
        [p] + [_fmt(getattr(a, f), decimals) for f in ACCOUNTS_HEADER[1:]]
        for p, a in series
    )
    return _write(ACCOUNTS_HEADER, rows, out)


def emit_ratio_csv(rows: Iterable[RatioRow], out: TextIO | None = None) -> str:
    body = (
        [row.period] + [_fmt(getattr(row, f), 6) for f in RATIO_HEADER[1:]] for row in rows
    )
    return _write(RATIO_HEADER, body, out)


def read_ratio_csv(source: BinaryIO | TextIO | bytes | str) -> list[RatioRow]:
    """Parse a ratio table written by :func:`emit_ratio_csv`."""
    rows = _data_rows(source)
    try:
        lineno, header = next(rows)
    except StopIteration:
        raise ParseError(0, "empty input")
    if tuple(header) != RATIO_HEADER:
        raise ParseError(lineno, f"expected header {','.join(RATIO_HEADER)}")
    out = []
    for lineno, fields in rows:
        if len(fields) != len(RATIO_HEADER):
            raise ParseError(lineno, f"expected {len(RATIO_HEADER)} fields, got {len(fields)}")
        try:
            values = [float(f) for f in fields[1:]]
        except ValueError as exc:
            raise ParseError(lineno, str(exc)) from None
        out.append(RatioRow(fields[0], *values))
    return out
