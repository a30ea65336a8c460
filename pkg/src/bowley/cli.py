"""Command-line front end.

Exit codes: 0 success, 1 identity failure, 2 input/usage error,
3 divergence, 4 infeasible sector scenario.

Tables go to ``--output`` when given. ``sweep`` and ``empirical --csv``
print their table to stdout otherwise, and then send the summary to stderr.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path
from typing import Sequence, TextIO

from . import config as cfg
from .accounts import NationalAccounts, check_identities
from .dynamics import (
    EconomyParams,
    Status,
    Trajectory,
    simulate_sectors,
    simulate_single,
    sweep,
)
from .empirical import (
    STYLISED_RANGE,
    ParameterBox,
    bowley_range,
    emit_ratio_csv,
    ingest_accounts_csv,
    ratio_series,
)
from .errors import (
    AbsorberNegative,
    BowleyError,
    InvalidAccounts,
    NonPositiveWealth,
    NoSteadyState,
)

EXIT_OK = 0
EXIT_IDENTITY = 1
EXIT_USAGE = 2
EXIT_DIVERGED = 3
EXIT_INFEASIBLE = 4

DATA_DIR = Path(__file__).parent / "data"


class UsageError(Exception):
    pass


def fmt(x: float) -> str:
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    text = f"{x:.6f}"
    return text[1:] if text.startswith("-") and float(text) == 0 else text


def render(header: Sequence[str], rows: Sequence[Sequence[str]], style: str) -> str:
    if style == "csv":
        lines = [",".join(header)] + [",".join(r) for r in rows]
        return "\n".join(lines) + "\n"
    widths = [max(len(str(c)) for c in col) for col in zip(header, *rows)]
    def line(cells):
        return "  ".join(str(c).rjust(w) for c, w in zip(cells, widths)).rstrip()
    sep = "  ".join("-" * w for w in widths)
    return "\n".join([line(header), sep] + [line(r) for r in rows]) + "\n"


def _emit_table(text: str, output: str | None, stdout: TextIO) -> bool:
    """Write a table to ``output`` or stdout; True when it went to stdout."""
    if output:
        Path(output).write_text(text, encoding="utf-8")
        return False
    stdout.write(text)
    return True


# ---------------------------------------------------------------- identities

IDENTITY_HEADER = ("identity", "name", "left", "right", "residual", "pass")


def cmd_identities(args, out: TextIO, err: TextIO) -> int:
    flags = {k: getattr(args, k) for k in ("C", "Y", "e", "pi", "W")}
    if args.csv:
        if any(v is not None for v in flags.values()):
            raise UsageError("give either --csv or the --C/--Y/--e/--pi/--W flags, not both")
        with open(args.csv, "rb") as fh:
            series = ingest_accounts_csv(fh)
        snapshots = [(p, a) for p, a in series if args.period is None or p == args.period]
        if not snapshots:
            raise UsageError(f"period {args.period!r} not found in {args.csv}")
    else:
        missing = [f"--{k}" for k, v in flags.items() if v is None]
        if missing:
            raise UsageError("missing " + ", ".join(missing))
        try:
            snapshots = [("", NationalAccounts(**flags))]
        except InvalidAccounts as exc:
            raise UsageError(str(exc)) from None

    header = IDENTITY_HEADER if not args.csv else ("period",) + IDENTITY_HEADER
    rows = []
    ok = True
    extra = []
    for period, acc in snapshots:
        report = check_identities(acc, args.tol)
        ok = ok and report.all_passed
        for c in report:
            row = [f"Eq.{c.identity}", c.name, fmt(c.left), fmt(c.right),
                   f"{c.residual:.3e}", "pass" if c.passed else "FAIL"]
            rows.append([period] + row if args.csv else row)
        extra.append(
            f"{period + ': ' if period else ''}rho r/omega={fmt(report.rho_by_omega)} "
            f"r/gamma={fmt(report.rho_by_gamma)}"
        )
    out.write(render(header, rows, args.format))
    if args.format != "csv":
        for line in extra:
            out.write(line + "\n")
        out.write(("all identities pass" if ok else "identity failure") + f" (tol={args.tol:g})\n")
    return EXIT_OK if ok else EXIT_IDENTITY


# ---------------------------------------------------------------- simulate

TRAJECTORY_HEADER = ("step", "time", "W", "C", "pi", "e", "Y", "gamma", "beta")


def _params_from_args(args) -> EconomyParams:
    values: dict[str, str] = {}
    if args.config:
        values.update(cfg.read_params_file(args.config))
    for key in cfg.PARAM_KEYS:
        flag = getattr(args, key, None)
        if flag is not None:
            values[key] = flag
    values.update(cfg.parse_overrides(args.set or []))
    try:
        return cfg.build_params(values)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def trajectory_csv(traj: Trajectory) -> str:
    rows = [
        [str(i)] + [fmt(getattr(rec, f)) for f in TRAJECTORY_HEADER[1:]]
        for i, rec in enumerate(traj.records)
    ]
    return render(TRAJECTORY_HEADER, rows, "csv")


def simulate_summary(traj: Trajectory) -> str:
    p = traj.params
    if traj.status is Status.DIVERGED:
        return f"diverged: {traj.reason}"
    head = "converged" if traj.converged else f"not converged: {traj.reason}"
    beta = traj.final.beta
    pred = p.predicted_beta
    return (
        f"{head} β={fmt(beta)} predicted={fmt(pred)} "
        f"residual={fmt(abs(beta - pred))} steps={traj.steps}"
    )


def cmd_simulate(args, out: TextIO, err: TextIO) -> int:
    p = _params_from_args(args)
    traj = simulate_single(p)
    if args.output:
        Path(args.output).write_text(trajectory_csv(traj), encoding="utf-8")
    out.write(simulate_summary(traj) + "\n")
    return EXIT_OK if traj.converged else EXIT_DIVERGED


# ---------------------------------------------------------------- sweep

SWEEP_HEADER = ("index", "e", "r", "omega", "status", "steps", "beta", "predicted", "residual")


def cmd_sweep(args, out: TextIO, err: TextIO) -> int:
    base = _params_from_args(args)
    if bool(args.grid) == bool(args.grid_file):
        raise UsageError("give exactly one of --grid or --grid-file")
    spec = args.grid or Path(args.grid_file).read_text(encoding="utf-8").split("#", 1)[0].strip()
    try:
        grid = cfg.parse_grid(spec, base)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    rows = sweep(grid, base, max_workers=args.workers)
    table = [
        [str(r.index), fmt(r.wage_bill), fmt(r.profit_rate), fmt(r.consumption_rate),
         r.status.value, str(r.steps), fmt(r.beta), fmt(r.predicted), fmt(r.residual)]
        for r in rows
    ]
    on_stdout = _emit_table(render(SWEEP_HEADER, table, args.format), args.output, out)
    converged = [r for r in rows if r.status is Status.CONVERGED]
    summary = f"points={len(rows)} converged={len(converged)}"
    if converged:
        betas = [r.beta for r in converged]
        summary += (
            f" beta_min={fmt(min(betas))} beta_max={fmt(max(betas))}"
            f" max_residual={fmt(max(r.residual for r in converged))}"
        )
    (err if on_stdout else out).write(summary + "\n")
    return EXIT_OK


# ---------------------------------------------------------------- sectors


def cmd_sectors(args, out: TextIO, err: TextIO) -> int:
    scenario = cfg.read_scenario(args.scenario)
    burn_in = scenario.burn_in if args.burn_in is None else args.burn_in
    try:
        traj = simulate_sectors(
            scenario.sectors,
            r=scenario.r,
            omega=scenario.omega,
            horizon=scenario.horizon,
            step=scenario.step,
            relaxation=scenario.relaxation,
            initial_wealth=scenario.initial_wealth,
        )
    except (AbsorberNegative, NonPositiveWealth) as exc:
        out.write(f"infeasible: {exc}\n")
        return EXIT_INFEASIBLE
    except (NoSteadyState, ValueError) as exc:
        raise UsageError(str(exc)) from None

    names = traj.names
    header = ["time", "W", "C", "e", "pi", "Y", "beta"]
    for n in names:
        header += [f"{n}_e", f"{n}_pi", f"{n}_Y", f"{n}_beta"]
    rows = []
    for s in traj.steps:
        row = [fmt(v) for v in (s.time, s.W, s.C, s.e, s.pi, s.Y, s.beta)]
        for rec in s.sectors:
            row += [fmt(rec.e), fmt(rec.pi), fmt(rec.Y), fmt(rec.beta)]
        rows.append(row)
    if args.output:
        Path(args.output).write_text(render(header, rows, "csv"), encoding="utf-8")

    settled = traj.after(burn_in).aggregate_beta
    if settled.size == 0:
        raise UsageError(f"burn-in {burn_in} exceeds horizon {scenario.horizon}")
    lo, hi = float(settled.min()), float(settled.max())
    predicted = 1 - scenario.r / scenario.omega
    out.write(
        f"aggregate β after burn-in {burn_in:g}: min={fmt(lo)} max={fmt(hi)} "
        f"drift={fmt(hi - lo)} predicted={fmt(predicted)}\n"
    )
    for n in names:
        b = traj.sector_series(n)
        out.write(f"{n} β {fmt(b[0])} -> {fmt(b[-1])}\n")
    return EXIT_OK


# ---------------------------------------------------------------- empirical


def _range(spec: str | None, flag: str) -> tuple[float, float] | None:
    if spec is None:
        return None
    try:
        return cfg.parse_range(spec)
    except ValueError as exc:
        raise UsageError(f"{flag}: {exc}") from None


def _interval(lo: float, hi: float) -> str:
    return f"[{lo:.2f}, {hi:.2f}]"


def cmd_empirical(args, out: TextIO, err: TextIO) -> int:
    r = _range(args.r, "--r")
    omega = _range(args.omega, "--omega")
    c_share = _range(args.c_share, "--c-share")
    k_gdp = _range(args.k_gdp, "--k-gdp")
    if not any((r, omega, c_share, k_gdp, args.csv)):
        raise UsageError("nothing to do: give --r/--omega, --c-share/--k-gdp, or --csv")
    if (c_share is None) != (k_gdp is None):
        raise UsageError("--c-share and --k-gdp go together")
    if omega is not None and r is None:
        raise UsageError("--omega needs --r")

    lines = []
    if c_share is not None:
        if c_share[0] <= 0 or k_gdp[0] <= 0:
            raise UsageError("--c-share and --k-gdp must be > 0")
        macro = (c_share[0] / k_gdp[1], c_share[1] / k_gdp[0])
        if macro[0] == macro[1]:
            lines.append(f"omega={macro[0]:.2f}")
        else:
            lines.append(f"omega in {_interval(*macro)}")
        if omega is None:
            omega = macro
    if r is not None:
        if omega is None:
            raise UsageError("--r needs --omega or --c-share/--k-gdp")
        try:
            box = ParameterBox(r[0], r[1], omega[0], omega[1])
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        lines.append(f"beta in {_interval(*bowley_range(box))}")
        lines.append(f"stylised facts: beta in {_interval(*STYLISED_RANGE)}")

    summary_to = out
    if args.csv:
        with open(args.csv, "rb") as fh:
            series = ingest_accounts_csv(fh)
        if _emit_table(emit_ratio_csv(ratio_series(series)), args.output, out):
            summary_to = err
    for line in lines:
        summary_to.write(line + "\n")
    return EXIT_OK


# ---------------------------------------------------------------- parser


def _add_param_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="flat key=value parameter file")
    p.add_argument("--e", help="wage bill per year")
    p.add_argument("--r", help="profit rate per year")
    p.add_argument("--omega", help="consumption rate per year")
    p.add_argument("--w0", help="initial wealth")
    p.add_argument("--step", help="integration step in years")
    p.add_argument("--max-steps", dest="max_steps", help="step limit")
    p.add_argument("--tol", help="convergence tolerance on |gamma - omega|")
    p.add_argument("--set", action="append", metavar="KEY=VALUE",
                   help=f"override a parameter ({', '.join(cfg.PARAM_KEYS)})")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bowley", description="Bowley ratio identities, simulation and checks."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("identities", help="check the accounting identity chain")
    for name in ("C", "Y", "e", "pi", "W"):
        p.add_argument(f"--{name}", type=float)
    p.add_argument("--csv", help="accounts CSV instead of flags")
    p.add_argument("--period", help="only check this period of --csv")
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--format", choices=("csv", "table"), default="table")
    p.set_defaults(func=cmd_identities)

    p = sub.add_parser("simulate", help="integrate the single-economy wealth flow")
    _add_param_flags(p)
    p.add_argument("-o", "--output", help="trajectory CSV path")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep", help="simulate over an (e, r, omega) grid")
    _add_param_flags(p)
    p.add_argument("--grid", help="e.g. r=0.02:0.08:0.01,omega=0.20:0.25:0.05")
    p.add_argument("--grid-file", help="file holding a grid spec")
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--format", choices=("csv", "table"), default="csv")
    p.add_argument("-o", "--output", help="sweep table path")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("sectors", help="run a sectoral drift scenario")
    p.add_argument("scenario", help="scenario file (or 'young_us' for the bundled one)")
    p.add_argument("--burn-in", type=float, default=None)
    p.add_argument("-o", "--output", help="sectoral trajectory CSV path")
    p.set_defaults(func=cmd_sectors)

    p = sub.add_parser("empirical", help="range check and ratio series")
    p.add_argument("--r", help="profit rate range lo:hi")
    p.add_argument("--omega", help="consumption rate range lo:hi")
    p.add_argument("--c-share", dest="c_share", help="consumption share of gdp, x or lo:hi")
    p.add_argument("--k-gdp", dest="k_gdp", help="capital to gdp ratio, x or lo:hi")
    p.add_argument("--csv", help="accounts CSV to turn into a ratio table")
    p.add_argument("-o", "--output", help="ratio table path")
    p.set_defaults(func=cmd_empirical)
    return parser


def _resolve_bundled(args) -> None:
    scenario = getattr(args, "scenario", None)
    if scenario and not Path(scenario).exists():
        bundled = DATA_DIR / f"{scenario}.scenario"
        if bundled.exists():
            args.scenario = str(bundled)


def main(argv: Sequence[str] | None = None, out: TextIO | None = None,
         err: TextIO | None = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    _resolve_bundled(args)
    try:
        return args.func(args, out, err)
    except (UsageError, BowleyError, OSError) as exc:
        err.write(f"bowley {args.command}: error: {exc}\n")
        if isinstance(exc, UsageError):
            err.write(f"usage: see 'bowley {args.command} --help'\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
