"""Command-line front end.

Subcommands: curve, mttf, asymptotic, simulate, plotscript.  Flags override
config values, which override defaults.  Exit codes: 0 success, 2 config
error, 3 numeric error, 4 capacity error.
"""

import argparse
import math
import os
import sys

from .config import RunConfig, load_config
from .curves import read_csv, write_csv
from .errors import CapacityError, ConfigError, NumericError
from .hazards import afr, mttf
from .mdscore import (MdsCode, array_component_hazard, array_hazard,
                      asymptotic_component_hazard, component_hazard,
                      component_hazard_lower_bound, reliability_crossing_time,
                      system_survival)
from .simulate import SimConfig, run_simulation

QUANTITIES = ("component_hazard", "array_hazard", "survival", "density",
              "lower_bound", "base_hazard")


def _evaluate_point(quantity, x, cfg: RunConfig):
    model = cfg.hazard
    arr = cfg.array
    if quantity == "base_hazard":
        return model.hazard(x)
    if quantity == "survival":
        return system_survival(x, arr, model)
    if quantity == "component_hazard":
        return array_component_hazard(x, arr, model)
    if quantity == "array_hazard":
        return array_hazard(x, arr, model)
    if quantity == "density":
        return array_hazard(x, arr, model) * system_survival(x, arr, model)
    if quantity == "lower_bound":
        return component_hazard_lower_bound(x, arr, model)
    raise ConfigError(f"unknown quantity {quantity!r}")


def _out_path(args, cfg: RunConfig, what="output.path"):
    path = getattr(args, "out", None) or cfg.out_path
    if not path:
        raise ConfigError(f"{what}: missing (set it in [output] or pass --out)")
    return path


def cmd_curve(args) -> int:
    cfg = load_config(args.config)
    path = _out_path(args, cfg)
    rows = []
    for x in cfg.grid():
        try:
            value = _evaluate_point(args.quantity, float(x), cfg)
        except NumericError as exc:
            print(f"warning: {args.quantity} at x={x!r} h failed: {exc}",
                  file=sys.stderr)
            value = math.nan
        rows.append((float(x), value))
    write_csv(path, ["x_hours", args.quantity], rows)
    return 0


def cmd_mttf(args) -> int:
    cfg = load_config(args.config)
    survival = lambda y: system_survival(y, cfg.array, cfg.hazard)
    hours = mttf(survival, truncation_eps=1e-9, x_cap=cfg.grid_end,
                 points=cfg.hazard.breakpoints())
    rate = afr(hours)
    print(f"mttf_hours = {hours!r}")
    print(f"afr = {rate!r}")
    path = getattr(args, "out", None) or cfg.out_path
    if path:
        write_csv(path, ["mttf_hours", "afr"], [(hours, rate)])
    return 0


def _parse_rates(raw: str):
    try:
        rates = tuple(float(tok) for tok in raw.replace(",", " ").split())
    except ValueError:
        raise ConfigError(f"--rates: not a number list: {raw!r}")
    if not rates:
        raise ConfigError("--rates: needs at least one rate")
    for r in rates:
        if not 0.0 < r <= 1.0:
            raise ConfigError(f"--rates: rates must lie in (0, 1], got {r!r}")
    return rates


def cmd_asymptotic(args) -> int:
    cfg = load_config(args.config)
    if args.q is None:
        raise ConfigError("--q: missing (the asymptotic command needs q > 1)")
    if not args.q > 1:
        raise ConfigError(f"--q: must be > 1, got {args.q!r}")
    rates = _parse_rates(args.rates)
    path = _out_path(args, cfg)
    n = cfg.array.dims[0].n
    model = cfg.hazard
    a = reliability_crossing_time(model, args.q)
    lam_a = model.hazard(a)
    rows = []
    for r in rates:
        k = r * n
        if abs(k - round(k)) > 1e-9:
            raise ConfigError(
                f"--rates: rate {r!r} does not give an integer data count "
                f"for n={n} (k = {k!r})")
        code = MdsCode(n, int(round(k)))
        rows.append((
            r,
            component_hazard(a, code, model),
            asymptotic_component_hazard(args.q, r, lam_a),
            component_hazard_lower_bound(a, r, model),
        ))
    write_csv(path, ["r", "finite_n_mu_c", "asymptotic_mu_c", "lower_bound"], rows)
    return 0


def cmd_simulate(args) -> int:
    cfg = load_config(args.config)
    trials = args.trials if args.trials is not None else cfg.trials
    seed = args.seed if args.seed is not None else cfg.seed
    if trials is None:
        raise ConfigError("simulation.trials: missing (or pass --trials)")
    if seed is None:
        raise ConfigError("simulation.seed: missing (or pass --seed)")
    path = _out_path(args, cfg)
    grid = cfg.grid()
    try:
        sim = SimConfig(array=cfg.array, model=cfg.hazard, trials=trials,
                        seed=seed, grid=tuple(grid), workers=cfg.workers)
    except ValueError as exc:
        raise ConfigError(str(exc))
    outcome = run_simulation(sim)
    closed = [system_survival(float(x), cfg.array, cfg.hazard) for x in grid]
    rows = [(float(x), p, w, c) for x, p, w, c in
            zip(grid, outcome.survival_hat, outcome.half_width_95, closed)]
    summary = (f"mean_system_ttf_hours={outcome.mean_system_ttf!r} "
               f"stderr_hours={outcome.mean_ttf_stderr!r} "
               f"trials={outcome.trials} seed={outcome.seed}")
    write_csv(path, ["x_hours", "survival_hat", "half_width_95",
                     "survival_closed_form"], rows, comments=[summary])
    print(summary)
    return 0


_PLOT_TEMPLATE = '''#!/usr/bin/env python3
"""Plot the curves from the CSV files listed below (auto-generated)."""
import csv

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

CURVES = {paths!r}
LOGLOG = {loglog!r}
OUT = {png!r}

fig, ax = plt.subplots(figsize=(7.0, 5.0))
for path in CURVES:
    with open(path, encoding="utf-8") as fh:
        rows = [row for row in csv.reader(fh)
                if row and not row[0].startswith("#")]
    header, data = rows[0], rows[1:]
    xs = [float(row[0]) for row in data]
    for col in range(1, len(header)):
        ys = [float(row[col]) for row in data]
        ax.plot(xs, ys, label=f"{{path}}: {{header[col]}}")
if LOGLOG:
    ax.set_xscale("log")
    ax.set_yscale("log")
ax.set_xlabel("hours")
ax.grid(True, which="both", alpha=0.3)
ax.legend(fontsize=8)
fig.tight_layout()
fig.savefig(OUT, dpi=150)
print(f"wrote {{OUT}}")
'''


def cmd_plotscript(args) -> int:
    if not args.csvs:
        raise ConfigError("plotscript needs at least one CSV path")
    for path in args.csvs:
        read_csv(path)  # validates existence and header
    png = os.path.splitext(args.out)[0] + ".png"
    script = _PLOT_TEMPLATE.format(paths=list(args.csvs), loglog=bool(args.loglog),
                                   png=png)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(script)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mdsrel",
        description="Reliability analytics and Monte Carlo validation for "
                    "MDS-parity protected storage arrays")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, config=True):
        if config:
            p.add_argument("--config", required=True, help="config file path")
        p.add_argument("--out", help="output path (overrides output.path)")

    p = sub.add_parser("curve", help="evaluate a quantity on the time grid")
    add_common(p)
    p.add_argument("--quantity", required=True, choices=QUANTITIES)
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("mttf", help="mean time to failure and AFR of the array")
    add_common(p)
    p.set_defaults(func=cmd_mttf)

    p = sub.add_parser("asymptotic",
                       help="finite-size vs large-array hazard across code rates")
    add_common(p)
    p.add_argument("--q", type=float, help="reliability level 1/q (q > 1)")
    p.add_argument("--rates", required=True,
                   help="comma- or space-separated code rates in (0, 1]")
    p.set_defaults(func=cmd_asymptotic)

    p = sub.add_parser("simulate", help="Monte Carlo survival with closed-form overlay")
    add_common(p)
    p.add_argument("--trials", type=int, help="override simulation.trials")
    p.add_argument("--seed", type=int, help="override simulation.seed")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("plotscript", help="emit a matplotlib script for CSV curves")
    p.add_argument("csvs", nargs="+", help="CSV files produced by other commands")
    p.add_argument("--out", required=True, help="path of the script to write")
    p.add_argument("--loglog", action="store_true", help="log-log axes")
    p.set_defaults(func=cmd_plotscript)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (ValueError,) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except NumericError as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return 3
    except CapacityError as exc:
        print(f"capacity error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
