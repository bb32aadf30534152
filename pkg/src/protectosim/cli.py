"""
Command-line front end.

Exit status: 0 on success, 1 when a requested agreement check fails, 2 on
usage or configuration errors.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

from . import figures, scans
from .core import MeasurementGeometry
from .ensemble import EnsembleConfig, run_ensemble
from .errors import ConfigError, ProtectosimError
from .fileio import finite_or_blank, read_key_values, write_csv, write_curve_set
from .planner import params_from_mapping, plan

EXIT_OK, EXIT_CHECK_FAILED, EXIT_USAGE = 0, 1, 2


def _err(msg: str):
    print(f"protectosim: error: {msg}", file=sys.stderr)


def cmd_figure(args) -> int:
    curves = figures.build(args.id, args.set)
    for c in curves:
        for path in write_curve_set(c, args.out, args.format):
            print(path)
    return EXIT_OK


def cmd_validate(args) -> int:
    s_d_values = scans.parse_axis(args.sd)
    if s_d_values.size == 0:
        raise scans.EmptyGrid("no s_d values given")
    if min(s_d_values) < 0.0:
        raise ValueError("s_d values must be non-negative")
    rows = scans.cross_check(args.n, s_d_values, seed=args.seed, draws=args.draws)
    print(f"{'s_d':>8} {'exact':>10} {'sem':>10} {'continuum':>10} {'|diff|':>10}  ok")
    for r in rows:
        mark = "yes" if r.passes() else "NO"
        print(f"{r.s_d:8.4g} {r.exact:10.6f} {r.exact_sem:10.2e} {r.continuum:10.6f} "
              f"{r.difference:10.2e}  {mark}")
    if args.out:
        write_csv(
            Path(args.out) / "validate.csv",
            ["s_d", "exact", "exact_sem", "continuum", "abs_diff"],
            [(r.s_d, r.exact, r.exact_sem, r.continuum, r.difference) for r in rows],
        )
    return EXIT_OK if all(r.passes() for r in rows) else EXIT_CHECK_FAILED


ENSEMBLE_KEYS = ("runs", "seed", "s_d", "gamma", "eta", "xi", "sigma_p", "bins", "range_lo",
                 "range_hi", "name")


def ensemble_config_from_mapping(values: dict) -> EnsembleConfig:
    unknown = sorted(set(values) - set(ENSEMBLE_KEYS))
    if unknown:
        raise ConfigError("unknown ensemble key", key=unknown[0])

    def num(key, default):
        if key not in values:
            return default
        try:
            return scans.parse_number(values[key])
        except ValueError as exc:
            raise ConfigError(str(exc), key=key) from None

    def integer(key, default):
        v = num(key, default)
        if v != int(v):
            raise ConfigError("must be an integer", key=key)
        return int(v)

    if "s_d" not in values:
        raise ConfigError("missing required parameter", key="s_d")
    rng = None
    if ("range_lo" in values) != ("range_hi" in values):
        raise ConfigError("give both range_lo and range_hi", key="range_lo")
    if "range_lo" in values:
        rng = (num("range_lo", 0.0), num("range_hi", 0.0))
    try:
        geometry = MeasurementGeometry(num("gamma", math.pi / 4), num("eta", 0.0), num("xi", 0.1))
        return EnsembleConfig(
            runs=integer("runs", 100_000),
            seed=integer("seed", 0),
            s_d=num("s_d", 0.0),
            geometry=geometry,
            sigma_p=num("sigma_p", 0.03),
            bins=integer("bins", 80),
            range=rng,
        )
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def cmd_ensemble(args) -> int:
    values = read_key_values(args.config)
    name = values.pop("name", Path(args.config).stem)
    config = ensemble_config_from_mapping(values)
    report = run_ensemble(config, workers=args.workers)
    out = Path(args.out)
    write_csv(out / f"{name}_histogram.csv", ["bin_lo", "bin_hi", "count"], report.histogram_rows())
    summary = report.summary()
    write_csv(out / f"{name}_summary.csv", ["quantity", "value"],
              [(k, finite_or_blank(v)) for k, v in summary.items()])
    print(f"runs={report.runs} mean={report.sample_mean:.6g} (analytic {report.analytic.mean:.6g}) "
          f"variance={report.sample_variance:.6g} (analytic {report.analytic.variance:.6g})")
    if report.checks_skipped:
        print("notice: fewer than two runs; agreement checks skipped")
        return EXIT_OK
    print(f"z_mean={report.z_mean:+.3f} z_variance={report.z_variance:+.3f}")
    return EXIT_OK if report.agrees(3.0) else EXIT_CHECK_FAILED


def cmd_plan(args) -> int:
    params, s_d = params_from_mapping(read_key_values(args.params))
    rep = plan(params, s_d)
    lines = [
        f"most probable speed      {rep.speed:.6g} m/s",
        f"transit time             {rep.transit_time:.6g} s",
        f"displacement, no field   {rep.displacement_0 * 1e3:.4g} mm",
        f"displacement at s_d      {rep.displacement_env * 1e3:.4g} mm",
        f"displacement spread (SD) {rep.spread * 1e3:.4g} mm",
        f"relative change          {100 * rep.relative_change:.3g} % (linear), "
        f"{100 * rep.relative_change_nonlinear:.3g} % (unexpanded shift)",
        f"measurement strength xi  {rep.xi:.6g}"
        + ("  [weak-measurement regime]" if rep.weak_measurement else ""),
        f"disturbance bound        {rep.disturbance_bound:.4g} (max over gamma), "
        f"{rep.disturbance_at_gamma:.4g} (at configured gamma)",
    ]
    print("\n".join(lines))
    header = ["speed_m_per_s", "transit_time_s", "displacement_0_m", "displacement_env_m",
              "spread_m", "relative_change", "relative_change_nonlinear", "xi",
              "disturbance_bound", "disturbance_at_gamma", "weak_measurement"]
    row = (rep.speed, rep.transit_time, rep.displacement_0, rep.displacement_env, rep.spread,
           rep.relative_change, rep.relative_change_nonlinear, rep.xi, rep.disturbance_bound,
           rep.disturbance_at_gamma, rep.weak_measurement)
    write_csv(Path(args.out) / f"{Path(args.params).stem}_plan.csv", header, [row])
    return EXIT_OK


def cmd_sweep(args) -> int:
    quantity, axes = scans.sweep_from_mapping(read_key_values(args.spec))
    header, rows = scans.sweep(quantity, axes)
    path = Path(args.out) / f"{Path(args.spec).stem}_sweep.csv"
    write_csv(path, header, rows)
    print(path)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="protectosim", description=__doc__.strip().splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    f = sub.add_parser("figure", help="write curve data for a standard figure")
    f.add_argument("id", choices=sorted(figures.BUILDERS))
    f.add_argument("--out", default=".")
    f.add_argument("--format", choices=("csv", "svg", "both"), default="csv")
    f.add_argument("--set", action="append", metavar="KEY=VAL", default=[])
    f.set_defaults(func=cmd_figure)

    v = sub.add_parser("validate", help="compare exact and continuum flip probabilities")
    v.add_argument("--n", type=int, required=True, help="number of environment spins")
    v.add_argument("--sd", required=True, help="comma-separated s_d values")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--draws", type=int, default=20)
    v.add_argument("--out", default=None)
    v.set_defaults(func=cmd_validate)

    e = sub.add_parser("ensemble", help="run a Monte Carlo readout ensemble")
    e.add_argument("config")
    e.add_argument("--out", default=".")
    e.add_argument("--workers", type=int, default=1)
    e.set_defaults(func=cmd_ensemble)

    pl = sub.add_parser("plan", help="Stern-Gerlach experiment estimates")
    pl.add_argument("params")
    pl.add_argument("--out", default=".")
    pl.set_defaults(func=cmd_plan)

    s = sub.add_parser("sweep", help="scan a scalar output over a parameter grid")
    s.add_argument("spec")
    s.add_argument("--out", default=".")
    s.set_defaults(func=cmd_sweep)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ProtectosimError, ValueError) as exc:
        _err(str(exc))
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
