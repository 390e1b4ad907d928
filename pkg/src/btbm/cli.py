"""Command line entry point ``btbm``.

Exit codes: 0 all checks passed, 1 a statistical check failed,
2 configuration error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from . import harness, kernel, measure
from .errors import (
    InconclusiveTestError,
    InvalidArgumentError,
    NumericalFailureError,
    OnDiagonalDivergenceError,
)

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_NUMERICAL = 0, 1, 2, 3


def _floats(text: str) -> list[float]:
    return [float(v) for v in str(text).split(",") if v.strip()]


def _add_common(p, out_default=None):
    p.add_argument("--config", help="TOML file; command-line flags override its keys")
    p.add_argument("--seed", type=int)
    p.add_argument("--out", default=out_default, help="output file ('-' for stdout)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="btbm", description="Brownian-time Brownian motion toolkit")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="simulate paths and write CSV or JSON")
    _add_common(p)
    p.add_argument("--variant")
    p.add_argument("--t", type=float)
    p.add_argument("--n-grid", type=int)
    p.add_argument("--replicates", type=int)
    p.add_argument("--format", choices=harness.FORMATS)

    p = sub.add_parser("density", help="evaluate the transition density")
    p.add_argument("--config")
    p.add_argument("--t", type=float)
    p.add_argument("--x", help="start point (comma separated for d > 1)")
    p.add_argument("--y", help="end point (comma separated for d > 1)")
    p.add_argument("--d", type=int, help="dimension; scalars are broadcast")
    p.add_argument("--mu", type=float, help="drift: the start point is shifted by mu*t")
    p.add_argument("--tol", type=float, help="relative quadrature tolerance")

    p = sub.add_parser("com-verify", help="change-of-measure checks")
    _add_common(p)
    p.add_argument("--mu", type=float)
    p.add_argument("--t", type=float)
    p.add_argument("--replicates", type=int)
    p.add_argument("--strata", type=int)
    p.add_argument("--clock-floor", type=float)
    p.add_argument("--alpha", type=float)

    p = sub.add_parser("variation", help="p-th variations per replicate (CSV)")
    _add_common(p)
    p.add_argument("--variant")
    p.add_argument("--t", type=float)
    p.add_argument("--n-grid", type=int)
    p.add_argument("--replicates", type=int)
    p.add_argument("--p", help="comma separated powers")

    p = sub.add_parser("localtime", help="local time profiles of the inner path (CSV)")
    _add_common(p)
    p.add_argument("--t", type=float)
    p.add_argument("--n-grid", type=int)
    p.add_argument("--replicates", type=int)
    p.add_argument("--epsilon", type=float)

    p = sub.add_parser("report", help="run one experiment and write its reports")
    _add_common(p)
    p.add_argument("--experiment", choices=harness.EXPERIMENTS)
    p.add_argument("--variant")
    p.add_argument("--t", type=float)
    p.add_argument("--mu", type=float)
    p.add_argument("--replicates", type=int)
    p.add_argument("--n-grid", type=int)
    p.add_argument("--format", choices=harness.FORMATS)
    p.add_argument("--timings", action="store_true", help="include runtimes in the output")
    return ap


DEFAULTS = {
    "simulate": dict(variant="simple", t=1.0, n_grid=256, replicates=1, format="csv"),
    "density": dict(t=1.0, x="0", y="0", d=None, mu=0.0, tol=1e-9),
    "com-verify": dict(mu=0.5, t=1.0, replicates=100_000, strata=8, clock_floor=None, alpha=0.01),
    "variation": dict(variant="simple", t=1.0, n_grid=2 ** 14, replicates=200, p="4"),
    "localtime": dict(t=1.0, n_grid=2 ** 16, replicates=1, epsilon=None),
    "report": dict(experiment=None, variant="simple", t=1.0, mu=0.0, replicates=200, n_grid=2 ** 14,
                   format="json", timings=False),
}

# TOML spelling of a few flags
ALIASES = {"n_replicates": "replicates", "output": "out", "n_strata": "strata"}


def resolve(args: argparse.Namespace) -> dict:
    """Merge defaults, TOML file and flags (flags win)."""
    merged = dict(DEFAULTS[args.command])
    options = {}
    if getattr(args, "config", None):
        try:
            with open(args.config, "rb") as fh:
                conf = tomllib.load(fh)
        except (OSError, tomllib.TOMLDecodeError) as exc:
            raise InvalidArgumentError(f"cannot read config {args.config}: {exc}") from exc
        options = conf.pop("options", {})
        for k, v in conf.items():
            k = ALIASES.get(k.replace("-", "_"), k.replace("-", "_"))
            if k not in merged and k not in ("seed", "out"):
                raise InvalidArgumentError(f"unknown key {k!r} for {args.command}")
            merged[k] = v
    for k, v in vars(args).items():
        if k in ("command", "config"):
            continue
        if v is not None and not (k == "timings" and v is False):
            merged[k] = v
    merged["options"] = options
    return merged


def _need_seed(c):
    if c.get("seed") is None:
        raise InvalidArgumentError("--seed is mandatory")
    return int(c["seed"])


def _cmd_density(c) -> int:
    x, y = _floats(c["x"]), _floats(c["y"])
    d = c["d"] or max(len(x), len(y))
    if len(x) == 1:
        x = x * d
    if len(y) == 1:
        y = y * d
    if len(x) != d or len(y) != d:
        raise InvalidArgumentError("x and y must have d components")
    x = [v + c["mu"] * c["t"] for v in x]
    cfg = kernel.QuadratureConfig(rel_tol=c["tol"])
    value, err = kernel.density_with_error(kernel.KernelQuery(c["t"], tuple(x), tuple(y)), cfg)
    print(json.dumps(dict(t=c["t"], x=x, y=y, d=d, value=value, error=err)))
    return EXIT_OK


def _finish(reports, c, fmt="json") -> int:
    harness.write_reports(reports, c.get("out"), fmt, bool(c.get("timings")))
    if c.get("out") not in (None, "-"):
        for r in reports:
            print(r.line(), file=sys.stderr)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def _cmd_com_verify(c) -> int:
    allowed = {"max_excluded_mass", "max_log_var", "n_boot", "clocks"}
    bad = set(c["options"]) - allowed
    if bad:
        raise InvalidArgumentError(f"unknown com-verify options: {sorted(bad)}")
    cfg = measure.ComVerifyConfig(
        mu=c["mu"], t=c["t"], n_replicates=c["replicates"], n_strata=c["strata"],
        clock_floor=c["clock_floor"], alpha=c["alpha"], seed=_need_seed(c), **c["options"],
    )
    reps = harness.com_verify_experiment(cfg)
    return _finish(reps, c)


def _cmd_report(c) -> int:
    if not c.get("experiment"):
        raise InvalidArgumentError("--experiment is required")
    cfg = harness.ExperimentConfig(
        experiment=c["experiment"], seed=_need_seed(c), variant=c["variant"], t=c["t"], mu=c["mu"],
        n_replicates=c["replicates"], n_grid=c["n_grid"], format=c["format"], options=c["options"],
    )
    reps = harness.run(cfg)
    return _finish(reps, c, cfg.format)


def _cmd_simulate(c) -> int:
    v = harness.parse_variant(c["variant"])
    rows = harness.path_rows(_need_seed(c), v, c["t"], c["n_grid"], c["replicates"])
    if c["format"] == "csv":
        text = harness.table_csv(harness.PATH_COLUMNS, rows)
    else:
        doc = dict(schema="btbm.paths", schema_version=harness.SCHEMA_VERSION, variant=v.label,
                   columns=list(harness.PATH_COLUMNS), rows=[list(r) for r in rows])
        text = json.dumps(doc) + "\n"
    harness.write_text(text, c.get("out"))
    return EXIT_OK


def _cmd_variation(c) -> int:
    v = harness.parse_variant(c["variant"])
    rows = harness.variation_rows(_need_seed(c), v, c["t"], c["n_grid"], c["replicates"], _floats(c["p"]))
    harness.write_text(harness.table_csv(harness.VARIATION_COLUMNS, rows), c.get("out"))
    return EXIT_OK


def _cmd_localtime(c) -> int:
    rows = harness.localtime_rows(_need_seed(c), c["t"], c["n_grid"], c["replicates"], c["epsilon"])
    harness.write_text(harness.table_csv(harness.LOCALTIME_COLUMNS, rows), c.get("out"))
    return EXIT_OK


COMMANDS = {
    "simulate": _cmd_simulate,
    "density": _cmd_density,
    "com-verify": _cmd_com_verify,
    "variation": _cmd_variation,
    "localtime": _cmd_localtime,
    "report": _cmd_report,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](resolve(args))
    except (OnDiagonalDivergenceError, NumericalFailureError) as exc:
        print(f"btbm: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (InvalidArgumentError, InconclusiveTestError, ValueError) as exc:
        print(f"btbm: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
