"""Experiment driver: configuration, replicate orchestration and output.

Every experiment is a pure function of its :class:`ExperimentConfig`.
Replicates draw from streams keyed by their index, so results do not
depend on the worker count (``BTBM_WORKERS``, default 1), and all
statistics are computed after the full collection.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from . import gof, kernel, measure, pathstats
from . import streams as st
from .errors import InvalidArgumentError
from .paths import (
    LevelSampler,
    make_partition,
    refine_inner_path,
    sample_inner_path,
    subsample_inner_path,
)
from .processes import ProcessVariant, sample_terminal, simulate_batch
from .report import DERIVED, PAPER, SCHEMA_VERSION, TRIVIAL, EstimateReport

EXPERIMENTS = ("marginal", "moments", "com_verify", "quartic", "pvariation", "localtime", "selfintersect")
FORMATS = ("csv", "json")
WORKERS_ENV = "BTBM_WORKERS"

REPORT_COLUMNS = (
    "statistic", "estimate", "std_error", "n_replicates", "target",
    "provenance", "tolerance", "rule", "passed", "seed",
)
VARIATION_COLUMNS = ("replicate", "n", "mesh", "p", "value")
LOCALTIME_COLUMNS = ("replicate", "level", "local_time")
PATH_COLUMNS = ("replicate", "index", "time", "inner", "clock", "value")


def parse_variant(value) -> ProcessVariant:
    """``"simple"``, ``"inf"``, ``"k<N>"`` (or ``"k:N"``), or a mapping of
    :class:`ProcessVariant` fields."""
    if isinstance(value, ProcessVariant):
        return value
    if isinstance(value, dict):
        return ProcessVariant(**value)
    s = str(value).strip().lower()
    if s in ("simple", "btbm"):
        return ProcessVariant.simple()
    if s in ("inf", "infinity"):
        return ProcessVariant.inf_excursion()
    if s.startswith("k"):
        try:
            return ProcessVariant.k_excursion(int(s[1:].lstrip(":")))
        except ValueError:
            pass
    raise InvalidArgumentError(f"unknown process variant {value!r}")


@dataclass(frozen=True)
class ExperimentConfig:
    """One experiment run.  ``seed`` is mandatory; ``options`` holds
    experiment-specific knobs (see :func:`run`)."""

    experiment: str
    seed: int
    variant: ProcessVariant = field(default_factory=ProcessVariant.simple)
    t: float = 1.0
    mu: float = 0.0
    n_replicates: int = 200
    n_grid: int = 2 ** 14
    output: Optional[str] = None
    format: str = "json"
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise InvalidArgumentError(f"unknown experiment {self.experiment!r}; choose from {EXPERIMENTS}")
        if self.seed is None or int(self.seed) != self.seed or self.seed < 0:
            raise InvalidArgumentError("seed must be a non-negative integer")
        object.__setattr__(self, "variant", parse_variant(self.variant))
        if not (math.isfinite(self.t) and self.t > 0):
            raise InvalidArgumentError("t must be positive")
        if not math.isfinite(self.mu):
            raise InvalidArgumentError("mu must be finite")
        if self.n_replicates < 1 or self.n_grid < 1:
            raise InvalidArgumentError("n_replicates and n_grid must be positive")
        if self.format not in FORMATS:
            raise InvalidArgumentError(f"format must be one of {FORMATS}")

    @classmethod
    def from_mapping(cls, m: dict) -> "ExperimentConfig":
        known = {f.name for f in fields(cls)}
        extra = set(m) - known
        if extra:
            raise InvalidArgumentError(f"unknown configuration keys: {sorted(extra)}")
        if "seed" not in m:
            raise InvalidArgumentError("seed is mandatory")
        return cls(**m)


# -- worker pool ----------------------------------------------------------

def worker_count() -> int:
    raw = os.environ.get(WORKERS_ENV, "1")
    try:
        n = int(raw)
    except ValueError:
        raise InvalidArgumentError(f"{WORKERS_ENV} must be an integer, got {raw!r}")
    return max(1, n)


def pmap(fn: Callable, items: Iterable) -> list:
    """Ordered map over a process pool; serial when one worker."""
    items = list(items)
    n = worker_count()
    if n == 1 or len(items) < 2:
        return [fn(*a) for a in items]
    with ProcessPoolExecutor(max_workers=n) as ex:
        return list(ex.map(_star, [(fn, a) for a in items]))


def _star(pair):
    fn, a = pair
    return fn(*a)


def _median_se(x) -> float:
    # large-sample SE of a median, density estimated by a normal fit
    x = np.asarray(x, dtype=float)
    return float(1.2533 * x.std(ddof=1) / math.sqrt(x.size)) if x.size > 1 else float("nan")


def _strictly(values, increasing: bool) -> bool:
    d = np.diff(np.asarray(values, dtype=float))
    return bool(np.all(d > 0) if increasing else np.all(d < 0))


# -- experiments ----------------------------------------------------------

def marginal_test(variant: ProcessVariant, t: float, n: int, seed: int, alpha: float = 0.01,
                  n_grid: int = 128) -> EstimateReport:
    """One-sample test of the time-``t`` marginal against the kernel CDF."""
    t0 = time.perf_counter()
    x, _ = sample_terminal(variant, t, n, seed, n_grid)
    x0 = float(np.atleast_1d(variant.start_point)[0])
    res = gof.ks_test(x - x0, kernel.cdf_function(t, 0.0))
    return EstimateReport(
        f"marginal_ks_pvalue[{variant.label}]", res.pvalue, n_replicates=n, provenance=PAPER,
        tolerance=alpha, rule="pvalue", runtime=time.perf_counter() - t0, seed=seed,
        details=dict(statistic=res.statistic, t=t, n_grid=n_grid),
    )


def marginal_equality(t: float, n: int, seed: int, variants: Sequence = ("simple", "k2", "k5", "inf"),
                      alpha: float = 0.01, n_grid: int = 128) -> list[EstimateReport]:
    """Pairwise two-sample tests between variants plus a one-sample test each.

    Each variant draws from its own derived seed so the samples are
    independent.
    """
    vs = [parse_variant(v) for v in variants]
    samples, reports = [], []
    for i, v in enumerate(vs):
        s = st.derive_seed(seed, 1, i)
        t0 = time.perf_counter()
        x, _ = sample_terminal(v, t, n, s, n_grid)
        samples.append(x)
        res = gof.ks_test(x, kernel.cdf_function(t, 0.0))
        reports.append(EstimateReport(
            f"marginal_ks_pvalue[{v.label}]", res.pvalue, n_replicates=n, provenance=PAPER,
            tolerance=alpha, rule="pvalue", runtime=time.perf_counter() - t0, seed=s,
            details=dict(statistic=res.statistic, t=t, n_grid=n_grid),
        ))
    for i in range(len(vs)):
        for j in range(i + 1, len(vs)):
            res = gof.two_sample_test(samples[i], samples[j])
            reports.append(EstimateReport(
                f"marginal_2sample_pvalue[{vs[i].label},{vs[j].label}]", res.pvalue,
                n_replicates=n, provenance=PAPER, tolerance=alpha, rule="pvalue", seed=seed,
                details=dict(statistic=res.statistic),
            ))
    return reports


def moments_experiment(t: float, n: int, seed: int, n_se: float = 3.0) -> list[EstimateReport]:
    """Monte Carlo moments of the terminal value against closed forms."""
    t0 = time.perf_counter()
    x, _ = sample_terminal(ProcessVariant.simple(), t, n, seed)
    ax = np.abs(x)
    out = []
    for p, absolute in ((1, True), (2, False), (3, True), (4, False)):
        v = ax ** p
        est = math.fsum(v) / n
        se = float(v.std(ddof=1) / math.sqrt(n))
        name = f"moment_abs_p{p}" if absolute else f"moment_p{p}"
        out.append(EstimateReport(
            name, est, se, n, kernel.moment(t, p, absolute), PAPER, n_se * se, "abs",
            runtime=time.perf_counter() - t0, seed=seed,
        ))
    return out


def quartic_experiment(t: float, grids: Sequence[int], n_replicates: int, seed: int,
                       variant: ProcessVariant = None, rel_tol: float = 0.05,
                       conditional_grid: Optional[int] = None,
                       conditional_rel_tol: float = 0.03) -> list[EstimateReport]:
    """Median fourth variation over replicates on each grid.

    Also reports the conditional value ``3 V^(2)(|B|)`` (median over the
    same replicates, or on ``conditional_grid`` if given) and, with more
    than one grid, whether the median absolute error to ``3t`` decreases.
    """
    variant = ProcessVariant.simple() if variant is None else variant
    out, errs = [], []
    target = 3.0 * t
    cond_by_grid = {}
    for n in grids:
        t0 = time.perf_counter()
        b = simulate_batch(variant, make_partition(t, n), st.derive_seed(seed, 2, n), n_replicates)
        v = (np.diff(b.values, axis=1) ** 4).sum(axis=1)
        c = 3.0 * (np.diff(b.clock, axis=1) ** 2).sum(axis=1)
        cond_by_grid[n] = c
        med = float(np.median(v))
        errs.append(float(np.median(np.abs(v - target))))
        out.append(EstimateReport(
            f"quartic_variation_median[n={n}]", med, _median_se(v), n_replicates, target, PAPER,
            rel_tol * target, "abs", runtime=time.perf_counter() - t0, seed=seed,
            details=dict(mean=float(v.mean()), mean_se=float(v.std(ddof=1) / math.sqrt(v.size)),
                         conditional_median=float(np.median(c)),
                         median_abs_error=errs[-1], variant=variant.label),
        ))
    if conditional_grid is not None:
        t0 = time.perf_counter()
        c = np.array([
            pathstats.conditional_fourth_variation(
                sample_inner_path(make_partition(t, conditional_grid), st.make_stream(seed, st.INNER, i, sub=1))
            )
            for i in range(n_replicates)
        ])
        out.append(EstimateReport(
            f"conditional_fourth_variation_median[n={conditional_grid}]", float(np.median(c)), _median_se(c),
            n_replicates, target, PAPER, conditional_rel_tol * target, "abs",
            runtime=time.perf_counter() - t0, seed=seed, details=dict(max_rel_error=float(np.max(np.abs(c / target - 1)))),
        ))
    if len(grids) > 1:
        out.append(EstimateReport(
            "quartic_error_decreasing", float(_strictly(errs, False)), n_replicates=n_replicates,
            target=1.0, provenance=PAPER, tolerance=0.0, rule="flag", seed=seed,
            details=dict(grids=list(grids), median_abs_error=errs),
        ))
    return out


def _refinement_path(seed: int, i: int, t: float, base: int, levels: int, ps: tuple):
    """Variations of one BTBM path under repeated bridge refinement."""
    rs = st.ReplicateStreams(seed, i)
    g_in, g_out = rs.inner(), rs.outer()
    inner = sample_inner_path(make_partition(t, base), g_in)
    sampler = LevelSampler()
    rows = []
    for lev in range(levels):
        if lev:
            inner = refine_inner_path(inner, g_in)
        x = sampler.query(inner.reflected, g_out)
        rows.append([float(pathstats.variation_values(x, p)) for p in ps])
    return rows


def pvariation_experiment(t: float, n_paths: int, seed: int, base: int = 2 ** 8, levels: int = 4,
                          ps: Sequence[float] = (3.0, 5.0), refine_by: int = 2) -> list[EstimateReport]:
    """Median ``V^(p)`` across bridge refinements of fixed paths.

    Grids are ``base * 2^(refine_by * j)`` for ``j < levels``.  Trend
    direction: increasing for ``p < 4``, decreasing for ``p > 4``.
    """
    t0 = time.perf_counter()
    steps = refine_by * (levels - 1) + 1
    res = np.array(pmap(_refinement_path, [(seed, i, t, base, steps, tuple(ps)) for i in range(n_paths)]))
    res = res[:, ::refine_by, :]
    grids = [base * 2 ** (refine_by * j) for j in range(levels)]
    med = np.median(res, axis=0)
    out = []
    for k, p in enumerate(ps):
        if p == 4:
            continue
        inc = p < 4
        out.append(EstimateReport(
            f"pvariation_trend[p={p:g}]", float(_strictly(med[:, k], inc)), n_replicates=n_paths,
            target=1.0, provenance=PAPER, tolerance=0.0, rule="flag",
            runtime=time.perf_counter() - t0, seed=seed,
            details=dict(grids=grids, medians=med[:, k].tolist(), direction="increasing" if inc else "decreasing"),
        ))
    return out


def _localtime_path(seed, i, t, n):
    inner = sample_inner_path(make_partition(t, n), st.make_stream(seed, st.INNER, i))
    prof = pathstats.local_time(inner)
    return pathstats.tanaka_residual(inner), abs(prof.integral() - t) / t


def localtime_experiment(t: float, n: int, n_paths: int, seed: int,
                         tanaka_tol: float = 0.10, occupation_tol: float = 0.02) -> list[EstimateReport]:
    t0 = time.perf_counter()
    r = np.array(pmap(_localtime_path, [(seed, i, t, n) for i in range(n_paths)]))
    rt = time.perf_counter() - t0
    return [
        EstimateReport("tanaka_residual_median", float(np.median(r[:, 0])), _median_se(r[:, 0]), n_paths,
                       0.0, PAPER, tanaka_tol, "le", runtime=rt, seed=seed,
                       details=dict(n=n, q90=float(np.quantile(r[:, 0], 0.9)))),
        EstimateReport("occupation_rel_error_max", float(np.max(r[:, 1])), n_replicates=n_paths,
                       target=0.0, provenance=PAPER, tolerance=occupation_tol, rule="le", runtime=rt, seed=seed,
                       details=dict(n=n, median=float(np.median(r[:, 1])))),
    ]


def _selfintersect_path(seed, i, t, n):
    inner = sample_inner_path(make_partition(t, n), st.make_stream(seed, st.INNER, i))
    o = pathstats.overlap_sum(inner)
    si = pathstats.self_intersection(inner)
    return o.value, si


def selfintersect_experiment(t: float, n: int, n_paths: int, seed: int, rel_tol: float = 0.10,
                             exact_paths: int = 1000, exact_max_n: int = 12) -> list[EstimateReport]:
    t0 = time.perf_counter()
    r = np.array(pmap(_selfintersect_path, [(seed, i, t, n) for i in range(n_paths)]))
    gap = np.abs(r[:, 0] / r[:, 1] - 1)
    out = [EstimateReport(
        "overlap_vs_self_intersection_gap_median", float(np.median(gap)), _median_se(gap), n_paths,
        0.0, PAPER, rel_tol, "le", runtime=time.perf_counter() - t0, seed=seed,
        details=dict(n=n, median_overlap=float(np.median(r[:, 0])), median_self_intersection=float(np.median(r[:, 1]))),
    )]
    if exact_paths:
        t0 = time.perf_counter()
        mismatches = 0
        for i in range(exact_paths):
            m = 1 + i % exact_max_n
            inner = sample_inner_path(make_partition(t, m), st.make_stream(seed, st.INNER, i, sub=2))
            fast = pathstats.overlap_sum(inner, exact=True)
            brute = pathstats.overlap_sum_bruteforce(inner, exact=True)
            mismatches += (fast.value != brute[0]) + (fast.indicator_value != brute[1])
        out.append(EstimateReport(
            "overlap_fast_vs_bruteforce_mismatches", float(mismatches), n_replicates=exact_paths,
            target=0.0, provenance=DERIVED, tolerance=0.0, rule="abs",
            runtime=time.perf_counter() - t0, seed=seed, details=dict(max_n=exact_max_n),
        ))
    return out


def com_verify_experiment(cfg: measure.ComVerifyConfig, mean_replicates: Optional[int] = None) -> list[EstimateReport]:
    mcfg = cfg if mean_replicates is None else measure.ComVerifyConfig(
        **{**{f.name: getattr(cfg, f.name) for f in fields(cfg)}, "n_replicates": mean_replicates})
    return [
        measure.conditional_weight_mean_test(mcfg),
        measure.stratified_distribution_test(cfg),
        measure.unconditional_distribution_test(cfg),
    ]


# -- conditional variance decay ---------------------------------------------

def _decay_path(seed, i, t, grids, n_outer, outer, exact_max_n):
    n_fine = max(grids)
    inner = sample_inner_path(make_partition(t, n_fine), st.make_stream(seed, st.INNER, i))
    a = inner.reflected
    levels, inv = np.unique(a, return_inverse=True)
    g = st.make_stream(seed, st.OUTER, i)
    v4 = {n: np.empty(n_outer) for n in grids}
    chunk = max(1, 4_000_000 // levels.size)
    for m0 in range(0, n_outer, chunk):
        m1 = min(n_outer, m0 + chunk)
        if outer == "line":
            x_lev = np.broadcast_to(levels, (m1 - m0, levels.size))
        else:
            steps = np.sqrt(np.diff(levels, prepend=0.0))
            x_lev = np.cumsum(steps * g.standard_normal((m1 - m0, levels.size)), axis=1)
        x = x_lev[:, inv]
        for n in grids:
            xs = x[:, :: n_fine // n]
            v4[n][m0:m1] = (np.diff(xs, axis=1) ** 4).sum(axis=1)
    var = [float(v4[n].var(ddof=1)) for n in grids]
    exact = []
    for n in grids:
        sub = subsample_inner_path(inner, n_fine // n)
        exact.append(pathstats.conditional_fourth_variation_variance(sub) if n <= exact_max_n else float("nan"))
    return var, exact


def variance_decay_study(t: float, grids: Sequence[int], n_paths: int, n_outer: int, seed: int,
                         outer: str = "brownian", exact_max_n: int = 2 ** 10) -> EstimateReport:
    """Conditional variance of ``V^(4)`` given a fixed inner path.

    Each inner path is simulated on the finest grid and subsampled to the
    coarser ones; ``n_outer`` independent outer motions are drawn and the
    sample variance of ``V^(4)`` is taken per grid.  The estimate is 1 when
    the median (over inner paths) is strictly decreasing along ``grids``.
    ``outer="line"`` replaces the outer motion by ``X(s) = s`` (variance 0).
    Exact conditional variances are attached for grids up to ``exact_max_n``.
    """
    grids = sorted(int(n) for n in grids)
    if len(grids) < 2:
        raise InvalidArgumentError("need at least two grid sizes")
    if any(max(grids) % n for n in grids):
        raise InvalidArgumentError("grid sizes must divide the finest grid")
    if outer not in ("brownian", "line"):
        raise InvalidArgumentError("outer must be 'brownian' or 'line'")
    if n_outer < 2:
        raise InvalidArgumentError("need at least two outer resamples")
    t0 = time.perf_counter()
    res = pmap(_decay_path, [(seed, i, t, tuple(grids), n_outer, outer, exact_max_n) for i in range(n_paths)])
    var = np.array([r[0] for r in res])
    exact = np.array([r[1] for r in res])
    med = np.median(var, axis=0)
    return EstimateReport(
        "conditional_variance_decreasing", float(_strictly(med, False)), n_replicates=n_paths,
        target=1.0, provenance=PAPER, tolerance=0.0, rule="flag",
        runtime=time.perf_counter() - t0, seed=seed,
        details=dict(grids=grids, n_outer=n_outer, outer=outer, median_variance=med.tolist(),
                     median_exact_variance=np.median(exact, axis=0).tolist(),
                     variance=var.tolist(), exact_variance=exact.tolist()),
    )


# -- dispatcher -------------------------------------------------------------

def run(config: ExperimentConfig) -> list[EstimateReport]:
    """Run the experiment named by ``config`` and write its output if asked.

    Options by experiment: ``marginal``: ``alpha``, ``variants`` (pairwise
    equality run when given); ``moments``: ``n_se``; ``com_verify``:
    ``n_strata``, ``clock_floor``, ``alpha``, ``mean_replicates``,
    ``n_boot``; ``quartic``: ``grids``, ``rel_tol``, ``conditional_grid``;
    ``pvariation``: ``base``, ``levels``, ``ps``; ``localtime``:
    ``tanaka_tol``, ``occupation_tol``; ``selfintersect``: ``rel_tol``,
    ``exact_paths``.
    """
    c, o = config, dict(config.options)
    e = c.experiment
    try:
        if e == "marginal":
            if "variants" in o:
                reps = marginal_equality(c.t, c.n_replicates, c.seed, o.pop("variants"), **o)
            else:
                reps = [marginal_test(c.variant, c.t, c.n_replicates, c.seed, **o)]
        elif e == "moments":
            reps = moments_experiment(c.t, c.n_replicates, c.seed, **o)
        elif e == "com_verify":
            mean_n = o.pop("mean_replicates", None)
            cfg = measure.ComVerifyConfig(c.mu, c.t, c.n_replicates, seed=c.seed, **o)
            reps = com_verify_experiment(cfg, mean_n)
        elif e == "quartic":
            reps = quartic_experiment(c.t, o.pop("grids", [c.n_grid]), c.n_replicates, c.seed,
                                      variant=c.variant, **o)
        elif e == "pvariation":
            reps = pvariation_experiment(c.t, c.n_replicates, c.seed, **o)
        elif e == "localtime":
            reps = localtime_experiment(c.t, c.n_grid, c.n_replicates, c.seed, **o)
        else:
            reps = selfintersect_experiment(c.t, c.n_grid, c.n_replicates, c.seed, **o)
    except TypeError as exc:
        # unknown option keyword
        raise InvalidArgumentError(f"bad options for {e}: {exc}") from exc
    if c.output:
        write_reports(reps, c.output, c.format)
    return reps


# -- output -----------------------------------------------------------------

def _jsonable(v):
    if isinstance(v, (np.floating, float)):
        v = float(v)
        return v if math.isfinite(v) else None
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (np.bool_,)):
        return bool(v)
    if isinstance(v, np.ndarray):
        return [_jsonable(x) for x in v.tolist()]
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


def reports_json(reports: Sequence[EstimateReport], timings: bool = False) -> str:
    """Versioned JSON document.  Runtimes are left out unless ``timings``,
    so that output is byte-identical across runs."""
    rows = []
    for r in reports:
        d = r.to_dict()
        if not timings:
            d.pop("runtime")
        rows.append(d)
    doc = dict(schema="btbm.reports", schema_version=SCHEMA_VERSION, reports=rows)
    return json.dumps(_jsonable(doc), indent=2, sort_keys=True) + "\n"


def _fmt(v):
    if isinstance(v, bool) or isinstance(v, np.bool_):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return repr(float(v)) if math.isfinite(v) else ""
    return "" if v is None else str(v)


def table_csv(columns: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def reports_csv(reports: Sequence[EstimateReport]) -> str:
    return table_csv(REPORT_COLUMNS, ([getattr(r, c) for c in REPORT_COLUMNS] for r in reports))


def write_text(text: str, path: Optional[str]) -> None:
    if path in (None, "-"):
        import sys

        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def write_reports(reports, path, fmt="json", timings=False) -> None:
    write_text(reports_json(reports, timings) if fmt == "json" else reports_csv(reports), path)


def variation_rows(seed: int, variant: ProcessVariant, t: float, n: int, n_replicates: int, ps):
    """``(replicate, n, mesh, p, value)`` rows for the ``variation`` command."""
    b = simulate_batch(variant, make_partition(t, n), seed, n_replicates)
    mesh = t / n
    x = b.values if b.values.ndim == 2 else b.values[..., 0]
    for p in ps:
        vals = pathstats.variation_values(x, p)
        for r in range(n_replicates):
            yield (r, n, mesh, float(p), float(vals[r]))


def localtime_rows(seed: int, t: float, n: int, n_replicates: int, epsilon: Optional[float] = None):
    """``(replicate, level, local_time)`` rows for the ``localtime`` command."""
    for r in range(n_replicates):
        inner = sample_inner_path(make_partition(t, n), st.make_stream(seed, st.INNER, r))
        prof = pathstats.local_time(inner, epsilon=epsilon)
        for a, v in zip(prof.levels, prof.values):
            yield (r, float(a), float(v))


def path_rows(seed: int, variant: ProcessVariant, t: float, n: int, n_replicates: int):
    """``(replicate, index, time, inner, clock, value)`` rows for ``simulate``."""
    if variant.dimension != 1:
        raise InvalidArgumentError("path output supports one-dimensional outer processes only")
    part = make_partition(t, n)
    b = simulate_batch(variant, part, seed, n_replicates)
    for r in range(n_replicates):
        for k in range(n + 1):
            yield (r, k, float(part.times[k]), float(b.inner[r, k]), float(b.clock[r, k]), float(b.values[r, k]))
