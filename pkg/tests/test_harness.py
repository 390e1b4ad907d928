import json

import numpy as np
import pytest

from btbm import harness, pathstats
from btbm import streams as st
from btbm.errors import InvalidArgumentError
from btbm.paths import make_partition, sample_inner_path
from btbm.report import EstimateReport


def test_parse_variant():
    assert harness.parse_variant("simple").label == "simple"
    assert harness.parse_variant("k3").label == harness.parse_variant("k:3").label
    assert harness.parse_variant("inf").label == harness.parse_variant("inf").label
    for bad in ("k", "kx", "brownian", "k0"):
        with pytest.raises((InvalidArgumentError, ValueError)):
            harness.parse_variant(bad)


def test_config_validation():
    with pytest.raises(InvalidArgumentError):
        harness.ExperimentConfig("nope", seed=1)
    with pytest.raises(InvalidArgumentError):
        harness.ExperimentConfig("moments", seed=-1)
    with pytest.raises(InvalidArgumentError):
        harness.ExperimentConfig("moments", seed=1, t=0.0)
    with pytest.raises(InvalidArgumentError):
        harness.ExperimentConfig("moments", seed=1, format="xml")
    with pytest.raises(InvalidArgumentError):
        harness.ExperimentConfig.from_mapping({"experiment": "moments"})
    with pytest.raises(InvalidArgumentError):
        harness.ExperimentConfig.from_mapping({"experiment": "moments", "seed": 1, "colour": 2})
    c = harness.ExperimentConfig.from_mapping({"experiment": "moments", "seed": 1, "variant": "k2"})
    assert c.variant.label == harness.parse_variant("k2").label


def test_bad_option_is_config_error():
    with pytest.raises(InvalidArgumentError):
        harness.run(harness.ExperimentConfig("moments", seed=1, n_replicates=200, options={"bogus": 1}))


def test_moments_report_shape():
    reps = harness.run(harness.ExperimentConfig("moments", seed=3, n_replicates=20_000))
    assert [r.statistic for r in reps] == ["moment_abs_p1", "moment_p2", "moment_abs_p3", "moment_p4"]
    for r in reps:
        assert r.n_replicates == 20_000 and r.std_error > 0
        assert r.tolerance == pytest.approx(3 * r.std_error)


def _json_bytes(reps):
    return harness.reports_json(reps).encode()


@pytest.mark.parametrize("exp,kw", [
    ("localtime", dict(n_grid=2 ** 10, n_replicates=6)),
    ("selfintersect", dict(n_grid=2 ** 10, n_replicates=6, options={"exact_paths": 24})),
    ("pvariation", dict(n_replicates=4, options={"base": 16, "levels": 3})),
])
def test_reports_byte_identical_across_workers(monkeypatch, exp, kw):
    monkeypatch.setenv(harness.WORKERS_ENV, "1")
    a = harness.run(harness.ExperimentConfig(exp, seed=11, **kw))
    monkeypatch.setenv(harness.WORKERS_ENV, "2")
    b = harness.run(harness.ExperimentConfig(exp, seed=11, **kw))
    assert _json_bytes(a) == _json_bytes(b)
    assert harness.reports_csv(a) == harness.reports_csv(b)


def test_worker_env_validation(monkeypatch):
    monkeypatch.setenv(harness.WORKERS_ENV, "many")
    with pytest.raises(InvalidArgumentError):
        harness.worker_count()
    monkeypatch.setenv(harness.WORKERS_ENV, "0")
    assert harness.worker_count() == 1


def test_output_files_identical(tmp_path):
    for fmt in harness.FORMATS:
        p1, p2 = tmp_path / f"a.{fmt}", tmp_path / f"b.{fmt}"
        for p in (p1, p2):
            harness.run(harness.ExperimentConfig("moments", seed=5, n_replicates=5000, output=str(p), format=fmt))
        assert p1.read_bytes() == p2.read_bytes()


def test_json_schema_and_nan():
    r = EstimateReport("x", 1.0, tolerance=0.5, target=1.2)
    doc = json.loads(harness.reports_json([r]))
    assert doc["schema"] == "btbm.reports" and doc["schema_version"] == 1
    row = doc["reports"][0]
    assert row["std_error"] is None
    assert row["passed"] is True
    assert "runtime" not in row
    assert "runtime" in json.loads(harness.reports_json([r], timings=True))["reports"][0]


def test_csv_columns():
    r = EstimateReport("x", 1.0, tolerance=0.5, target=1.2)
    lines = harness.reports_csv([r]).splitlines()
    assert lines[0] == ",".join(harness.REPORT_COLUMNS)
    assert lines[1].split(",")[0] == "x"


def test_row_generators():
    rows = list(harness.path_rows(1, harness.parse_variant("simple"), 1.0, 8, 2))
    assert len(rows) == 2 * 9 and len(rows[0]) == len(harness.PATH_COLUMNS)
    assert rows[0][1:] == (0, 0.0, 0.0, 0.0, 0.0)
    v = list(harness.variation_rows(1, harness.parse_variant("simple"), 1.0, 8, 3, [2, 4]))
    assert len(v) == 6 and {r[3] for r in v} == {2.0, 4.0}
    lt = list(harness.localtime_rows(1, 1.0, 64, 2))
    assert {r[0] for r in lt} == {0, 1} and all(r[2] >= 0 for r in lt)


def test_variation_rows_match_path_rows():
    prs = list(harness.path_rows(4, harness.parse_variant("simple"), 1.0, 16, 1))
    x = np.array([r[5] for r in prs])
    v = list(harness.variation_rows(4, harness.parse_variant("simple"), 1.0, 16, 1, [4]))
    assert v[0][4] == pytest.approx(pathstats.variation_values(x, 4), rel=1e-15)


def test_variance_decay_line_outer_is_zero():
    rep = harness.variance_decay_study(1.0, [16, 64, 256], n_paths=2, n_outer=20, seed=1, outer="line")
    # identical rows; only rounding of the sample mean remains
    assert np.all(np.array(rep.details["variance"]) < 1e-24)


def test_variance_decay_mc_matches_exact():
    # the sample variance of V^4 is heavy tailed; 2e5 draws give roughly 3% relative error
    rep = harness.variance_decay_study(1.0, [16, 64], n_paths=3, n_outer=200_000, seed=2)
    mc = np.array(rep.details["variance"])
    ex = np.array(rep.details["exact_variance"])
    assert np.allclose(mc, ex, rtol=0.15)


def test_exact_variance_dominates_diagonal():
    for i in range(5):
        inner = sample_inner_path(make_partition(1.0, 128), st.make_stream(3, st.INNER, i))
        assert pathstats.conditional_fourth_variation_variance(inner) >= pathstats.diagonal_variance_bound(inner)


def test_variance_decay_validation():
    with pytest.raises(InvalidArgumentError):
        harness.variance_decay_study(1.0, [16], 1, 10, 1)
    with pytest.raises(InvalidArgumentError):
        harness.variance_decay_study(1.0, [16, 24], 1, 10, 1)
    with pytest.raises(InvalidArgumentError):
        harness.variance_decay_study(1.0, [16, 32], 1, 10, 1, outer="zigzag")


def test_marginal_equality_structure():
    reps = harness.marginal_equality(1.0, 2000, 7, variants=("simple", "k2"))
    names = [r.statistic for r in reps]
    assert len(reps) == 3 and names[-1].startswith("marginal_2sample")
    assert reps[0].seed != reps[1].seed


def test_quartic_experiment_structure():
    reps = harness.quartic_experiment(1.0, [64, 256], 50, 1, conditional_grid=256)
    names = [r.statistic for r in reps]
    assert names == ["quartic_variation_median[n=64]", "quartic_variation_median[n=256]",
                     "conditional_fourth_variation_median[n=256]", "quartic_error_decreasing"]
    for r in reps[:2]:
        assert r.details["mean"] > 0
