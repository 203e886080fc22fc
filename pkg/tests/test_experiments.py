"""Experiment trials, aggregation statistics, and deterministic records."""

import json

import numpy as np
import pytest
from scipy import stats

from mstlab import (
    EdgeLabeling,
    criterion_filter,
    census_experiment,
    derive_seed,
    run_census_trial,
    run_ln_trial,
    tightness_experiment,
    tree_distance,
)
from mstlab.experiments import _ln_graph, bootstrap_median_ci, _wald_point, default_probes


def test_ln_trial_pinned_value():
    record = run_ln_trial(3, 3, 2, master_seed=42, trial_index=0)
    assert record.outcome["L"] == 16
    assert record.outcome["seed"] == derive_seed(42, 0)


def test_ln_trial_pin_recomputed_via_criterion():
    # independent route: criterion filter + per-neighbor tree paths
    g = _ln_graph(3, 3, 2)
    lab = EdgeLabeling(derive_seed(42, 0))
    forest = criterion_filter(g, lab, mode="bfs")
    value = sum(tree_distance(forest, 0, w) for w in g.adjacency[0])
    assert value == 16


def test_ln_lower_bound_and_integrality():
    for i in range(30):
        record = run_ln_trial(3, 3, 2, master_seed=7, trial_index=i)
        assert isinstance(record.outcome["L"], int)
        assert record.outcome["L"] >= 6
    # amenable-control parameters run through the same path
    record = run_ln_trial(3, 2, 2, master_seed=7, trial_index=0)
    assert record.outcome["L"] >= 5


def test_trial_record_deterministic():
    a = run_ln_trial(3, 3, 2, master_seed=5, trial_index=3)
    b = run_ln_trial(3, 3, 2, master_seed=5, trial_index=3)
    assert a.json_line() == b.json_line()
    assert "wall_time" not in a.json_line()


def test_tightness_report_shape_and_streaming():
    records = []
    report = tightness_experiment(
        3, 3, [2, 3], trials=60, master_seed=11, workers=1, on_record=records.append
    )
    assert [r.params["n"] for r in records[:60]] == [2] * 60
    assert [r.trial_index for r in records[:60]] == list(range(60))
    assert len(records) == 120
    assert report.trials == 60
    assert report.probes == default_probes([r.outcome["L"] for r in records[:60]])
    assert report.m_star == int(
        np.percentile([r.outcome["L"] for r in records[:60]], 90, method="lower")
    )
    for level in report.levels:
        # CDF nondecreasing in M
        p_hats = [pt.p_hat for pt in level.cdf]
        assert p_hats == sorted(p_hats)
        # median consistent with the CDF crossing at one half
        values = np.asarray(
            [r.outcome["L"] for r in records if r.params["n"] == level.n]
        )
        assert np.mean(values <= level.median) >= 0.5
        assert np.mean(values < level.median) <= 0.5
        # nondegenerate CIs are positive
        for pt in level.cdf:
            if 0 < pt.p_hat < 1:
                assert pt.half_width > 0
        if values.min() != values.max():
            assert level.median_se >= 0
    json.dumps(report.to_json_obj())  # serializable
    rows = report.csv_rows()
    assert rows[0] == ("n", "M", "p_hat", "ci_half_width", "trials")
    assert len(rows) == 1 + 2 * len(report.probes)


def test_probe_below_lower_bound_gives_zero_cdf():
    report = tightness_experiment(3, 3, [2], trials=30, master_seed=2, probes=[5])
    point = report.levels[0].cdf[0]
    assert point.m == 5
    assert point.p_hat == 0.0
    assert not point.wald_ok


def test_single_trial_degenerate_cis_flagged():
    report = tightness_experiment(3, 3, [2], trials=1, master_seed=3)
    assert not report.ci_reliable
    level = report.levels[0]
    assert level.median_ci[0] == level.median_ci[1] == level.median
    assert level.median_se == 0.0


def test_degenerate_stub_statistics():
    values = [7, 7, 7, 7]
    low, high, se = bootstrap_median_ci(values, boot_seed=1)
    assert low == high == 7.0 and se == 0.0
    # CDF is a step function at the common value
    arr = np.asarray(values)
    assert _wald_point(arr, 6).p_hat == 0.0
    assert _wald_point(arr, 7).p_hat == 1.0


def test_wald_guard():
    arr = np.asarray([6] * 5 + [30] * 200)
    point = _wald_point(arr, 6)
    assert not point.wald_ok  # n * p_hat = 5 < 10
    point = _wald_point(arr, 30)
    assert not point.wald_ok  # upper tail fails the guard
    arr = np.asarray([6] * 100 + [30] * 100)
    assert _wald_point(arr, 6).wald_ok


def test_worker_counts_agree():
    serial, pooled = [], []
    a = tightness_experiment(3, 3, [2], 30, 21, workers=1, on_record=serial.append)
    b = tightness_experiment(3, 3, [2], 30, 21, workers=2, on_record=pooled.append)
    assert [r.json_line() for r in serial] == [r.json_line() for r in pooled]
    assert a.to_json_obj() == b.to_json_obj()


def test_seed_range_self_consistency_ks():
    # disjoint trial-index ranges act like independent samples of one law
    ga = [run_ln_trial(3, 3, 2, 42, i).outcome["L"] for i in range(2000)]
    gb = [run_ln_trial(3, 3, 2, 42, i).outcome["L"] for i in range(2000, 4000)]
    statistic = stats.ks_2samp(ga, gb).statistic
    critical_5pct = 1.358 * (2 / 2000) ** 0.5
    assert statistic < critical_5pct


def test_tightness_input_validation():
    with pytest.raises(ValueError):
        tightness_experiment(3, 3, [], 10, 0)
    with pytest.raises(ValueError):
        tightness_experiment(3, 3, [2, 2], 10, 0)
    with pytest.raises(ValueError):
        tightness_experiment(3, 3, [2], 0, 0)


def test_census_trial_record_keys():
    record = run_census_trial("grid", 8, 3, 3, 2, master_seed=5, seed_index=1)
    obj = record.to_json_obj()
    for key in (
        "seed",
        "window",
        "retained",
        "removed",
        "unknown",
        "core_vertices",
        "core_components",
    ):
        assert key in obj
    assert obj["seed"] == derive_seed(5, 1)
    assert obj["retained"] + obj["removed"] + obj["unknown"] == 2 * 8 * 8 - 8 - 8


def test_census_matched_seeds_across_sizes():
    records = []
    aggregate = census_experiment(
        "grid", [8, 10], seeds=4, master_seed=9, workers=1, on_record=records.append
    )
    by_size = {}
    for record in records:
        by_size.setdefault(record.params["size"], []).append(record)
    assert [r.outcome["seed"] for r in by_size[8]] == [
        r.outcome["seed"] for r in by_size[10]
    ]
    assert aggregate.seeds == 4
    level = aggregate.levels[0]
    ratios = [
        r.outcome["core_components"] / r.outcome["core_vertices"] for r in by_size[8]
    ]
    assert level.mean_components_per_core_vertex == pytest.approx(np.mean(ratios))
    json.dumps(aggregate.to_json_obj())
    rows = aggregate.csv_rows()
    assert len(rows) == 1 + 2


def test_census_empty_core_rejected():
    with pytest.raises(ValueError):
        census_experiment("grid", [3], seeds=1, master_seed=0, margin=2)


def test_census_unknown_fraction_decreases_with_window_size():
    aggregate = census_experiment("grid", [12, 20], seeds=8, master_seed=13)
    small, big = aggregate.levels
    slack = 2.0 * (small.se_unknown_fraction**2 + big.se_unknown_fraction**2) ** 0.5
    assert big.mean_unknown_fraction <= small.mean_unknown_fraction + slack


def test_census_input_validation():
    with pytest.raises(ValueError):
        census_experiment("hexagon", [5], seeds=2, master_seed=0)
    with pytest.raises(ValueError):
        census_experiment("grid", [], seeds=2, master_seed=0)
