"""Desk-scale Monte Carlo experiments over labeled product graphs.

Two experiments:

- ln-tightness: on the product of two finite rooted trees of matching depth,
  sum the spanning-tree distances from the root to its graph neighbors, and
  track how the distribution of that sum moves as the depth grows.
- census: classify windows of infinite products (or of the plane lattice) and
  count certified forest components meeting the window core.

Every trial is a pure function of (master seed, trial index, parameters), so
runs reproduce byte-for-byte at any worker count.
"""

from __future__ import annotations

import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .forests import kruskal_mst, tree_distances_from
from .graphs import Graph, RootedTreeSpec, build_rooted_tree, direct_product
from .labels import EdgeLabeling, derive_seed
from .windows import Window, census_components, classify_window, grid_window, tree_product_window

_Z95 = 1.96
_BOOTSTRAP_RESAMPLES = 1000
# Stream index separating bootstrap randomness from trial randomness.
_STATS_STREAM = 0x57A75


@dataclass
class TrialRecord:
    """One experiment trial; serialized deterministically (wall_time excluded)."""

    experiment: str
    master_seed: int
    trial_index: int
    params: dict
    outcome: dict
    wall_time: float = 0.0

    def to_json_obj(self) -> dict:
        obj = {
            "experiment": self.experiment,
            "master_seed": self.master_seed,
            "trial_index": self.trial_index,
            "params": self.params,
        }
        obj.update(self.outcome)
        return obj

    def json_line(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=True, separators=(",", ":"))


def _map_ordered(task, arg_tuples, workers):
    """Run task over arguments, yielding results in argument order."""
    arg_tuples = list(arg_tuples)
    if workers is None:
        workers = os.cpu_count() or 1
    if workers <= 1 or len(arg_tuples) <= 1:
        for args in arg_tuples:
            yield task(args)
        return
    chunk = max(1, len(arg_tuples) // (workers * 8))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        yield from pool.map(task, arg_tuples, chunksize=chunk)


@lru_cache(maxsize=None)
def _ln_graph(d: int, b: int, n: int) -> Graph:
    left = build_rooted_tree(RootedTreeSpec(d, n))
    right = build_rooted_tree(RootedTreeSpec(b, n))
    return direct_product(left, right)


def run_ln_trial(d: int, b: int, n: int, master_seed: int, trial_index: int) -> TrialRecord:
    """Label the depth-n tree product, take its spanning tree, sum root-neighbor distances."""
    start = time.perf_counter()
    g = _ln_graph(d, b, n)
    root = g.meta.root
    seed = derive_seed(master_seed, trial_index)
    tree = kruskal_mst(g, EdgeLabeling(seed), strict=True)
    dist = tree_distances_from(tree, root)
    value = sum(dist[w] for w in g.adjacency[root])
    return TrialRecord(
        experiment="ln-tightness",
        master_seed=master_seed,
        trial_index=trial_index,
        params={"d": d, "b": b, "n": n},
        outcome={"seed": seed, "L": value},
        wall_time=time.perf_counter() - start,
    )


def _ln_task(args):
    return run_ln_trial(*args)


@dataclass(frozen=True)
class CdfPoint:
    m: int
    p_hat: float
    half_width: float
    wald_ok: bool


@dataclass(frozen=True)
class TightnessLevel:
    n: int
    trials: int
    mean: float
    median: float
    median_ci: tuple[float, float]
    median_se: float
    cdf: tuple[CdfPoint, ...]


@dataclass(frozen=True)
class TightnessReport:
    """Distribution summaries of the root-neighbor distance sum per depth."""

    d: int
    b: int
    master_seed: int
    trials: int
    probes: tuple[int, ...]
    m_star: int
    levels: tuple[TightnessLevel, ...]
    diagnostics: dict
    ci_reliable: bool

    def to_json_obj(self) -> dict:
        return {
            "experiment": "ln-tightness",
            "d": self.d,
            "b": self.b,
            "master_seed": self.master_seed,
            "trials_per_level": self.trials,
            "probes": list(self.probes),
            "m_star": self.m_star,
            "ci_reliable": self.ci_reliable,
            "levels": [
                {
                    "n": lv.n,
                    "trials": lv.trials,
                    "mean": lv.mean,
                    "median": lv.median,
                    "median_ci": list(lv.median_ci),
                    "median_se": lv.median_se,
                    "cdf": [
                        {
                            "M": pt.m,
                            "p_hat": pt.p_hat,
                            "half_width": pt.half_width,
                            "wald_ok": pt.wald_ok,
                        }
                        for pt in lv.cdf
                    ],
                }
                for lv in self.levels
            ],
            "diagnostics": self.diagnostics,
        }

    def csv_rows(self) -> list[tuple]:
        rows = [("n", "M", "p_hat", "ci_half_width", "trials")]
        for lv in self.levels:
            for pt in lv.cdf:
                rows.append((lv.n, pt.m, f"{pt.p_hat:.9g}", f"{pt.half_width:.9g}", lv.trials))
        return rows


def bootstrap_median_ci(values, boot_seed: int, resamples: int = _BOOTSTRAP_RESAMPLES):
    """Percentile bootstrap for the median: returns (low, high, se)."""
    arr = np.asarray(values, dtype=np.float64)
    med = float(np.median(arr))
    if arr.size < 2:
        return med, med, 0.0
    rng = np.random.default_rng(boot_seed)
    idx = rng.integers(0, arr.size, size=(resamples, arr.size))
    meds = np.median(arr[idx], axis=1)
    low, high = np.percentile(meds, [2.5, 97.5])
    return float(low), float(high), float(meds.std(ddof=1))


def _wald_point(values: np.ndarray, m: int) -> CdfPoint:
    n = values.size
    p_hat = float(np.count_nonzero(values <= m)) / n
    half_width = _Z95 * (p_hat * (1.0 - p_hat) / n) ** 0.5
    wald_ok = n * p_hat >= 10 and n * (1.0 - p_hat) >= 10
    return CdfPoint(m=int(m), p_hat=p_hat, half_width=half_width, wald_ok=wald_ok)


def default_probes(values) -> tuple[int, ...]:
    """Probe thresholds: lower-quantile points of the smallest-depth sample."""
    arr = np.asarray(values)
    qs = np.percentile(arr, [50, 75, 90, 95, 99], method="lower")
    return tuple(sorted({int(q) for q in qs}))


def tightness_experiment(
    d: int,
    b: int,
    n_list,
    trials: int,
    master_seed: int,
    probes=None,
    workers: int = 1,
    on_record=None,
) -> TightnessReport:
    """Run `trials` labeled-product trials per depth and summarize the distributions.

    Records stream to on_record in deterministic (depth-major, index) order.
    Probe thresholds default to quantiles of the smallest depth's sample.
    """
    n_list = list(n_list)
    if not n_list or trials < 1:
        raise ValueError("need at least one depth and one trial")
    if len(set(n_list)) != len(n_list):
        raise ValueError("depths must be distinct")
    values_by_n: dict[int, list[int]] = {n: [] for n in n_list}
    args = [(d, b, n, master_seed, i) for n in n_list for i in range(trials)]
    for record in _map_ordered(_ln_task, args, workers):
        values_by_n[record.params["n"]].append(record.outcome["L"])
        if on_record is not None:
            on_record(record)

    n_sorted = sorted(n_list)
    base = np.asarray(values_by_n[n_sorted[0]])
    probes = default_probes(base) if probes is None else tuple(sorted(set(int(p) for p in probes)))
    m_star = int(np.percentile(base, 90, method="lower"))

    stats_master = derive_seed(master_seed, _STATS_STREAM)
    levels = []
    for n in n_list:
        arr = np.asarray(values_by_n[n])
        low, high, se = bootstrap_median_ci(arr, derive_seed(stats_master, n))
        levels.append(
            TightnessLevel(
                n=n,
                trials=int(arr.size),
                mean=float(arr.mean()),
                median=float(np.median(arr)),
                median_ci=(low, high),
                median_se=se,
                cdf=tuple(_wald_point(arr, m) for m in probes),
            )
        )

    diagnostics = _trend_diagnostics(values_by_n, n_sorted, m_star, levels)
    return TightnessReport(
        d=d,
        b=b,
        master_seed=master_seed,
        trials=trials,
        probes=probes,
        m_star=m_star,
        levels=tuple(levels),
        diagnostics=diagnostics,
        ci_reliable=trials >= 100,
    )


def _trend_diagnostics(values_by_n, n_sorted, m_star, levels) -> dict:
    """Check medians rise and the CDF at the probe point falls, within 2 SE."""
    by_n = {lv.n: lv for lv in levels}
    pairs = []
    median_ok = True
    cdf_ok = True
    for lo, hi in zip(n_sorted, n_sorted[1:]):
        a, bb = by_n[lo], by_n[hi]
        med_slack = 2.0 * (a.median_se**2 + bb.median_se**2) ** 0.5
        med_pass = bb.median >= a.median - med_slack
        pa = _wald_point(np.asarray(values_by_n[lo]), m_star)
        pb = _wald_point(np.asarray(values_by_n[hi]), m_star)
        se_a, se_b = pa.half_width / _Z95, pb.half_width / _Z95
        cdf_slack = 2.0 * (se_a**2 + se_b**2) ** 0.5
        cdf_pass = pb.p_hat <= pa.p_hat + cdf_slack
        median_ok = median_ok and med_pass
        cdf_ok = cdf_ok and cdf_pass
        pairs.append(
            {
                "n_low": lo,
                "n_high": hi,
                "median_low": a.median,
                "median_high": bb.median,
                "median_pass": med_pass,
                "p_hat_low": pa.p_hat,
                "p_hat_high": pb.p_hat,
                "cdf_pass": cdf_pass,
            }
        )
    return {
        "m_star": m_star,
        "median_trend_ok": median_ok,
        "cdf_trend_ok": cdf_ok,
        "pairs": pairs,
    }


@lru_cache(maxsize=8)
def _census_window(family: str, size: int, d: int, b: int, margin: int) -> Window:
    if family == "tree-product":
        return tree_product_window(d, b, size, margin)
    if family == "grid":
        return grid_window(size, size, margin)
    raise ValueError(f"unknown window family {family!r}")


def run_census_trial(
    family: str, size: int, d: int, b: int, margin: int, master_seed: int, seed_index: int
) -> TrialRecord:
    """Classify one window under one derived seed and census its core components."""
    start = time.perf_counter()
    window = _census_window(family, size, d, b, margin)
    seed = derive_seed(master_seed, seed_index)
    classification = classify_window(window, EdgeLabeling(seed))
    census = census_components(window, classification)
    params = {"family": family, "size": size, "margin": margin}
    if family == "tree-product":
        params.update({"d": d, "b": b})
    return TrialRecord(
        experiment="census",
        master_seed=master_seed,
        trial_index=seed_index,
        params=params,
        outcome={
            "seed": seed,
            "window": window.descriptor,
            "retained": census.retained,
            "removed": census.removed,
            "unknown": census.unknown,
            "core_vertices": census.core_vertices,
            "core_components": census.core_components,
        },
        wall_time=time.perf_counter() - start,
    )


def _census_task(args):
    return run_census_trial(*args)


@dataclass(frozen=True)
class CensusLevel:
    descriptor: str
    size: int
    seeds: int
    mean_components_per_core_vertex: float
    std_components_per_core_vertex: float
    ci_half_width: float
    mean_unknown_fraction: float
    se_unknown_fraction: float


@dataclass(frozen=True)
class CensusAggregate:
    """Census summaries per window size; component counts are core-restricted upper bounds."""

    family: str
    params: dict
    master_seed: int
    seeds: int
    levels: tuple[CensusLevel, ...]
    note: str = (
        "core_components upper-bounds the ambient component count met by the "
        "core: pending unknown edges can only merge components"
    )

    def to_json_obj(self) -> dict:
        return {
            "experiment": "census",
            "family": self.family,
            "params": self.params,
            "master_seed": self.master_seed,
            "seeds": self.seeds,
            "note": self.note,
            "levels": [
                {
                    "window": lv.descriptor,
                    "size": lv.size,
                    "seeds": lv.seeds,
                    "mean_components_per_core_vertex": lv.mean_components_per_core_vertex,
                    "std_components_per_core_vertex": lv.std_components_per_core_vertex,
                    "ci_half_width": lv.ci_half_width,
                    "mean_unknown_fraction": lv.mean_unknown_fraction,
                    "se_unknown_fraction": lv.se_unknown_fraction,
                }
                for lv in self.levels
            ],
        }

    def csv_rows(self) -> list[tuple]:
        rows = [
            (
                "size",
                "window",
                "seeds",
                "mean_components_per_core_vertex",
                "ci_half_width",
                "mean_unknown_fraction",
                "se_unknown_fraction",
            )
        ]
        for lv in self.levels:
            rows.append(
                (
                    lv.size,
                    lv.descriptor,
                    lv.seeds,
                    f"{lv.mean_components_per_core_vertex:.9g}",
                    f"{lv.ci_half_width:.9g}",
                    f"{lv.mean_unknown_fraction:.9g}",
                    f"{lv.se_unknown_fraction:.9g}",
                )
            )
        return rows


def census_experiment(
    family: str,
    sizes,
    seeds: int,
    master_seed: int,
    d: int = 3,
    b: int = 3,
    margin: int = 2,
    workers: int = 1,
    on_record=None,
) -> CensusAggregate:
    """Census each window size under `seeds` matched seeds; summarize per size.

    Seeds are derived from the seed index alone, so different sizes see the
    same ambient labels for the same index.
    """
    sizes = list(sizes)
    if family not in ("tree-product", "grid"):
        raise ValueError(f"unknown window family {family!r}")
    if not sizes or seeds < 1:
        raise ValueError("need at least one size and one seed")
    for size in sizes:
        if not _census_window(family, size, d, b, margin).core:
            raise ValueError(
                f"window size {size} leaves an empty core at margin {margin}"
            )
    args = [(family, size, d, b, margin, master_seed, i) for size in sizes for i in range(seeds)]
    by_size: dict[int, list[TrialRecord]] = {size: [] for size in sizes}
    for record in _map_ordered(_census_task, args, workers):
        by_size[record.params["size"]].append(record)
        if on_record is not None:
            on_record(record)

    levels = []
    for size in sizes:
        records = by_size[size]
        ratios = np.asarray(
            [r.outcome["core_components"] / r.outcome["core_vertices"] for r in records]
        )
        edge_counts = np.asarray(
            [r.outcome["retained"] + r.outcome["removed"] + r.outcome["unknown"] for r in records]
        )
        unknown_frac = np.asarray([r.outcome["unknown"] for r in records]) / edge_counts
        k = len(records)
        std = float(ratios.std(ddof=1)) if k > 1 else 0.0
        se_unknown = float(unknown_frac.std(ddof=1) / k**0.5) if k > 1 else 0.0
        levels.append(
            CensusLevel(
                descriptor=records[0].outcome["window"],
                size=size,
                seeds=k,
                mean_components_per_core_vertex=float(ratios.mean()),
                std_components_per_core_vertex=std,
                ci_half_width=_Z95 * std / k**0.5 if k > 1 else 0.0,
                mean_unknown_fraction=float(unknown_frac.mean()),
                se_unknown_fraction=se_unknown,
            )
        )
    params = {"margin": margin}
    if family == "tree-product":
        params.update({"d": d, "b": b})
    return CensusAggregate(
        family=family,
        params=params,
        master_seed=master_seed,
        seeds=seeds,
        levels=tuple(levels),
    )
