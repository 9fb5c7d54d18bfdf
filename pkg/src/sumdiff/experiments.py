"""Experiment configuration, deterministic Monte Carlo, enumeration, file IO.

Trials are addressed by (seed, N, trial_index), so records are fully
reproducible and independent of the worker count; aggregation keeps task
order, making CSV output byte-identical for any --threads value.
"""

from __future__ import annotations

import csv
import json
import math
import os
import statistics as pystats
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial
from io import StringIO
from typing import Iterable, Sequence

import numpy as np

from .errors import ExperimentAborted, ResourceBudgetError
from .predictions import PredictionBundle, asymptotic_bundle
from .sampling import GENERATOR_NAME, PFamily, SamplerSeed, p_of, sample, sample_uniforms
from .sets import (
    IntegerSet,
    LinearForm,
    diffset,
    form_image,
    rep_histogram,
    repeated_gap_pairs,
    sumset,
    tuple_statistic,
)
from .thresholds import classify_pair
from .bounds import BoundReport, bound_report

SCHEMA_VERSION = "1"
PAIR_BUDGET = 10**10
MAX_ENUMERATION_N = 26
MAX_K = 8


@dataclass(frozen=True)
class StatisticsSpec:
    """Which per-trial statistics to collect."""

    sizes: bool = True
    missing: bool = True
    max_k: int = 0
    forms: tuple[LinearForm, ...] = ()
    y: bool = False

    def __post_init__(self):
        if not 0 <= self.max_k <= MAX_K:
            raise ValueError(f"max_k must lie in [0, {MAX_K}]")


@dataclass(frozen=True)
class ExperimentConfig:
    n_list: tuple[int, ...]
    family: PFamily
    trials: int
    seed: int
    statistics: StatisticsSpec = StatisticsSpec()
    output: str = "csv"
    threads: int | str = "auto"

    def __post_init__(self):
        if not self.n_list or any(n < 1 for n in self.n_list):
            raise ValueError("n_list must contain positive integers")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in an unsigned 64-bit integer")
        if self.output not in ("csv", "json"):
            raise ValueError("output must be 'csv' or 'json'")
        if self.threads != "auto" and (not isinstance(self.threads, int) or self.threads < 1):
            raise ValueError("threads must be a positive integer or 'auto'")


def _reject_unknown(mapping: dict, allowed: Iterable[str], where: str) -> None:
    unknown = set(mapping) - set(allowed)
    if unknown:
        raise ValueError(f"unknown {where} fields: {sorted(unknown)}")


def _family_from_json(obj: dict) -> PFamily:
    _reject_unknown(obj, {"variant", "p", "c", "delta"}, "family")
    variant = obj.get("variant")
    if variant == "explicit":
        return PFamily.explicit(obj["p"])
    if variant == "power-law":
        return PFamily.power_law(obj["c"], obj["delta"])
    raise ValueError(f"unknown family variant {variant!r}")


def _statistics_from_json(obj: dict) -> StatisticsSpec:
    _reject_unknown(obj, {"sizes", "missing", "xk", "forms", "y"}, "statistics")
    forms = tuple(LinearForm(tuple(f)) for f in obj.get("forms", ()))
    return StatisticsSpec(
        sizes=bool(obj.get("sizes", True)),
        missing=bool(obj.get("missing", True)),
        max_k=int(obj.get("xk", 0)),
        forms=forms,
        y=bool(obj.get("y", False)),
    )


def config_from_dict(obj: dict) -> ExperimentConfig:
    _reject_unknown(
        obj, {"n_list", "family", "trials", "seed", "statistics", "output", "threads"}, "config"
    )
    threads = obj.get("threads", "auto")
    return ExperimentConfig(
        n_list=tuple(int(n) for n in obj["n_list"]),
        family=_family_from_json(obj["family"]),
        trials=int(obj["trials"]),
        seed=int(obj.get("seed", 0)),
        statistics=_statistics_from_json(obj.get("statistics", {})),
        output=obj.get("output", "csv"),
        threads=threads if threads == "auto" else int(threads),
    )


def load_config(path: str) -> ExperimentConfig:
    with open(path, encoding="utf-8") as fh:
        return config_from_dict(json.load(fh))


@dataclass(frozen=True)
class TrialRecord:
    n: int
    p: float
    trial_index: int
    set_size: int
    sumset_size: int | None = None
    diffset_size: int | None = None
    missing_sums: int | None = None
    missing_diffs: int | None = None
    form_sizes: dict[LinearForm, int] = field(default_factory=dict)
    form_missing: dict[LinearForm, int] = field(default_factory=dict)
    x: tuple[int, ...] = ()
    xp: tuple[int, ...] = ()
    y: int | None = None


def _check_partial_sum_identity(size: int, xs: Sequence[int], offset: int, what: str) -> None:
    # ||image| - offset - sum_{k<=m} (-1)^(k-1) X_k| <= X_m for every m
    partial = 0
    for m, xk in enumerate(xs, start=1):
        partial += xk if m % 2 == 1 else -xk
        if abs((size - offset) - partial) > xs[m - 1]:
            raise RuntimeError(
                f"partial-sum identity violated for {what} at m={m}: "
                f"size={size}, partials={xs}"
            )


def run_trial(config: ExperimentConfig, n: int, trial_index: int) -> TrialRecord:
    """One sampled set and all requested statistics; pure in (seed, N, trial)."""
    p = p_of(config.family, n)
    a = sample(n, p, SamplerSeed(config.seed, trial_index))
    spec = config.statistics
    total = 2 * n + 1

    sum_size = diff_size = miss_s = miss_d = None
    if spec.sizes or spec.missing:
        sum_size = sumset(a).count
        diff_size = diffset(a).count
        miss_s = total - sum_size
        miss_d = total - diff_size

    form_sizes: dict[LinearForm, int] = {}
    form_missing: dict[LinearForm, int] = {}
    for f in spec.forms:
        size = form_image(a, f).count
        form_sizes[f] = size
        form_missing[f] = f.weight * n - size

    xs: tuple[int, ...] = ()
    xps: tuple[int, ...] = ()
    y: int | None = None
    diff_hist = None
    if spec.max_k > 0:
        sum_hist = rep_histogram(a, "sum")
        diff_hist = rep_histogram(a, "diff")
        xs = tuple(tuple_statistic(sum_hist, k) for k in range(1, spec.max_k + 1))
        xps = tuple(tuple_statistic(diff_hist, k) for k in range(1, spec.max_k + 1))
        if sum_size is None:
            sum_size = sum_hist.support_size()
            diff_size = diff_hist.support_size()
        if a.count:
            _check_partial_sum_identity(sum_size, xs, 0, "sums")
            _check_partial_sum_identity(diff_size, xps, 1, "differences")
    if spec.y:
        if diff_hist is None:
            diff_hist = rep_histogram(a, "diff")
        y = repeated_gap_pairs(diff_hist)

    return TrialRecord(
        n=n,
        p=p,
        trial_index=trial_index,
        set_size=a.count,
        sumset_size=sum_size if (spec.sizes or spec.missing) else None,
        diffset_size=diff_size if (spec.sizes or spec.missing) else None,
        missing_sums=miss_s,
        missing_diffs=miss_d,
        form_sizes=form_sizes,
        form_missing=form_missing,
        x=xs,
        xp=xps,
        y=y,
    )


def _estimated_pair_ops(config: ExperimentConfig) -> float:
    """Upfront |A|^2 histogram cost; bit-parallel size kernels are not budgeted."""
    spec = config.statistics
    total = 0.0
    for n in config.n_list:
        p = p_of(config.family, n)
        mean_size = (n + 1) * p
        high = mean_size + 4.0 * math.sqrt(mean_size) + 8.0
        hists = 2 if spec.max_k > 0 else (1 if spec.y else 0)
        total += hists * high * high * config.trials
    return total


def _worker_count(config: ExperimentConfig, n_tasks: int) -> int:
    workers = (os.cpu_count() or 1) if config.threads == "auto" else int(config.threads)
    return max(1, min(workers, n_tasks))


def _trial_task(config: ExperimentConfig, task: tuple[int, int]) -> TrialRecord:
    return run_trial(config, task[0], task[1])


@dataclass(frozen=True)
class StatSummary:
    mean: float
    se: float
    min: float
    max: float
    q05: float
    q50: float
    q95: float
    prediction: float | None = None
    relative_error: float | None = None


def _summarize(values: Sequence[float], prediction: float | None) -> StatSummary:
    arr = np.asarray(values, dtype=float)
    se = float(arr.std(ddof=1) / math.sqrt(arr.size)) if arr.size > 1 else 0.0
    q05, q50, q95 = (float(q) for q in np.quantile(arr, [0.05, 0.5, 0.95]))
    rel = None
    if prediction is not None and prediction != 0:
        rel = (float(arr.mean()) - prediction) / prediction
    return StatSummary(
        mean=float(arr.mean()),
        se=se,
        min=float(arr.min()),
        max=float(arr.max()),
        q05=q05,
        q50=q50,
        q95=q95,
        prediction=prediction,
        relative_error=rel,
    )



def form_column_stem(form: LinearForm) -> str:
    return "form_" + "_".join(str(c) for c in form.coeffs)

def _record_statistics(record: TrialRecord) -> dict[str, float]:
    out: dict[str, float] = {"set_size": record.set_size}
    if record.sumset_size is not None:
        out["sumset_size"] = record.sumset_size
        out["diffset_size"] = record.diffset_size
    if record.missing_sums is not None:
        out["missing_sums"] = record.missing_sums
        out["missing_diffs"] = record.missing_diffs
    for f, size in record.form_sizes.items():
        stem = form_column_stem(f)
        out[f"{stem}_size"] = size
        out[f"{stem}_missing"] = record.form_missing[f]
    for k, xk in enumerate(record.x, start=1):
        out[f"x{k}"] = xk
    for k, xpk in enumerate(record.xp, start=1):
        out[f"xp{k}"] = xpk
    if record.y is not None:
        out["y"] = record.y
    return out


def _prediction_for(name: str, bundle: PredictionBundle | None) -> float | None:
    if bundle is None:
        return None
    table = {
        "set_size": (bundle.n + 1) * bundle.p,
        "sumset_size": bundle.S_pred,
        "diffset_size": bundle.D_pred,
        "missing_sums": bundle.Sc_pred,
        "missing_diffs": bundle.Dc_pred,
    }
    if name in table:
        return table[name]
    for f, (df, dfc) in bundle.forms.items():
        if name == f"{form_column_stem(f)}_size":
            return df
        if name == f"{form_column_stem(f)}_missing":
            return dfc
    return None


def summarize_records(
    records: Sequence[TrialRecord], config: ExperimentConfig
) -> dict[int, dict[str, StatSummary]]:
    summaries: dict[int, dict[str, StatSummary]] = {}
    for n in config.n_list:
        rows = [r for r in records if r.n == n]
        if not rows:
            continue
        bundle = None
        if config.family.variant == "power-law":
            diff_forms = tuple(f for f in config.statistics.forms if f.kind == "binary-difference")
            bundle = asymptotic_bundle(n, config.family, diff_forms)
        per_stat: dict[str, list[float]] = {}
        for r in rows:
            for name, value in _record_statistics(r).items():
                per_stat.setdefault(name, []).append(value)
        summaries[n] = {
            name: _summarize(vals, _prediction_for(name, bundle))
            for name, vals in per_stat.items()
        }
    return summaries


def run_experiment(
    config: ExperimentConfig,
) -> tuple[list[TrialRecord], dict[int, dict[str, StatSummary]]]:
    """All trials over n_list x [0, trials), in deterministic order."""
    estimated = _estimated_pair_ops(config)
    if estimated > PAIR_BUDGET:
        raise ResourceBudgetError(
            f"configuration needs ~{estimated:.2e} elementary operations "
            f"(budget {PAIR_BUDGET:.0e}); lower N, trials, or the collected statistics"
        )
    tasks = [(n, t) for n in config.n_list for t in range(config.trials)]
    workers = _worker_count(config, len(tasks))
    records: list[TrialRecord] = []
    try:
        if workers == 1:
            for task in tasks:
                records.append(_trial_task(config, task))
        else:
            chunk = max(1, math.ceil(len(tasks) / (workers * 8)))
            with ProcessPoolExecutor(max_workers=workers) as pool:
                for record in pool.map(partial(_trial_task, config), tasks, chunksize=chunk):
                    records.append(record)
    except Exception as exc:
        raise ExperimentAborted(
            f"trial failed after {len(records)} of {len(tasks)} records: {exc}",
            tuple(records),
        ) from exc
    return records, summarize_records(records, config)


# ---------------------------------------------------------------------------
# output formats


def _format_value(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def csv_columns(spec: StatisticsSpec) -> list[str]:
    cols = ["schema_version", "N", "p", "trial_index", "set_size"]
    if spec.sizes or spec.missing:
        cols += ["sumset_size", "diffset_size"]
    if spec.missing:
        cols += ["missing_sums", "missing_diffs"]
    for f in spec.forms:
        cols += [f"{form_column_stem(f)}_size", f"{form_column_stem(f)}_missing"]
    cols += [f"x{k}" for k in range(1, spec.max_k + 1)]
    cols += [f"xp{k}" for k in range(1, spec.max_k + 1)]
    if spec.y:
        cols.append("y")
    return cols


def _record_cells(record: TrialRecord, spec: StatisticsSpec) -> list:
    cells: list = [SCHEMA_VERSION, record.n, record.p, record.trial_index, record.set_size]
    if spec.sizes or spec.missing:
        cells += [record.sumset_size, record.diffset_size]
    if spec.missing:
        cells += [record.missing_sums, record.missing_diffs]
    for f in spec.forms:
        cells += [record.form_sizes[f], record.form_missing[f]]
    cells += list(record.x)
    cells += list(record.xp)
    if spec.y:
        cells.append(record.y)
    return cells


def _record_row(record: TrialRecord, spec: StatisticsSpec) -> list[str]:
    return [_format_value(cell) for cell in _record_cells(record, spec)]


def records_to_csv(records: Sequence[TrialRecord], spec: StatisticsSpec) -> str:
    """RFC-4180 CSV, LF line endings, floats at 17 significant digits."""
    buf = StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(csv_columns(spec))
    for record in records:
        writer.writerow(_record_row(record, spec))
    return buf.getvalue()


def _summary_to_jsonable(summaries: dict[int, dict[str, StatSummary]]) -> dict:
    out: dict[str, dict] = {}
    for n, stats in summaries.items():
        out[str(n)] = {
            name: {
                "mean": s.mean,
                "se": s.se,
                "min": s.min,
                "max": s.max,
                "q05": s.q05,
                "q50": s.q50,
                "q95": s.q95,
                "prediction": s.prediction,
                "relative_error": s.relative_error,
            }
            for name, s in stats.items()
        }
    return out


def results_to_json(
    records: Sequence[TrialRecord],
    summaries: dict[int, dict[str, StatSummary]],
    config: ExperimentConfig,
    wall_time_s: float,
) -> str:
    spec = config.statistics
    cols = csv_columns(spec)
    rows = [dict(zip(cols, _record_cells(r, spec))) for r in records]
    doc = {
        "schema_version": SCHEMA_VERSION,
        "metadata": {
            "seed": config.seed,
            "generator": GENERATOR_NAME,
            "schema_version": SCHEMA_VERSION,
            "wall_time_s": wall_time_s,
        },
        "records": rows,
        "summary": _summary_to_jsonable(summaries),
    }
    return json.dumps(doc, indent=2) + "\n"


# ---------------------------------------------------------------------------
# exhaustive enumeration


def enumerate_exhaustive(n: int) -> dict[str, int]:
    """Classify every subset of [0, n]; the empty set and singletons are balanced."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if n > MAX_ENUMERATION_N:
        raise ResourceBudgetError(f"exhaustive enumeration capped at N = {MAX_ENUMERATION_N}")
    counts = {"sum_dominated": 0, "balanced": 0, "difference_dominated": 0}
    for mask in range(1 << (n + 1)):
        if mask.bit_count() <= 1:
            counts["balanced"] += 1
            continue
        rest = mask
        s = 0
        d = 0
        while rest:
            low = rest & (-rest)
            i = low.bit_length() - 1
            s |= mask << i
            d |= mask << (n - i)
            rest ^= low
        ssize = s.bit_count()
        dsize = d.bit_count()
        if ssize > dsize:
            counts["sum_dominated"] += 1
        elif ssize == dsize:
            counts["balanced"] += 1
        else:
            counts["difference_dominated"] += 1
    return counts


# ---------------------------------------------------------------------------
# empirical threshold crossover


@dataclass(frozen=True)
class CrossoverResult:
    c_grid: tuple[float, ...]
    frequencies: tuple[float, ...]
    crossover: float | None  # None: the grid frequencies never cross 1/2
    trials: int


def empirical_crossover(
    f: LinearForm,
    g: LinearForm,
    n: int,
    c_grid: Sequence[float],
    trials: int,
    seed: int,
) -> CrossoverResult:
    """Domination frequency P(|f(A)| > |g(A)|) at p = c * N**-0.5 per grid c.

    Trials share the underlying uniforms across grid points (the sampler
    couples sets monotonically in p), so the frequency curve moves as a
    whole and its 1/2-crossing is stable.  The crossover estimate is the
    median of the piecewise-linear interpolant's crossings of 1/2.
    """
    report = classify_pair(f, g)
    if report.case != "case-ii":
        raise ValueError(f"({f}, {g}) is {report.case}; crossover needs a case-ii pair")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    grid = [float(c) for c in c_grid]
    if len(grid) < 2 or sorted(grid) != grid:
        raise ValueError("c_grid must be ascending with at least two points")
    sqrt_n = math.sqrt(n)
    if grid[0] <= 0 or grid[-1] >= sqrt_n:
        raise ValueError("grid must satisfy 0 < c < sqrt(N) so that p lands in (0, 1)")
    wins = [0] * len(grid)
    for t in range(trials):
        uniforms = sample_uniforms(n, SamplerSeed(seed, t))
        for j, c in enumerate(grid):
            members = np.flatnonzero(uniforms < c / sqrt_n).astype(np.int64)
            a = IntegerSet.from_members(members, 0, n)
            if form_image(a, f).count > form_image(a, g).count:
                wins[j] += 1
    freqs = [w / trials for w in wins]
    return CrossoverResult(tuple(grid), tuple(freqs), _interpolate_half(grid, freqs), trials)


def _interpolate_half(grid: Sequence[float], freqs: Sequence[float]) -> float | None:
    crossings: list[float] = []
    for i, (c, fr) in enumerate(zip(grid, freqs)):
        if fr == 0.5:
            crossings.append(c)
        if i == 0:
            continue
        lo, hi = freqs[i - 1] - 0.5, fr - 0.5
        if lo * hi < 0:
            crossings.append(grid[i - 1] + (0.0 - lo) * (c - grid[i - 1]) / (hi - lo))
    if not crossings:
        return None
    return float(pystats.median(crossings))


# ---------------------------------------------------------------------------
# bound verification


@dataclass(frozen=True)
class BoundCheck:
    report: BoundReport
    trials: int
    card_violation_rate: float
    y_violation_rate: float
    flags: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.flags


def _exceeds(empirical: float, bound: float, trials: int) -> bool:
    capped = min(bound, 1.0)
    slack = 4.0 * math.sqrt(capped * (1.0 - capped) / trials)
    return empirical > capped + slack


def verify_bounds(
    c: float, delta: float, g_exp: float, n: int, trials: int, seed: int
) -> BoundCheck:
    """Empirical failure rates of the cardinality interval and the
    collision threshold, compared against their explicit bounds P1, P2."""
    report = bound_report(c, delta, g_exp, n)
    if trials < 1:
        raise ValueError("trials must be >= 1")
    p = p_of(PFamily.power_law(c, delta), n)
    lo, hi = report.card_interval
    card_out = 0
    y_out = 0
    for t in range(trials):
        a = sample(n, p, SamplerSeed(seed, t))
        if not lo <= a.count <= hi:
            card_out += 1
        y = repeated_gap_pairs(rep_histogram(a, "diff"))
        if y > report.Y_threshold:
            y_out += 1
    card_rate = card_out / trials
    y_rate = y_out / trials
    flags = []
    if _exceeds(card_rate, report.P1, trials):
        flags.append(
            f"cardinality-interval failure rate {card_rate:.4g} exceeds P1 = {report.P1:.4g}"
        )
    if _exceeds(y_rate, report.P2, trials):
        flags.append(f"collision-threshold failure rate {y_rate:.4g} exceeds P2 = {report.P2:.4g}")
    return BoundCheck(report, trials, card_rate, y_rate, tuple(flags))
