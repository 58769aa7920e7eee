"""Seeded batches of EDA runs, summary statistics and CSV/JSON reports.

A batch runs every algorithm variant ``run_count`` times on each problem,
with run ``i`` seeded ``base_seed + i``.  Per (problem, variant) the harness
reports the mean and spread of the final best values plus the per-iteration
mean best-so-far and mean surviving-component traces.
"""

import csv
import json
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np
from scipy.stats import norm, t as student_t

from .engine import ALGORITHMS, EdaConfig, run_eda
from .errors import ConfigError, EdaError
from .objectives import FUNCTION_NAMES, PRESET_DIMENSIONS, get_function

__all__ = [
    "ExperimentAborted",
    "ExperimentSpec",
    "SummaryStats",
    "Variant",
    "emit_density_comparison",
    "emit_records",
    "emit_summary",
    "emit_traces",
    "reference_config",
    "preset_spec",
    "read_trace_csv",
    "run_experiment",
    "run_problem",
    "score_table",
    "summarize",
]

log = logging.getLogger(__name__)

REFERENCE_POPULATION = {2: 1000, 5: 10_000, 10: 100_000}
SELECT_FRACTION = 0.2
LARGE_DIMENSION = 10
MAX_FAILURE_RATE = 0.2
TIE_TOLERANCE = 1e-4
PRESETS = ("paper-table1", "paper-fig2", "paper-fig3")
FIG_FUNCTIONS = ("ackley", "dejong5", "easom", "rastrigin", "michalewicz", "levy13")


class ExperimentAborted(EdaError):
    """Too many runs of one batch failed to aggregate meaningfully."""


def reference_dof(function):
    return 50.0 if function == "rastrigin" else 5.0


def reference_config(function, dimension, algorithm, select_fraction=SELECT_FRACTION, **overrides):
    """Reference settings: ``N`` by dimension, ``M = 0.2 N``, 50 iterations.

    Any :class:`EdaConfig` field can be overridden.  Unless
    ``selection_size`` is given explicitly it follows ``select_fraction * N``.
    """
    N = int(overrides.pop("population_size", REFERENCE_POPULATION.get(dimension, 1000)))
    M = overrides.pop("selection_size", None)
    if M is None:
        M = int(round(select_fraction * N))
    base = dict(algorithm=algorithm, population_size=N, selection_size=int(M),
                dof=reference_dof(function))
    base.update(overrides)
    return EdaConfig(**base)


@dataclass(frozen=True)
class Variant:
    """An algorithm under a label, with config overrides (e.g. a fixed dof)."""

    label: str
    algorithm: str
    overrides: tuple = ()

    @classmethod
    def plain(cls, algorithm):
        return cls(algorithm, algorithm)


@dataclass
class ExperimentSpec:
    problems: list
    variants: list
    run_count: int = 30
    base_seed: int = 0
    config: dict = field(default_factory=dict)
    out_dir: Optional[str] = None
    preset: Optional[str] = None
    spread: str = "stddev"
    workers: int = 1
    allow_large: bool = False
    select_fraction: float = SELECT_FRACTION
    density_dofs: Optional[list] = None

    def __post_init__(self):
        if self.run_count < 1:
            raise ConfigError(f"run count must be at least 1, got {self.run_count}")
        if self.spread not in ("stddev", "stderr"):
            raise ConfigError(f"spread must be 'stddev' or 'stderr', got {self.spread!r}")
        for name, dim in self.problems:
            if name not in FUNCTION_NAMES:
                raise ConfigError(f"unknown function {name!r}")
            if dim not in PRESET_DIMENSIONS[name]:
                raise ConfigError(
                    f"{name} is not run in {dim}D; supported dimensions: {PRESET_DIMENSIONS[name]}"
                )
            if dim >= LARGE_DIMENSION and not self.allow_large:
                raise ConfigError(f"{name} {dim}D uses N=1e5 per iteration; pass --allow-large")
        if not 0 < self.select_fraction < 1:
            raise ConfigError(f"selection fraction must lie in (0, 1), got {self.select_fraction}")
        for v in self.variants:
            if v.algorithm not in ALGORITHMS:
                raise ConfigError(f"unknown algorithm {v.algorithm!r}")
        # Surface invalid combinations (M >= N, W * L > 1, ...) before any run.
        for name, dim in self.problems:
            for v in self.variants:
                self.base_config(name, dim, v)

    def base_config(self, function, dimension, variant):
        kw = dict(self.config)
        kw.update(dict(variant.overrides))
        return reference_config(function, dimension, variant.algorithm, self.select_fraction, **kw)

    def configs(self, function, dimension, variant):
        """Config of every run of ``variant`` on one problem, in run order."""
        base = self.base_config(function, dimension, variant)
        return [base.replace(seed=self.base_seed + i) for i in range(self.run_count)]


@dataclass
class SummaryStats:
    function: str
    dimension: int
    algorithm: str
    mean_best: float
    spread_best: float
    mean_trace: np.ndarray
    mean_survival_trace: np.ndarray
    run_count: int
    failed_count: int = 0
    spread_kind: str = "stddev"
    run_bests: np.ndarray = field(default=None, repr=False)


def summarize(records, spread="stddev"):
    """Aggregate the runs of one (problem, variant) pair.

    Failed runs are excluded from the statistics and counted separately; a
    failure rate of 20% or more raises :class:`ExperimentAborted`.
    """
    records = list(records)
    if not records:
        raise ValueError("no records to summarize")
    ok = [r for r in records if not r.failed]
    failed = len(records) - len(ok)
    if failed >= MAX_FAILURE_RATE * len(records) and failed > 0:
        first = next(r for r in records if r.failed)
        raise ExperimentAborted(
            f"{failed}/{len(records)} runs of {first.algorithm} on {first.function} failed; "
            f"first error: {first.error}"
        )
    bests = np.array([r.final_best_value for r in ok], dtype=float)
    n = bests.size
    sd = float(np.std(bests, ddof=1)) if n > 1 else 0.0
    if spread == "stderr":
        sd /= np.sqrt(n)
    head = ok[0]
    return SummaryStats(
        function=head.function,
        dimension=head.dimension,
        algorithm=head.algorithm,
        mean_best=float(np.mean(bests)),
        spread_best=sd,
        mean_trace=np.mean([r.best_value_trace for r in ok], axis=0),
        mean_survival_trace=np.mean([r.survival_component_trace for r in ok], axis=0),
        run_count=n,
        failed_count=failed,
        spread_kind=spread,
        run_bests=bests,
    )


def _run_one(args):
    cfg, name, dim = args
    return run_eda(cfg, get_function(name, dim))


def run_problem(spec, function, dimension, variant, pool=None):
    """All runs of one variant on one problem, ordered by run index."""
    jobs = [(cfg, function, dimension) for cfg in spec.configs(function, dimension, variant)]
    records = list(pool.map(_run_one, jobs)) if pool is not None else [_run_one(j) for j in jobs]
    for r in records:
        r.algorithm = variant.label
    return records


def run_experiment(spec):
    """Execute the batch described by ``spec``.

    Returns ``(summaries, records)`` where ``records`` maps
    ``(function, dimension, label)`` to the list of run records.  When
    ``spec.out_dir`` is set, traces, the summary table and every run record
    are written there.
    """
    pool = ProcessPoolExecutor(spec.workers) if spec.workers > 1 else None
    summaries, all_records = [], {}
    try:
        for name, dim in spec.problems:
            for variant in spec.variants:
                recs = run_problem(spec, name, dim, variant, pool)
                all_records[(name, dim, variant.label)] = recs
                s = summarize(recs, spec.spread)
                summaries.append(s)
                log.info("%s %dD %s: %.6g +- %.4g", name, dim, variant.label,
                         s.mean_best, s.spread_best)
                if spec.out_dir is not None:
                    emit_traces(recs, spec.out_dir, spread=spec.spread)
                    emit_records(recs, spec.out_dir)
    finally:
        if pool is not None:
            pool.shutdown()
    if spec.out_dir is not None:
        emit_summary(summaries, Path(spec.out_dir) / "summary.csv")
        if len(spec.variants) > 1:
            scores = score_table(summaries)
            with open(Path(spec.out_dir) / "scores.csv", "w", newline="") as fh:
                w = csv.writer(fh)
                w.writerow(["algorithm", "score"])
                for label, score in scores.items():
                    w.writerow([label, score])
    return summaries, all_records


def score_table(summaries, tol=TIE_TOLERANCE):
    """Count, per algorithm, the problems on which it was the unique best.

    For each problem the candidates are the algorithms whose mean best lies
    within ``tol`` of the smallest mean.  Among those the smaller spread
    wins; if the spread is tied too, nobody scores.
    """
    labels = []
    by_problem = {}
    for s in summaries:
        if s.algorithm not in labels:
            labels.append(s.algorithm)
        by_problem.setdefault((s.function, s.dimension), []).append(s)
    scores = {label: 0 for label in labels}
    for group in by_problem.values():
        lowest = min(s.mean_best for s in group)
        tied = [s for s in group if s.mean_best - lowest <= tol]
        if len(tied) > 1:
            least = min(s.spread_best for s in tied)
            tied = [s for s in tied if s.spread_best == least]
        if len(tied) == 1:
            scores[tied[0].algorithm] += 1
    return scores


def _stem(record_or_stats):
    r = record_or_stats
    return f"{r.function}_{r.dimension}d_{r.algorithm}"


def emit_traces(records, out_dir, spread="stddev"):
    """Write the mean best and mean surviving-component traces as CSV.

    Floats are written with ``repr`` so reading the file back reproduces
    the in-memory values exactly.
    """
    s = summarize(records, spread)
    path = Path(out_dir) / f"{_stem(s)}.csv"
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["iteration", "mean_best", "mean_survival_components"])
            for k, (b, c) in enumerate(zip(s.mean_trace, s.mean_survival_trace), start=1):
                w.writerow([k, repr(float(b)), repr(float(c))])
    except OSError as exc:
        raise OSError(f"cannot write trace file {path}: {exc}") from exc
    return path


def read_trace_csv(path):
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    it = np.array([int(r["iteration"]) for r in rows])
    best = np.array([float(r["mean_best"]) for r in rows])
    comps = np.array([float(r["mean_survival_components"]) for r in rows])
    return it, best, comps


def emit_records(records, out_dir):
    records = list(records)
    path = Path(out_dir) / f"{_stem(records[0])}.json"
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w") as fh:
            json.dump([r.to_dict() for r in records], fh, indent=1)
    except OSError as exc:
        raise OSError(f"cannot write record file {path}: {exc}") from exc
    return path


def emit_summary(summaries, path):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["function", "dimension", "algorithm", "mean_best", "spread_best",
                    "spread_kind", "run_count", "failed_runs"])
        for s in summaries:
            w.writerow([s.function, s.dimension, s.algorithm, repr(s.mean_best),
                        repr(s.spread_best), s.spread_kind, s.run_count, s.failed_count])
    return path


def emit_density_comparison(v_list, path):
    """Unit-variance normal and Student's t densities on ``[-6, 6]``.

    Each t density uses scale ``(v - 2) / v`` so its variance is exactly 1,
    which requires ``v > 2``.
    """
    v_list = [float(v) for v in v_list]
    bad = [v for v in v_list if not v > 2]
    if bad:
        raise ConfigError(
            f"degrees of freedom {bad} give infinite variance; unit-variance "
            "rescaling needs v > 2"
        )
    x = np.arange(-600, 601) / 100.0
    cols = {"normal": norm.pdf(x)}
    for v in v_list:
        cols[f"student_t_v{v:g}"] = student_t.pdf(x, df=v, scale=np.sqrt((v - 2) / v))
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["x", *cols])
        for i, xi in enumerate(x):
            w.writerow([repr(float(xi)), *(repr(float(c[i])) for c in cols.values())])
    return path


def preset_spec(name, allow_large=False, **kwargs):
    """Problems and variants of a named reference experiment.

    ``paper-table1`` covers all seventeen functions with the four
    algorithms (10D problems only with ``allow_large``), ``paper-fig2``
    compares ESTDA at several dof values with Gaussian-EDA, and
    ``paper-fig3`` tracks surviving components of the mixture variants.
    """
    plain = [Variant.plain(a) for a in ALGORITHMS]
    if name == "paper-table1":
        problems = [
            (f, d) for f in FUNCTION_NAMES for d in PRESET_DIMENSIONS[f]
            if allow_large or d < LARGE_DIMENSION
        ]
        variants = plain
    elif name == "paper-fig2":
        problems = [(f, 2) for f in FIG_FUNCTIONS]
        variants = [Variant(f"estda_v{v}", "estda", (("dof", float(v)),))
                    for v in (5, 10, 50, 100, 500)]
        variants.append(Variant.plain("gaussian_eda"))
    elif name == "paper-fig3":
        problems = [(f, 2) for f in FIG_FUNCTIONS]
        variants = [Variant.plain("emstda"), Variant.plain("gmm_eda")]
    else:
        raise ConfigError(f"unknown preset {name!r}; choose from {PRESETS}")
    return ExperimentSpec(problems=problems, variants=variants, preset=name,
                          allow_large=allow_large, **kwargs)
