"""Seeded Monte-Carlo experiment runner.

A sweep iterates over sweep points (aspect ratios, and optionally sample
sizes or background-strength levels), methods, and trials.  Trial ``t`` uses
seed ``base_seed + t``, so trials are reproducible and independently
schedulable; records are sorted canonically before emission, making the
output independent of worker count.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from . import estimators, theory
from .errors import ConfigError, DegenerateCovariance, InvalidInput, PairPCAError
from .factor_model import FactorModelSpec, generate
from .linalg import DEFAULT_EPS_REL
from .metrics import sin_theta_dist

METHOD_KINDS = ("pca", "pca_plus", "pca_plus_plus", "cpca", "cpca_pp", "cca")
NORMS = ("operator", "frobenius")
THEORY_METHOD = "theory"

RECORD_COLUMNS = ("preset", "method", "n", "d", "aspect_ratio", "s", "trial", "dist", "elapsed_seconds")
SUMMARY_COLUMNS = ("preset", "method", "aspect_ratio", "mean_dist", "sd_dist", "trials", "failed")


@dataclass(frozen=True)
class ModelTemplate:
    """Factor-model parameters independent of the ambient dimension, which is
    derived per sweep point from the aspect ratio."""

    signal_variances: tuple[float, ...]
    background_variances: tuple[float, ...] = ()
    noise_variance: float = 1.0
    overlap_pairs: tuple[tuple[int, int], ...] = ()
    factor_distribution: str = "gaussian"

    def materialize(
        self,
        d: int,
        spike_scale: float = 1.0,
        background_variances: tuple[float, ...] | None = None,
    ) -> FactorModelSpec:
        background = self.background_variances if background_variances is None else background_variances
        return FactorModelSpec(
            d=d,
            signal_variances=tuple(v * spike_scale for v in self.signal_variances),
            background_variances=tuple(v * spike_scale for v in background),
            noise_variance=self.noise_variance,
            overlap_pairs=self.overlap_pairs,
            factor_distribution=self.factor_distribution,
        )


@dataclass(frozen=True)
class MethodSpec:
    """One estimator entry of a sweep.

    ``s`` selects the truncation rank for the generalized-eigenproblem
    methods: an integer, a fraction of d given as e.g. ``"0.1d"``, ``"full"``
    for s = d, or ``None`` for the library default.  ``label`` names the
    entry in the output (defaults to the method kind) so several entries of
    the same kind can coexist in one sweep.
    """

    kind: str
    label: str = ""
    k: int | None = None
    s: int | str | None = None
    eps_rel: float = DEFAULT_EPS_REL
    alpha: float = 1.0
    standardize: bool = False

    def __post_init__(self) -> None:
        if self.kind not in METHOD_KINDS:
            raise ConfigError(f"unknown method {self.kind!r}")
        if not self.label:
            object.__setattr__(self, "label", self.kind)

    def resolve_s(self, d: int, k: int) -> int | None:
        """Truncation rank at concrete dimension d, or None for methods that
        do not truncate."""
        if self.kind not in ("pca_plus_plus", "cpca_pp"):
            return None
        s = self.s
        if s is None:
            if self.kind == "cpca_pp":
                return d
            return estimators.default_truncation_rank(d, k)
        if isinstance(s, str):
            text = s.strip().lower()
            if text in ("full", "untruncated", "d"):
                return d
            if text.endswith("d"):
                frac = float(text[:-1])
                if not 0 < frac <= 1:
                    raise ConfigError(f"truncation fraction {s!r} outside (0, 1]")
                return min(d, max(k, round(frac * d)))
            return int(text)
        return int(s)


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything needed to run one benchmark sweep.

    The primary sweep axis is ``aspect_ratios`` (d is derived as
    ``round(ratio * n * scale_factor)``).  Two optional secondary axes exist:
    ``sample_sizes`` runs the same ratios at several n, and ``snr_sweep``
    varies the background strength of a one-background model so that
    ``signal / sqrt(background)`` hits the given values.  Multi-valued
    secondary axes are encoded into the per-record preset label (e.g.
    ``table1[n=100]``) because the record schema has no dedicated column.
    """

    name: str
    model: ModelTemplate
    n: int
    aspect_ratios: tuple[float, ...]
    methods: tuple[MethodSpec, ...]
    trials: int = 50
    base_seed: int = 1234
    norm: str = "operator"
    scale_factor: float = 1.0
    sample_sizes: tuple[int, ...] = ()
    snr_sweep: tuple[float, ...] = ()
    theory_overlay: str | None = None  # None | "fixed" | "growing"
    source: str = ""

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if self.n < 1:
            raise ConfigError("n must be >= 1")
        if self.norm not in NORMS:
            raise ConfigError(f"unknown norm {self.norm!r}")
        if self.scale_factor <= 0:
            raise ConfigError("scale_factor must be positive")
        if not self.aspect_ratios:
            raise ConfigError("at least one aspect ratio is required")
        if not self.methods:
            raise ConfigError("at least one method is required")
        labels = [m.label for m in self.methods]
        if len(set(labels)) != len(labels):
            raise ConfigError(f"duplicate method labels: {labels}")
        if self.theory_overlay not in (None, "fixed", "growing"):
            raise ConfigError(f"unknown theory overlay {self.theory_overlay!r}")
        if self.snr_sweep and len(self.model.background_variances) != 1:
            raise ConfigError("snr_sweep requires exactly one background spike")


@dataclass(frozen=True)
class SweepPoint:
    """One concrete (label, n, d) combination of a sweep."""

    preset_label: str
    n: int
    d: int
    aspect_ratio: float
    spec: FactorModelSpec


@dataclass(frozen=True)
class TrialRecord:
    preset: str
    method: str
    n: int
    d: int
    aspect_ratio: float
    s: int | None
    trial: int
    dist: float
    elapsed_seconds: float


@dataclass(frozen=True)
class SummaryRow:
    preset: str
    method: str
    aspect_ratio: float
    mean_dist: float
    sd_dist: float
    trials: int
    failed: int


def sweep_points(config: ExperimentConfig) -> list[SweepPoint]:
    """Expand a config into concrete sweep points, deriving d per ratio and
    attaching secondary-axis suffixes to the preset label when needed."""
    sizes = config.sample_sizes or (config.n,)
    snrs: tuple[float | None, ...] = config.snr_sweep or (None,)
    points = []
    for n in sizes:
        for snr in snrs:
            suffix = ""
            if len(sizes) > 1:
                suffix += f"[n={n}]"
            if snr is not None and len(snrs) > 1:
                suffix += f"[snr={snr:g}]"
            background = None
            if snr is not None:
                lead_signal = config.model.signal_variances[0]
                background = ((lead_signal / snr) ** 2,)
            for ratio in config.aspect_ratios:
                d = int(round(ratio * n * config.scale_factor))
                if d < 1:
                    raise InvalidInput(f"aspect ratio {ratio} gives d={d} at n={n}")
                spec = config.model.materialize(
                    d, spike_scale=config.scale_factor, background_variances=background
                )
                points.append(
                    SweepPoint(
                        preset_label=config.name + suffix,
                        n=n,
                        d=d,
                        aspect_ratio=ratio,
                        spec=spec,
                    )
                )
    return points


def _run_estimator(method: MethodSpec, data, k: int, s: int | None):
    if method.kind == "pca":
        return estimators.pca_from_data(data.X, k)
    if method.kind == "pca_plus":
        return estimators.pca_plus(data.X, data.X_plus, k)
    if method.kind == "pca_plus_plus":
        return estimators.pca_plus_plus(data.X, data.X_plus, k, s=s, eps_rel=method.eps_rel)
    if method.kind == "cpca":
        fg, bg = estimators.synthesize_fg_bg(data.X, data.X_plus)
        return estimators.cpca(fg, bg, k, alpha=method.alpha)
    if method.kind == "cpca_pp":
        fg, bg = estimators.synthesize_fg_bg(data.X, data.X_plus)
        return estimators.cpca_pp(fg, bg, k, s=s, eps_rel=method.eps_rel)
    if method.kind == "cca":
        return estimators.cca_top_k(
            data.X, data.X_plus, k, eps_rel=method.eps_rel, standardize=method.standardize
        )
    raise InvalidInput(f"unknown method {method.kind!r}")


def run_trial(
    config: ExperimentConfig,
    point: SweepPoint,
    method: MethodSpec,
    trial_index: int,
) -> TrialRecord:
    """Run one (sweep point, method, trial) cell.

    Estimator failures (degenerate covariances, ranks below target) become
    NaN-distance records instead of aborting the sweep.
    """
    k = method.k if method.k is not None else max(point.spec.k, 1)
    s = method.resolve_s(point.d, k)
    seed = config.base_seed + trial_index
    data = generate(point.spec, point.n, seed=seed)
    start = time.perf_counter()
    try:
        estimate = _run_estimator(method, data, k, s)
        dist = sin_theta_dist(estimate.basis, data.truth, norm=config.norm)
    except (PairPCAError, np.linalg.LinAlgError):
        dist = math.nan
    elapsed = time.perf_counter() - start
    return TrialRecord(
        preset=point.preset_label,
        method=method.label,
        n=point.n,
        d=point.d,
        aspect_ratio=point.aspect_ratio,
        s=s,
        trial=trial_index,
        dist=dist,
        elapsed_seconds=elapsed,
    )


def _theory_prediction(config: ExperimentConfig, point: SweepPoint) -> float:
    weakest = point.spec.signal_variances[-1]
    if config.theory_overlay == "fixed":
        return theory.fixed_aspect_error(weakest, point.d / point.n)
    if config.theory_overlay == "growing":
        return theory.growing_spike_error(point.d / (point.n * weakest))
    raise InvalidInput(f"no theory overlay defined for {config.name!r}")


def theory_records(config: ExperimentConfig, points: list[SweepPoint] | None = None) -> list[TrialRecord]:
    """Closed-form overlay rows (one per sweep point, method ``theory``)."""
    if config.theory_overlay is None:
        return []
    if points is None:
        points = sweep_points(config)
    return [
        TrialRecord(
            preset=p.preset_label,
            method=THEORY_METHOD,
            n=p.n,
            d=p.d,
            aspect_ratio=p.aspect_ratio,
            s=None,
            trial=0,
            dist=_theory_prediction(config, p),
            elapsed_seconds=0.0,
        )
        for p in points
    ]


def run_sweep(
    config: ExperimentConfig, max_workers: int | None = None
) -> tuple[list[TrialRecord], list[SummaryRow]]:
    """Run every (point, method, trial) cell plus theory overlay rows.

    Trials are embarrassingly parallel; pass ``max_workers`` to fan them out
    to a thread pool (each trial owns its RNG stream).  Output ordering is
    canonical regardless of scheduling.
    """
    points = sweep_points(config)
    tasks = [
        (point, method, trial)
        for point in points
        for method in config.methods
        for trial in range(config.trials)
    ]
    if max_workers is not None and max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            records = list(pool.map(lambda task: run_trial(config, *task), tasks))
    else:
        records = [run_trial(config, *task) for task in tasks]
    records.extend(theory_records(config, points))
    records.sort(key=lambda r: (r.preset, r.method, r.aspect_ratio, r.trial))
    return records, summarize(records)


def summarize(records: list[TrialRecord]) -> list[SummaryRow]:
    """Mean/sd of dist per (preset, method, aspect_ratio); NaN (failed)
    trials are excluded from the statistics and counted separately."""
    groups: dict[tuple[str, str, float], list[float]] = {}
    for record in records:
        groups.setdefault((record.preset, record.method, record.aspect_ratio), []).append(record.dist)
    rows = []
    for (preset, method, ratio), dists in sorted(groups.items()):
        values = np.asarray(dists)
        ok = values[~np.isnan(values)]
        failed = int(np.isnan(values).sum())
        if ok.size == 0:
            mean = sd = math.nan
        else:
            mean = float(ok.mean())
            sd = float(ok.std(ddof=1)) if ok.size > 1 else 0.0
        rows.append(
            SummaryRow(
                preset=preset,
                method=method,
                aspect_ratio=ratio,
                mean_dist=mean,
                sd_dist=sd,
                trials=int(ok.size),
                failed=failed,
            )
        )
    return rows


def _fmt(value: float) -> str:
    return f"{value:.6g}"


def emit_csv(records: list[TrialRecord], path) -> None:
    """Write trial records; UTF-8, LF endings, floats at up to 6 significant
    digits, empty ``s`` for non-truncating methods, ``nan`` for failed trials."""
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(",".join(RECORD_COLUMNS) + "\n")
        for r in records:
            handle.write(
                f"{r.preset},{r.method},{r.n},{r.d},{_fmt(r.aspect_ratio)},"
                f"{'' if r.s is None else r.s},{r.trial},{_fmt(r.dist)},{_fmt(r.elapsed_seconds)}\n"
            )


def emit_summary(rows: list[SummaryRow], path) -> None:
    """Write summary rows with 3-decimal mean/sd formatting."""
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(",".join(SUMMARY_COLUMNS) + "\n")
        for row in rows:
            handle.write(
                f"{row.preset},{row.method},{_fmt(row.aspect_ratio)},"
                f"{row.mean_dist:.3f},{row.sd_dist:.3f},{row.trials},{row.failed}\n"
            )
