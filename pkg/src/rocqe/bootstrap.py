"""Stratified bootstrap confidence bands and AUC intervals for ROC curves.

Resampling is stratified: each replicate redraws the positives and the
negatives separately, with replacement, so every replicate keeps the
original class sizes and class imbalance. Every replicate owns an
independent RNG substream derived from (seed, replicate index), and results
are aggregated in index order, so output is byte-identical regardless of
worker count or execution order.
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional, TypeVar

import numpy as np

from .model import Dataset, DegenerateClassError
from .roc import interp_tpr, tie_group_counts

T = TypeVar("T")

DEFAULT_ITERATIONS = 1000
DEFAULT_CONFIDENCE = 0.95
MIN_GRID_INTERVALS = 100


@dataclass(frozen=True)
class BootstrapConfig:
    """Resampling parameters.

    ``grid_points`` is the number of FPR grid intervals (granularity
    1/grid_points); when None it defaults to max(N, 100) so the grid tracks
    the empirical fpr resolution of the dataset without getting coarse on
    small samples. ``workers`` > 1 runs replicates on a thread pool; the
    result is identical either way.
    """

    iterations: int = DEFAULT_ITERATIONS
    confidence: float = DEFAULT_CONFIDENCE
    seed: int = 0
    grid_points: Optional[int] = None
    workers: int = 1

    def __post_init__(self) -> None:
        if self.iterations < 2:
            raise ValueError(f"iterations must be >= 2, got {self.iterations}")
        if not 0.0 < self.confidence < 1.0:
            raise ValueError(
                f"confidence must lie strictly between 0 and 1, got {self.confidence}"
            )
        if not 0 <= self.seed < 2**64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if self.grid_points is not None and self.grid_points < 1:
            raise ValueError(f"grid_points must be >= 1, got {self.grid_points}")
        if self.workers < 1:
            raise ValueError(f"workers must be >= 1, got {self.workers}")

    def fpr_grid(self, n_count: int) -> np.ndarray:
        intervals = self.grid_points or max(n_count, MIN_GRID_INTERVALS)
        return np.linspace(0.0, 1.0, intervals + 1)


def replicate_rng(seed: int, index: int) -> np.random.Generator:
    """The RNG substream owned by one replicate."""
    return np.random.default_rng([seed, index])


def resample_arrays(
    pos_risk: np.ndarray, neg_risk: np.ndarray, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray]:
    """One stratified resample of the canonical risk arrays.

    Positives are drawn first, then negatives, each with replacement and at
    the original stratum size. Draw order is part of the determinism
    contract: changing it changes every downstream number.
    """
    p = pos_risk.size
    n = neg_risk.size
    pos_idx = rng.integers(0, p, size=p)
    neg_idx = rng.integers(0, n, size=n)
    return pos_risk[pos_idx], neg_risk[neg_idx]


def resample_stratified(dataset: Dataset, rng: np.random.Generator) -> Dataset:
    """One stratified resample as a full Dataset (segment ids may repeat)."""
    _require_both_classes(dataset)
    segments = dataset.segments
    pos = [i for i in range(len(segments)) if dataset.is_positive[i]]
    neg = [i for i in range(len(segments)) if not dataset.is_positive[i]]
    pos_idx = rng.integers(0, len(pos), size=len(pos))
    neg_idx = rng.integers(0, len(neg), size=len(neg))
    chosen = [segments[pos[i]] for i in pos_idx]
    chosen += [segments[neg[i]] for i in neg_idx]
    return Dataset(tuple(chosen), dataset.p_count, dataset.n_count, dataset.orientation)


def _require_both_classes(dataset: Dataset) -> None:
    if dataset.p_count == 0 or dataset.n_count == 0:
        empty = "positive" if dataset.p_count == 0 else "negative"
        raise DegenerateClassError(
            f"no {empty} segments: stratified resampling is undefined"
        )


def map_replicates(
    dataset: Dataset,
    config: BootstrapConfig,
    stat_fn: Callable[[np.ndarray, np.ndarray], T],
) -> list[T]:
    """Evaluate a statistic on every bootstrap replicate, in index order.

    ``stat_fn(pos_sample, neg_sample)`` receives the resampled canonical risk
    arrays. The returned list is ordered by replicate index whether or not
    worker threads are used, so any statistic layered on the same seed sees
    the same resamples as the confidence band does.
    """
    _require_both_classes(dataset)
    pos = dataset.positive_risks
    neg = dataset.negative_risks

    def run(index: int) -> T:
        rng = replicate_rng(config.seed, index)
        pos_sample, neg_sample = resample_arrays(pos, neg, rng)
        return stat_fn(pos_sample, neg_sample)

    indices = range(config.iterations)
    if config.workers == 1:
        return [run(i) for i in indices]
    with ThreadPoolExecutor(max_workers=config.workers) as pool:
        return list(pool.map(run, indices))


def curve_arrays(
    pos_risk: np.ndarray, neg_risk: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """(fpr, tpr) vertex arrays, origin included, for raw risk arrays.

    Fast-path equivalent of build_roc for code that only needs coordinates:
    same tie-group collapsing, no vertex objects.
    """
    risk = np.concatenate([pos_risk, neg_risk])
    is_positive = np.zeros(risk.size, dtype=bool)
    is_positive[: pos_risk.size] = True
    _, tp, fp = tie_group_counts(risk, is_positive)
    fpr = np.concatenate([[0.0], fp / neg_risk.size])
    tpr = np.concatenate([[0.0], tp / pos_risk.size])
    return fpr, tpr


def trapezoid_auc(fpr: np.ndarray, tpr: np.ndarray) -> float:
    return float(np.trapezoid(tpr, fpr))


def nearest_rank(sorted_values: np.ndarray, q: float) -> np.ndarray:
    """Nearest-rank percentile: the ceil(q * B)-th smallest value (1-based).

    Works on a sorted vector or row-sorted matrix (selects a row).
    """
    b = sorted_values.shape[0]
    k = min(max(math.ceil(q * b), 1), b)
    return sorted_values[k - 1]


@dataclass(frozen=True, eq=False)
class ConfidenceBand:
    """Pointwise percentile band plus the AUC interval from one resample run.

    ``point_tpr`` is the empirical (un-resampled) curve evaluated on the same
    grid. ``degenerate_replicates`` counts resamples whose scores were all
    tied (their curve is the diagonal); they still contribute to the band.
    """

    fpr_grid: np.ndarray
    lower_tpr: np.ndarray
    upper_tpr: np.ndarray
    point_tpr: np.ndarray
    auc_point: float
    auc_interval: tuple[float, float]
    confidence: float
    iterations: int
    seed: int
    degenerate_replicates: int

    def __post_init__(self) -> None:
        for arr in (self.fpr_grid, self.lower_tpr, self.upper_tpr, self.point_tpr):
            arr.flags.writeable = False
        if not np.all(self.lower_tpr <= self.upper_tpr):
            raise ValueError("band is inverted: lower_tpr exceeds upper_tpr somewhere")
        if not self.auc_interval[0] <= self.auc_interval[1]:
            raise ValueError(f"inverted auc_interval {self.auc_interval}")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ConfidenceBand):
            return NotImplemented
        return (
            np.array_equal(self.fpr_grid, other.fpr_grid)
            and np.array_equal(self.lower_tpr, other.lower_tpr)
            and np.array_equal(self.upper_tpr, other.upper_tpr)
            and np.array_equal(self.point_tpr, other.point_tpr)
            and self.auc_point == other.auc_point
            and self.auc_interval == other.auc_interval
            and self.confidence == other.confidence
            and self.iterations == other.iterations
            and self.seed == other.seed
            and self.degenerate_replicates == other.degenerate_replicates
        )

    __hash__ = None  # type: ignore[assignment]


def confidence_band(
    dataset: Dataset, config: Optional[BootstrapConfig] = None
) -> ConfidenceBand:
    """Bootstrap percentile band around the empirical ROC curve.

    Each replicate's curve is evaluated on the shared FPR grid (vertical
    segments read at their top) and its AUC recorded; grid columns and AUC
    values are sorted across replicates and cut at nearest-rank percentiles
    (1 - confidence) / 2 and 1 - (1 - confidence) / 2.
    """
    config = config or BootstrapConfig()
    _require_both_classes(dataset)
    if dataset.p_count < 2 or dataset.n_count < 2:
        warnings.warn(
            f"resampling a stratum of size 1 (P={dataset.p_count}, "
            f"N={dataset.n_count}) cannot express sampling variation",
            stacklevel=2,
        )
    grid = config.fpr_grid(dataset.n_count)

    def one_replicate(
        pos: np.ndarray, neg: np.ndarray
    ) -> tuple[np.ndarray, float, bool]:
        fpr, tpr = curve_arrays(pos, neg)
        grid_tpr = np.asarray(interp_tpr(fpr, tpr, grid))
        degenerate = fpr.size == 2  # origin plus a single tie group: all scores tied
        return grid_tpr, trapezoid_auc(fpr, tpr), degenerate

    results = map_replicates(dataset, config, one_replicate)
    matrix = np.vstack([r[0] for r in results])
    aucs = np.sort(np.array([r[1] for r in results]))
    degenerate_count = sum(1 for r in results if r[2])

    matrix.sort(axis=0)
    alpha = 1.0 - config.confidence
    lower = nearest_rank(matrix, alpha / 2.0).copy()
    upper = nearest_rank(matrix, 1.0 - alpha / 2.0).copy()

    point_fpr, point_tpr = curve_arrays(dataset.positive_risks, dataset.negative_risks)
    return ConfidenceBand(
        fpr_grid=grid.copy(),
        lower_tpr=lower,
        upper_tpr=upper,
        point_tpr=np.asarray(interp_tpr(point_fpr, point_tpr, grid)),
        auc_point=trapezoid_auc(point_fpr, point_tpr),
        auc_interval=(
            float(nearest_rank(aucs, alpha / 2.0)),
            float(nearest_rank(aucs, 1.0 - alpha / 2.0)),
        ),
        confidence=config.confidence,
        iterations=config.iterations,
        seed=config.seed,
        degenerate_replicates=degenerate_count,
    )


@dataclass(frozen=True)
class BandWidthSummary:
    max_width: float
    mean_width: float


def band_width_summary(band: ConfidenceBand) -> BandWidthSummary:
    """Extreme and mean vertical width of a band across its grid."""
    width = band.upper_tpr - band.lower_tpr
    return BandWidthSummary(max_width=float(np.max(width)), mean_width=float(np.mean(width)))
