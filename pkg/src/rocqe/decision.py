"""Review-policy analysis on top of tie-aware ROC curves.

Three procedures turn a scored dataset into an operating decision: pick the
threshold a review budget affords and report the residual error risk; pick
the cheapest threshold that meets an error-risk target; or pick the vertex
where an iso-performance line (unit costs plus class ratio) touches the
curve. All three treat tie groups as atomic: a review set either contains a
whole tie group or none of it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from .bootstrap import BootstrapConfig, confidence_band, map_replicates, nearest_rank
from .model import Dataset, DegenerateClassError, Label
from .roc import RocCurve, raw_threshold, tie_group_counts

# Budget comparisons tolerate this much float dust; adjacent candidate sizes
# differ by at least 1, so the slack can never flip a decision.
EPS = 1e-9


@dataclass(frozen=True)
class TableRow:
    """One QE-ROC table row: a segment plus its tie group's end counts.

    Tied segments share one operating point, so all rows of a tie group carry
    identical counts. The theoretical endpoint rows have no segment.
    """

    segment_id: Optional[str]
    ground_truth: Optional[Label]
    raw_score: float
    tp: int
    fn: int
    fp: int
    tn: int
    tpr: float
    fpr: float


@dataclass(frozen=True)
class QeRocTable:
    """Per-segment ROC bookkeeping, sorted from the worst score to the best."""

    rows: tuple[TableRow, ...]
    endpoints: tuple[TableRow, TableRow]
    p_count: int
    n_count: int

    def __post_init__(self) -> None:
        if not self.rows:
            raise ValueError("a table needs at least one data row")
        last = self.rows[-1]
        if (last.tpr, last.fpr) != (1.0, 1.0):
            raise ValueError("the last data row must sit at tpr = fpr = 1")


def qe_roc_table(dataset: Dataset) -> QeRocTable:
    """The QE-ROC table of a dataset.

    Rows are sorted by canonical risk descending (worst translation first),
    ties ordered by segment id. Each row's counts answer: flag every segment
    scoring worse than or equal to this row's score; how does that split the
    ground truth?
    """
    p, n = dataset.p_count, dataset.n_count
    if p == 0 or n == 0:
        empty = "positive" if p == 0 else "negative"
        raise DegenerateClassError(
            f"no {empty} segments: the QE-ROC table is undefined"
        )
    segments = sorted(dataset.segments, key=lambda s: (-s.risk_score, s.segment_id))
    thresholds, tp, fp = tie_group_counts(dataset.risk_scores, dataset.is_positive)

    rows = []
    group = 0
    for seg in segments:
        if seg.risk_score != thresholds[group]:
            group += 1
        tp_g, fp_g = int(tp[group]), int(fp[group])
        rows.append(
            TableRow(
                segment_id=seg.segment_id,
                ground_truth=seg.label,
                raw_score=seg.raw_score,
                tp=tp_g,
                fn=p - tp_g,
                fp=fp_g,
                tn=n - fp_g,
                tpr=tp_g / p,
                fpr=fp_g / n,
            )
        )

    top = TableRow(
        segment_id=None,
        ground_truth=None,
        raw_score=raw_threshold(math.inf, dataset.orientation),
        tp=0,
        fn=p,
        fp=0,
        tn=n,
        tpr=0.0,
        fpr=0.0,
    )
    bottom = TableRow(
        segment_id=None,
        ground_truth=None,
        raw_score=raw_threshold(-math.inf, dataset.orientation),
        tp=p,
        fn=0,
        fp=n,
        tn=0,
        tpr=1.0,
        fpr=1.0,
    )
    return QeRocTable(tuple(rows), (top, bottom), p, n)


@dataclass(frozen=True)
class TradeOff:
    """Unit costs of the two error kinds, in any common monetary unit."""

    fn_unit_cost: float
    fp_unit_cost: float

    def __post_init__(self) -> None:
        if not (self.fn_unit_cost > 0 and self.fp_unit_cost > 0):
            raise ValueError(
                f"unit costs must be strictly positive, got "
                f"fn={self.fn_unit_cost}, fp={self.fp_unit_cost}"
            )

    @classmethod
    def parse(cls, text: str) -> "TradeOff":
        """Parse "a:b", read as: a missed errors cost as much as b false alarms."""
        a, b = _parse_ratio(text, "trade-off")
        return cls(fn_unit_cost=b, fp_unit_cost=a)


@dataclass(frozen=True)
class ClassRatio:
    """Assumed ratio of error-containing to clean segments (p : n)."""

    p: float
    n: float

    def __post_init__(self) -> None:
        if not (self.p > 0 and self.n > 0):
            raise ValueError(f"class ratio must be positive, got {self.p}:{self.n}")

    @classmethod
    def parse(cls, text: str) -> "ClassRatio":
        p, n = _parse_ratio(text, "class ratio")
        return cls(p=p, n=n)


def _parse_ratio(text: str, what: str) -> tuple[float, float]:
    parts = text.split(":")
    if len(parts) != 2:
        raise ValueError(f"{what} must look like 'a:b', got {text!r}")
    try:
        a, b = float(parts[0]), float(parts[1])
    except ValueError:
        raise ValueError(f"{what} must be numeric 'a:b', got {text!r}") from None
    if not (math.isfinite(a) and math.isfinite(b) and a > 0 and b > 0):
        raise ValueError(f"{what} parts must be finite and positive, got {text!r}")
    return a, b


class Scenario(Enum):
    REVIEW_BUDGET = "review-budget"
    RISK_TARGET = "risk-target"
    OPTIMAL_THRESHOLD = "optimal-threshold"


@dataclass(frozen=True)
class DecisionReport:
    """Outcome of one decision procedure.

    ``threshold_*`` define the flag rule (canonical risk >= threshold);
    ``review_fraction`` is the flagged share of the sample and
    ``residual_fn_per_100`` the errors left unreviewed per 100 segments.
    ``ci`` bounds the scenario's headline quantity (named in ``notes``).
    """

    scenario: Scenario
    threshold_raw: float
    threshold_canonical: float
    review_fraction: float
    residual_fn_per_100: float
    ci: Optional[tuple[float, float]] = None
    notes: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if not 0.0 <= self.review_fraction <= 1.0:
            raise ValueError(f"review_fraction {self.review_fraction} outside [0, 1]")
        if not 0.0 <= self.residual_fn_per_100 <= 100.0:
            raise ValueError(
                f"residual_fn_per_100 {self.residual_fn_per_100} outside [0, 100]"
            )
        if self.ci is not None and not self.ci[0] <= self.ci[1]:
            raise ValueError(f"inverted ci {self.ci}")


def _group_stats(
    pos_risk: np.ndarray, neg_risk: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    risk = np.concatenate([pos_risk, neg_risk])
    is_positive = np.zeros(risk.size, dtype=bool)
    is_positive[: pos_risk.size] = True
    return tie_group_counts(risk, is_positive)


def _pick_largest_within_capacity(
    tp: np.ndarray, fp: np.ndarray, capacity: int
) -> Optional[int]:
    """Index of the largest tie-group boundary whose review set fits, if any."""
    flagged = tp + fp
    within = np.flatnonzero(flagged <= capacity + EPS)
    return int(within[-1]) if within.size else None


def _pick_smallest_meeting_budget(
    tp: np.ndarray, fp: np.ndarray, p: int, budget: float, efficacy: float
) -> tuple[Optional[int], bool]:
    """Smallest review set whose residual errors fit the budget.

    Returns (index, attained); index None means the empty review set already
    qualifies. When even reviewing everything misses the budget (possible
    only with efficacy < 1), returns the last boundary and attained=False.
    """
    if p <= budget + EPS:
        return None, True
    residual = (p - tp) + (1.0 - efficacy) * tp
    ok = np.flatnonzero(residual <= budget + EPS)
    if ok.size:
        return int(ok[0]), True
    return tp.size - 1, False


def scenario1_residual_risk(
    dataset: Dataset,
    review_fraction_x: float,
    *,
    review_efficacy: float = 1.0,
    bootstrap: Optional[BootstrapConfig] = None,
    ci_method: str = "replicate",
) -> DecisionReport:
    """Residual error risk when at most a fraction x of segments is reviewed.

    The review set takes whole tie groups from the worst score downward; the
    capacity floor(x * total) is never exceeded, so a tie group that would
    overflow it is left out entirely. Residual risk counts the positives the
    review misses (plus uncorrected reviewed positives when review_efficacy
    is below 1), per 100 segments.

    With ``bootstrap`` set, a confidence interval for residual_fn_per_100 is
    attached: either by re-running the procedure per replicate (``ci_method=
    "replicate"``, the default) or by reading TPR limits off the ROC band at
    the chosen operating point (``ci_method="band"``).
    """
    if not 0.0 < review_fraction_x <= 1.0:
        raise ValueError(f"review fraction must be in (0, 1], got {review_fraction_x}")
    _check_efficacy(review_efficacy)
    _require_both_classes(dataset, "review-budget analysis")

    total = dataset.total
    p = dataset.p_count
    capacity = math.floor(review_fraction_x * total + EPS)

    def run(pos: np.ndarray, neg: np.ndarray) -> tuple[Optional[int], float, float]:
        thresholds, tp, fp = _group_stats(pos, neg)
        idx = _pick_largest_within_capacity(tp, fp, capacity)
        if idx is None:
            return None, 0.0, _residual_per_100(0, p, total, review_efficacy)
        flagged = float(tp[idx] + fp[idx])
        residual = _residual_per_100(int(tp[idx]), p, total, review_efficacy)
        return idx, flagged / total, residual

    thresholds, tp, fp = _group_stats(dataset.positive_risks, dataset.negative_risks)
    idx = _pick_largest_within_capacity(tp, fp, capacity)
    notes = [f"review capacity: {capacity} of {total} segments"]
    if idx is None:
        canonical = math.inf
        review_fraction = 0.0
        residual = _residual_per_100(0, p, total, review_efficacy)
        notes.append(
            "even the smallest tie group exceeds the review capacity; "
            "the review set is empty"
        )
    else:
        canonical = float(thresholds[idx])
        review_fraction = float(tp[idx] + fp[idx]) / total
        residual = _residual_per_100(int(tp[idx]), p, total, review_efficacy)

    ci = None
    if bootstrap is not None:
        if ci_method == "replicate":
            values = np.sort(
                np.array([r[2] for r in map_replicates(dataset, bootstrap, run)])
            )
            ci = _percentile_ci(values, bootstrap.confidence)
            notes.append("ci covers residual_fn_per_100 (replicate percentile method)")
        elif ci_method == "band":
            band = confidence_band(dataset, bootstrap)
            fpr_here = (float(fp[idx]) / dataset.n_count) if idx is not None else 0.0
            tpr_lo = float(np.interp(fpr_here, band.fpr_grid, band.lower_tpr))
            tpr_hi = float(np.interp(fpr_here, band.fpr_grid, band.upper_tpr))
            # residual errors = P - efficacy * TP = P * (1 - efficacy * tpr)
            lo = 100.0 * p * (1.0 - review_efficacy * tpr_hi) / total
            hi = 100.0 * p * (1.0 - review_efficacy * tpr_lo) / total
            ci = (max(lo, 0.0), min(hi, 100.0))
            notes.append("ci covers residual_fn_per_100 (band limits method)")
        else:
            raise ValueError(f"unknown ci_method {ci_method!r}; use replicate or band")
    if review_efficacy < 1.0:
        notes.append(f"review efficacy: {review_efficacy!r}")

    return DecisionReport(
        scenario=Scenario.REVIEW_BUDGET,
        threshold_raw=raw_threshold(canonical, dataset.orientation),
        threshold_canonical=canonical,
        review_fraction=review_fraction,
        residual_fn_per_100=residual,
        ci=ci,
        notes=tuple(notes),
    )


def scenario2_required_effort(
    dataset: Dataset,
    tolerable_fn_per_100_y: float,
    *,
    review_efficacy: float = 1.0,
    bootstrap: Optional[BootstrapConfig] = None,
) -> DecisionReport:
    """Review effort needed to keep residual errors within a target.

    The budget is y/100 * total missed errors; the procedure walks tie-group
    boundaries from the worst score and stops at the smallest review set
    whose residual fits the budget. An empty review set qualifies when the
    error count is already tolerable. With ``bootstrap`` set, a replicate
    percentile interval for review_fraction is attached.
    """
    if not 0.0 <= tolerable_fn_per_100_y <= 100.0:
        raise ValueError(
            f"tolerable fn per 100 must be in [0, 100], got {tolerable_fn_per_100_y}"
        )
    _check_efficacy(review_efficacy)
    _require_both_classes(dataset, "risk-target analysis")

    total = dataset.total
    p = dataset.p_count
    budget = tolerable_fn_per_100_y / 100.0 * total

    def run(pos: np.ndarray, neg: np.ndarray) -> tuple[Optional[int], bool, float]:
        thresholds, tp, fp = _group_stats(pos, neg)
        idx, attained = _pick_smallest_meeting_budget(tp, fp, p, budget, review_efficacy)
        fraction = 0.0 if idx is None else float(tp[idx] + fp[idx]) / total
        return idx, attained, fraction

    thresholds, tp, fp = _group_stats(dataset.positive_risks, dataset.negative_risks)
    idx, attained = _pick_smallest_meeting_budget(tp, fp, p, budget, review_efficacy)
    notes = [f"error budget: {budget!r} missed errors in {total} segments"]
    if idx is None:
        canonical = math.inf
        review_fraction = 0.0
        residual = _residual_per_100(0, p, total, review_efficacy)
    else:
        canonical = float(thresholds[idx])
        review_fraction = float(tp[idx] + fp[idx]) / total
        residual = _residual_per_100(int(tp[idx]), p, total, review_efficacy)
    if not attained:
        notes.append(
            "the target is unattainable at this review efficacy even when "
            "everything is reviewed"
        )

    ci = None
    if bootstrap is not None:
        values = np.sort(
            np.array([r[2] for r in map_replicates(dataset, bootstrap, run)])
        )
        ci = _percentile_ci(values, bootstrap.confidence)
        notes.append("ci covers review_fraction (replicate percentile method)")
    if review_efficacy < 1.0:
        notes.append(f"review efficacy: {review_efficacy!r}")

    return DecisionReport(
        scenario=Scenario.RISK_TARGET,
        threshold_raw=raw_threshold(canonical, dataset.orientation),
        threshold_canonical=canonical,
        review_fraction=review_fraction,
        residual_fn_per_100=residual,
        ci=ci,
        notes=tuple(notes),
    )


def optimal_threshold(
    curve: RocCurve,
    trade_off: TradeOff,
    ratio: Optional[ClassRatio] = None,
) -> DecisionReport:
    """Vertex where an iso-performance line first touches the curve.

    The line's slope is m = (fp_unit_cost * n) / (fn_unit_cost * p); the
    selected vertex maximizes tpr - m * fpr, which is where a line of that
    slope sweeping in from the northwest first meets the curve. Exact ties
    resolve to the lower-fpr vertex. ``ratio`` defaults to the curve's own
    class counts; pass an explicit ratio to plan for a different deployment
    mix.
    """
    if ratio is None:
        ratio = ClassRatio(float(curve.p_count), float(curve.n_count))
    m = (trade_off.fp_unit_cost * ratio.n) / (trade_off.fn_unit_cost * ratio.p)

    best = curve.vertices[0]
    best_objective = best.tpr - m * best.fpr
    for vertex in curve.vertices[1:]:
        objective = vertex.tpr - m * vertex.fpr
        if objective > best_objective:
            best, best_objective = vertex, objective

    total = curve.p_count + curve.n_count
    flagged = best.counts.tp + best.counts.fp
    return DecisionReport(
        scenario=Scenario.OPTIMAL_THRESHOLD,
        threshold_raw=best.threshold_raw,
        threshold_canonical=best.threshold,
        review_fraction=flagged / total,
        residual_fn_per_100=100.0 * best.counts.fn / total,
        ci=None,
        notes=(
            f"iso-performance slope m = {m!r}",
            f"objective tpr - m*fpr = {best_objective!r} at "
            f"(fpr={best.fpr!r}, tpr={best.tpr!r})",
        ),
    )


def _percentile_ci(sorted_values: np.ndarray, confidence: float) -> tuple[float, float]:
    alpha = 1.0 - confidence
    return (
        float(nearest_rank(sorted_values, alpha / 2.0)),
        float(nearest_rank(sorted_values, 1.0 - alpha / 2.0)),
    )


def _residual_per_100(tp: int, p: int, total: int, efficacy: float) -> float:
    corrected = efficacy * tp
    return 100.0 * (p - corrected) / total


def _check_efficacy(review_efficacy: float) -> None:
    if not 0.0 < review_efficacy <= 1.0:
        raise ValueError(
            f"review efficacy must be in (0, 1], got {review_efficacy}"
        )


def _require_both_classes(dataset: Dataset, what: str) -> None:
    if dataset.p_count == 0 or dataset.n_count == 0:
        empty = "positive" if dataset.p_count == 0 else "negative"
        raise DegenerateClassError(f"no {empty} segments: {what} is undefined")
