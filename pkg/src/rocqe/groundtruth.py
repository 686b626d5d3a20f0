"""Ground-truth labels from MQM-style annotations.

MQM scores are negative-valued penalty sums per segment (0 = clean). A
severity cutoff turns the score into a binary label: error-containing
(positive) or error-free (negative).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping

from .model import Label


class Severity(Enum):
    MAJOR_NON_TRANSLATION = "major/non-translation"
    MAJOR = "major"
    MINOR_FLUENCY_OR_PUNCTUATION = "minor/fluency-punctuation"
    MINOR_OTHER = "minor/other"
    NEUTRAL = "neutral"


# Penalty points per error, in the WMT23 weighting. Not scaled by word count.
SEVERITY_WEIGHTS: dict[Severity, float] = {
    Severity.MAJOR_NON_TRANSLATION: 25.0,
    Severity.MAJOR: 5.0,
    Severity.MINOR_FLUENCY_OR_PUNCTUATION: 0.1,
    Severity.MINOR_OTHER: 1.0,
    Severity.NEUTRAL: 0.0,
}


@dataclass(frozen=True)
class MqmErrorMark:
    """A batch of identical error annotations on one segment."""

    severity: Severity
    count: int = 1

    def __post_init__(self) -> None:
        if self.count < 1:
            raise ValueError(f"count must be >= 1, got {self.count}")


@dataclass(frozen=True)
class SeverityCutoff:
    """Decision boundary on the MQM score.

    A segment is positive when its score is below ``threshold``, or equal to
    it when ``inclusive`` is set. The two named cutoffs differ exactly at
    their boundaries: ``strict`` flags any nonzero penalty (score < 0) while
    ``lenient`` tolerates minor errors and flags score <= -5, so a single
    major error is already positive.
    """

    threshold: float
    inclusive: bool
    name: str = "custom"

    def __post_init__(self) -> None:
        if self.threshold > 0:
            raise ValueError(f"cutoff threshold must be <= 0, got {self.threshold}")

    @classmethod
    def strict_any_error(cls) -> "SeverityCutoff":
        return cls(0.0, inclusive=False, name="strict")

    @classmethod
    def lenient(cls) -> "SeverityCutoff":
        return cls(-5.0, inclusive=True, name="lenient")

    @classmethod
    def custom(cls, threshold: float, inclusive: bool = False) -> "SeverityCutoff":
        return cls(float(threshold), inclusive=inclusive)

    def describe(self) -> str:
        op = "<=" if self.inclusive else "<"
        return f"{self.name} (positive iff score {op} {self.threshold:g})"


STRICT_ANY_ERROR = SeverityCutoff.strict_any_error()
LENIENT = SeverityCutoff.lenient()


def mqm_segment_score(marks: Iterable[MqmErrorMark]) -> float:
    """Aggregate error marks into one negative segment score.

    An empty mark list scores 0 (clean segment). Aggregation is a plain
    weighted sum, so it is additive over concatenated mark lists.
    """
    return -sum(SEVERITY_WEIGHTS[m.severity] * m.count for m in marks)


def label(mqm_score: float, cutoff: SeverityCutoff) -> Label:
    """Binary label for one MQM score under a severity cutoff.

    Positive scores are unexpected (annotation tooling emits penalties as
    negative values); they raise a warning but still label as negative under
    any valid cutoff.
    """
    if mqm_score > 0:
        warnings.warn(
            f"MQM score {mqm_score!r} is positive; penalty scores are expected "
            "to be <= 0",
            stacklevel=2,
        )
    if mqm_score < cutoff.threshold:
        return Label.POSITIVE
    if cutoff.inclusive and mqm_score == cutoff.threshold:
        return Label.POSITIVE
    return Label.NEGATIVE


def label_dataset(
    scores: Mapping[str, float], cutoff: SeverityCutoff
) -> tuple[dict[str, Label], int, int]:
    """Label every segment and tally class sizes (labels, P, N)."""
    if not scores:
        raise ValueError("cannot label an empty score map")
    labels = {sid: label(score, cutoff) for sid, score in scores.items()}
    p = sum(1 for lab in labels.values() if lab is Label.POSITIVE)
    return labels, p, len(labels) - p
