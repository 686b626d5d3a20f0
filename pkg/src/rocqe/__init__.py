"""Tie-aware ROC analysis and decision support for translation QE scores."""

from .bootstrap import (
    BandWidthSummary,
    BootstrapConfig,
    ConfidenceBand,
    band_width_summary,
    confidence_band,
    map_replicates,
    replicate_rng,
    resample_stratified,
)
from .decision import (
    ClassRatio,
    DecisionReport,
    QeRocTable,
    Scenario,
    TableRow,
    TradeOff,
    optimal_threshold,
    qe_roc_table,
    scenario1_residual_risk,
    scenario2_required_effort,
)
from .diagnostics import REPRESENTATIVENESS_NOTE, Finding, check_band, check_sample
from .groundtruth import (
    LENIENT,
    SEVERITY_WEIGHTS,
    STRICT_ANY_ERROR,
    MqmErrorMark,
    Severity,
    SeverityCutoff,
    label,
    label_dataset,
    mqm_segment_score,
)
from .ingest import (
    CanonicalRecord,
    IngestError,
    IngestReport,
    parse_canonical_tsv,
    parse_wmt_layout,
    to_dataset,
    write_dataset_tsv,
)
from .model import (
    ConfusionCounts,
    Dataset,
    DegenerateClassError,
    Label,
    NonFiniteScoreError,
    Orientation,
    Rates,
    ScoredSegment,
    canonicalize,
    counts_from_rates,
    rates,
)
from .roc import (
    GroundTruthMismatchError,
    HullVertex,
    PrPoint,
    RocCurve,
    RocHull,
    RocVertex,
    auc,
    build_roc,
    convex_hull,
    curve_tpr_at,
    f1_at,
    hull_tpr_at,
    partial_auc,
    pr_points,
)

__version__ = "0.1.0"

__all__ = [
    "BandWidthSummary",
    "BootstrapConfig",
    "CanonicalRecord",
    "ClassRatio",
    "ConfidenceBand",
    "ConfusionCounts",
    "Dataset",
    "DecisionReport",
    "DegenerateClassError",
    "Finding",
    "GroundTruthMismatchError",
    "HullVertex",
    "IngestError",
    "IngestReport",
    "LENIENT",
    "Label",
    "MqmErrorMark",
    "NonFiniteScoreError",
    "Orientation",
    "PrPoint",
    "QeRocTable",
    "REPRESENTATIVENESS_NOTE",
    "Rates",
    "RocCurve",
    "RocHull",
    "RocVertex",
    "STRICT_ANY_ERROR",
    "SEVERITY_WEIGHTS",
    "Scenario",
    "ScoredSegment",
    "Severity",
    "SeverityCutoff",
    "TableRow",
    "TradeOff",
    "auc",
    "band_width_summary",
    "build_roc",
    "canonicalize",
    "check_band",
    "check_sample",
    "confidence_band",
    "convex_hull",
    "counts_from_rates",
    "curve_tpr_at",
    "f1_at",
    "hull_tpr_at",
    "label",
    "label_dataset",
    "map_replicates",
    "mqm_segment_score",
    "optimal_threshold",
    "parse_canonical_tsv",
    "parse_wmt_layout",
    "partial_auc",
    "pr_points",
    "qe_roc_table",
    "rates",
    "replicate_rng",
    "resample_stratified",
    "scenario1_residual_risk",
    "scenario2_required_effort",
    "to_dataset",
    "write_dataset_tsv",
]
