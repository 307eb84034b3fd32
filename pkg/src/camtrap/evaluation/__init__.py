"""Detector evaluation: IoU matching, confusion matrices, metric curves, mAP."""

from .average_precision import MapReport, average_precision, map_at_50, pr_curve
from .confusion import (
    ClassMetrics,
    ConfusionMatrix,
    MacroAverages,
    MacroPolicy,
    class_metrics,
    macro_average,
    render_percent,
)
from .curves import CurveBundle, CurveSeries, confidence_curves, default_grid
from .deployment import DeploymentReport, deployment_report
from .matching import MatchResult, iou, match_detections
from .records import GroundTruth, ScoredPrediction, parse_record_lines
from .reference import FIELD_TRIAL_REFERENCE, ReconciliationReport, reconcile

__all__ = [
    "FIELD_TRIAL_REFERENCE",
    "ClassMetrics",
    "ConfusionMatrix",
    "CurveBundle",
    "CurveSeries",
    "DeploymentReport",
    "GroundTruth",
    "MacroAverages",
    "MacroPolicy",
    "MapReport",
    "MatchResult",
    "ReconciliationReport",
    "ScoredPrediction",
    "average_precision",
    "class_metrics",
    "confidence_curves",
    "default_grid",
    "deployment_report",
    "iou",
    "macro_average",
    "map_at_50",
    "match_detections",
    "parse_record_lines",
    "pr_curve",
    "reconcile",
    "render_percent",
]
