"""Dataset preparation: annotation parsing, label conversion, splits, stats."""

from .manifest import TrainingManifest, export_training_manifest
from .splits import DatasetSplit, split_dataset
from .stats import DatasetStats, compute_stats
from .voc import VocDocument, VocObject, parse_voc, parse_voc_file
from .yolo import YoloLabelFile, YoloRow, voc_to_yolo, yolo_to_box

__all__ = [
    "DatasetSplit",
    "DatasetStats",
    "TrainingManifest",
    "VocDocument",
    "VocObject",
    "YoloLabelFile",
    "YoloRow",
    "compute_stats",
    "export_training_manifest",
    "parse_voc",
    "parse_voc_file",
    "split_dataset",
    "voc_to_yolo",
    "yolo_to_box",
]
