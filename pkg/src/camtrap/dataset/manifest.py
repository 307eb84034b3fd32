"""Training-run manifest export.

The manifest pins the hyperparameters and augmentation gains a detector
is trained with, as a flat ``key=value`` file that training jobs consume.
Defaults match the configuration the curlew model shipped with.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, fields
from pathlib import Path

from ..errors import InvalidOverride

# Fields that are probabilities or unit-interval gains.
_UNIT_INTERVAL = frozenset({"hsv_h", "hsv_s", "hsv_v", "fliplr", "translate", "erasing"})
_INTEGRAL = frozenset({"image_size", "batch", "epochs"})


@dataclass(frozen=True)
class TrainingManifest:
    image_size: int = 640
    batch: int = 256
    epochs: int = 50
    learning_rate: float = 0.01
    momentum: float = 0.937
    hsv_h: float = 0.015
    hsv_s: float = 0.7
    hsv_v: float = 0.4
    fliplr: float = 0.5
    translate: float = 0.1
    scale: float = 0.5
    erasing: float = 0.4

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if not isinstance(value, (int, float)) or isinstance(value, bool):
                raise InvalidOverride(f"{f.name} must be numeric, got {value!r}")
            if value != value or value in (float("inf"), float("-inf")):
                raise InvalidOverride(f"{f.name} must be finite")
            if f.name in _UNIT_INTERVAL:
                if not 0.0 <= value <= 1.0:
                    raise InvalidOverride(f"{f.name}={value} outside [0, 1]")
            elif value <= 0:
                raise InvalidOverride(f"{f.name}={value} must be positive")
            if f.name in _INTEGRAL and int(value) != value:
                raise InvalidOverride(f"{f.name}={value} must be an integer")

    def serialize(self) -> str:
        def fmt(v: float | int) -> str:
            return str(int(v)) if isinstance(v, int) or v == int(v) else repr(float(v))

        return "".join(f"{k}={fmt(v)}\n" for k, v in asdict(self).items())


def export_training_manifest(
    path: str | Path, overrides: dict[str, float] | None = None
) -> TrainingManifest:
    """Write the manifest file, applying any overrides after validation."""
    known = {f.name for f in fields(TrainingManifest)}
    overrides = overrides or {}
    unknown = set(overrides) - known
    if unknown:
        raise InvalidOverride(f"unknown manifest keys: {sorted(unknown)}")
    manifest = TrainingManifest(**overrides)
    Path(path).write_text(manifest.serialize(), encoding="utf-8")
    return manifest
