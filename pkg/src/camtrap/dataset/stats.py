"""Dataset audit statistics: per-class tag counts and resolution spread."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from ..catalog import SpeciesCatalog
from .voc import VocDocument


@dataclass(frozen=True)
class DatasetStats:
    per_class_counts: dict[int, int] = field(default_factory=dict)
    resolution_histogram: dict[tuple[int, int], int] = field(default_factory=dict)
    mean_resolution: tuple[float, float] = (0.0, 0.0)
    total_images: int = 0
    total_objects: int = 0
    excluded_images: int = 0

    def render(self, catalog: SpeciesCatalog) -> str:
        """Tab-separated report: summary block, class table, resolution table."""
        out = [
            f"total_images\t{self.total_images}",
            f"total_objects\t{self.total_objects}",
            f"excluded_images\t{self.excluded_images}",
            f"mean_resolution\t{self.mean_resolution[0]:.1f}\t{self.mean_resolution[1]:.1f}",
            "",
            "class_id\tscientific_name\tcount",
        ]
        for class_id in sorted(self.per_class_counts):
            name = (
                catalog.scientific_name(class_id) if class_id in catalog else f"class-{class_id}"
            )
            out.append(f"{class_id}\t{name}\t{self.per_class_counts[class_id]}")
        out.append("")
        out.append("width\theight\timages")
        for (w, h), count in sorted(self.resolution_histogram.items()):
            out.append(f"{w}\t{h}\t{count}")
        return "\n".join(out) + "\n"


def compute_stats(docs: list[VocDocument], catalog: SpeciesCatalog) -> DatasetStats:
    """Aggregate counts over the non-excluded documents.

    Excluded documents are tallied separately and contribute nothing to
    any histogram or mean.
    """
    class_counts: Counter[int] = Counter()
    resolutions: Counter[tuple[int, int]] = Counter()
    width_sum = 0.0
    height_sum = 0.0
    included = 0
    excluded = 0
    objects = 0

    for doc in docs:
        if doc.excluded:
            excluded += 1
            continue
        included += 1
        resolutions[(doc.image_width, doc.image_height)] += 1
        width_sum += doc.image_width
        height_sum += doc.image_height
        for obj in doc.objects:
            class_counts[catalog.lookup(obj.name)] += 1
            objects += 1

    mean = (width_sum / included, height_sum / included) if included else (0.0, 0.0)
    return DatasetStats(
        per_class_counts=dict(class_counts),
        resolution_histogram=dict(resolutions),
        mean_resolution=mean,
        total_images=included,
        total_objects=objects,
        excluded_images=excluded,
    )
