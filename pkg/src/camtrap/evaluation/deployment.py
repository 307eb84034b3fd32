"""Field-deployment evaluation: reviewer verdicts versus model predictions.

This is classification-mode evaluation: each reviewed detection
contributes one (actual=verdict class, predicted=model class) pair.
NO_GOOD verdicts are dropped entirely; BLANK verdicts count against the
predicted class through the matrix's background row.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..catalog import SpeciesCatalog
from ..errors import UnverifiedDetections
from ..models import Detection, VerdictSentinel
from .confusion import (
    BACKGROUND,
    ClassMetrics,
    ConfusionMatrix,
    MacroAverages,
    MacroPolicy,
    class_metrics,
    macro_average,
    render_percent,
)


@dataclass(frozen=True)
class DeploymentReport:
    matrix: ConfusionMatrix | None
    per_class: dict[int, ClassMetrics]
    averages: MacroAverages | None
    evaluated: int
    unverified: int
    excluded_no_good: int
    policy: MacroPolicy

    def render(self, catalog: SpeciesCatalog) -> str:
        """Metrics table (one row per class) followed by the matrix dump."""
        lines = [
            f"evaluated\t{self.evaluated}",
            f"unverified_excluded\t{self.unverified}",
            f"no_good_excluded\t{self.excluded_no_good}",
            "",
            "class\tAccuracy\tPrecision\tSensitivity\tSpecificity\tF1",
        ]
        for class_id in self.per_class:
            m = self.per_class[class_id]
            lines.append(
                "\t".join(
                    [
                        _class_label(catalog, class_id),
                        render_percent(m.accuracy),
                        render_percent(m.precision),
                        render_percent(m.recall),
                        render_percent(m.specificity),
                        render_percent(m.f1),
                    ]
                )
            )
        if self.averages is not None:
            a = self.averages
            lines.append(
                "\t".join(
                    [
                        f"average ({a.policy.value})",
                        render_percent(a.accuracy),
                        render_percent(a.precision),
                        render_percent(a.recall),
                        render_percent(a.specificity),
                        render_percent(a.f1),
                    ]
                )
            )
        lines.append("")
        if self.matrix is not None:
            lines.append(render_matrix(self.matrix, catalog))
        return "\n".join(lines)


def _class_label(catalog: SpeciesCatalog, class_id: int) -> str:
    return catalog.scientific_name(class_id) if class_id in catalog else f"class-{class_id}"


def render_matrix(cm: ConfusionMatrix, catalog: SpeciesCatalog) -> str:
    """Matrix dump, actual rows by predicted columns, with marginal totals."""
    names = [_class_label(catalog, c) for c in cm.classes]
    lines = ["actual\\predicted\t" + "\t".join(names) + "\ttotal_actual"]
    for i, name in enumerate(names):
        row = cm.counts[i]
        lines.append(f"{name}\t" + "\t".join(str(c) for c in row) + f"\t{sum(row)}")
    if cm.background_row is not None:
        bg = cm.background_row
        lines.append("(blank)\t" + "\t".join(str(c) for c in bg) + f"\t{sum(bg)}")
    col_totals = [
        sum(cm.counts[a][p] for a in range(len(cm.classes)))
        + (cm.background_row[p] if cm.background_row is not None else 0)
        for p in range(len(cm.classes))
    ]
    lines.append(
        "total_predicted\t" + "\t".join(str(c) for c in col_totals) + f"\t{cm.grand_total}"
    )
    return "\n".join(lines) + "\n"


def deployment_report(
    detections: list[Detection],
    policy: MacroPolicy = MacroPolicy.SKIP_UNDEFINED,
    require_verified: bool = False,
) -> DeploymentReport:
    """Confusion matrix and per-class metrics over reviewed detections.

    Detections without a verdict are excluded and counted; with
    ``require_verified`` their presence is an error instead.
    """
    unverified = sum(1 for d in detections if d.verdict is None)
    if require_verified and unverified:
        raise UnverifiedDetections(unverified)

    pairs: list[tuple[int, int]] = []
    no_good = 0
    for det in detections:
        verdict = det.verdict
        if verdict is None:
            continue
        if verdict.sentinel is VerdictSentinel.NO_GOOD:
            no_good += 1
            continue
        actual = BACKGROUND if verdict.sentinel is VerdictSentinel.BLANK else verdict.true_class_id
        pairs.append((actual, det.class_id))

    if not pairs:
        return DeploymentReport(
            matrix=None,
            per_class={},
            averages=None,
            evaluated=0,
            unverified=unverified,
            excluded_no_good=no_good,
            policy=policy,
        )

    matrix = ConfusionMatrix.from_pairs(pairs)
    per_class = {c: class_metrics(matrix, c) for c in matrix.classes}
    averages = macro_average(list(per_class.values()), policy)
    return DeploymentReport(
        matrix=matrix,
        per_class=per_class,
        averages=averages,
        evaluated=len(pairs),
        unverified=unverified,
        excluded_no_good=no_good,
        policy=policy,
    )
