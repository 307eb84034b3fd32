"""Reconciliation of derived metrics against externally reported figures.

Published evaluation write-ups sometimes carry numbers that cannot be
reproduced from their own confusion counts. Rather than silently trusting
either side, a reconciliation derives every metric from the counts,
prints it next to the reported figure, and flags each pair as consistent
or not at two-decimal display precision.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..catalog import SpeciesCatalog
from .confusion import (
    ClassMetrics,
    ConfusionMatrix,
    MacroAverages,
    Metric,
    class_metrics,
    macro_average,
    render_percent,
)

_METRIC_NAMES = ("accuracy", "precision", "recall", "specificity", "f1")


@dataclass(frozen=True)
class ClassReference:
    """Reported per-class percentages (two-decimal display values)."""

    class_id: int
    accuracy: float | None = None
    precision: float | None = None
    recall: float | None = None
    specificity: float | None = None
    f1: float | None = None


@dataclass(frozen=True)
class MetricsReference:
    """A reported results table: per-class rows plus headline averages."""

    per_class: tuple[ClassReference, ...] = ()
    average_precision_pct: float | None = None
    average_recall_pct: float | None = None
    average_specificity_pct: float | None = None
    average_f1_pct: float | None = None
    overall_accuracy_pct: float | None = None


@dataclass(frozen=True)
class ReconciliationRow:
    scope: str  # class label or 'average' / 'overall'
    metric: str
    reported_pct: float
    derived: Metric
    consistent: bool

    @property
    def derived_display(self) -> str:
        return render_percent(self.derived)


@dataclass(frozen=True)
class ReconciliationReport:
    rows: tuple[ReconciliationRow, ...] = ()

    @property
    def inconsistent(self) -> tuple[ReconciliationRow, ...]:
        return tuple(r for r in self.rows if not r.consistent)

    def row(self, scope: str, metric: str) -> ReconciliationRow:
        for r in self.rows:
            if r.scope == scope and r.metric == metric:
                return r
        raise KeyError((scope, metric))

    def render(self) -> str:
        lines = ["scope\tmetric\treported\tderived\tstatus"]
        for r in self.rows:
            status = "OK" if r.consistent else "MISMATCH"
            lines.append(
                f"{r.scope}\t{r.metric}\t{r.reported_pct:.2f}%\t{r.derived_display}\t{status}"
            )
        return "\n".join(lines) + "\n"


def _is_consistent(reported_pct: float, derived: Metric) -> bool:
    if derived is None:
        return False
    return render_percent(derived) == f"{reported_pct:.2f}%"


def reconcile(
    matrix: ConfusionMatrix,
    reference: MetricsReference,
    catalog: SpeciesCatalog | None = None,
) -> ReconciliationReport:
    """Compare every reported figure with its counts-derived counterpart."""

    def label(class_id: int) -> str:
        if catalog is not None and class_id in catalog:
            return catalog.scientific_name(class_id)
        return f"class-{class_id}"

    rows: list[ReconciliationRow] = []
    derived_by_class: dict[int, ClassMetrics] = {
        c: class_metrics(matrix, c) for c in matrix.classes
    }

    for ref in reference.per_class:
        derived = derived_by_class.get(ref.class_id)
        for name in _METRIC_NAMES:
            reported = getattr(ref, name)
            if reported is None:
                continue
            value = getattr(derived, name) if derived is not None else None
            rows.append(
                ReconciliationRow(
                    scope=label(ref.class_id),
                    metric=name,
                    reported_pct=reported,
                    derived=value,
                    consistent=_is_consistent(reported, value),
                )
            )

    averages: MacroAverages = macro_average(list(derived_by_class.values()))
    for name, reported in (
        ("precision", reference.average_precision_pct),
        ("recall", reference.average_recall_pct),
        ("specificity", reference.average_specificity_pct),
        ("f1", reference.average_f1_pct),
    ):
        if reported is None:
            continue
        value = getattr(averages, name)
        rows.append(
            ReconciliationRow(
                scope="average",
                metric=name,
                reported_pct=reported,
                derived=value,
                consistent=_is_consistent(reported, value),
            )
        )

    if reference.overall_accuracy_pct is not None:
        overall = (
            Fraction(matrix.trace, matrix.grand_total) if matrix.grand_total else None
        )
        rows.append(
            ReconciliationRow(
                scope="overall",
                metric="accuracy",
                reported_pct=reference.overall_accuracy_pct,
                derived=overall,
                consistent=_is_consistent(reference.overall_accuracy_pct, overall),
            )
        )

    return ReconciliationReport(rows=tuple(rows))


# The published results table for the curlew field trial this platform
# shipped with, kept as reference data so reports can show reported vs
# derived figures side by side.
FIELD_TRIAL_REFERENCE = MetricsReference(
    per_class=(
        ClassReference(
            class_id=22, accuracy=93.41, precision=100.0, recall=90.56,
            specificity=100.0, f1=95.05,
        ),
        ClassReference(
            class_id=23, accuracy=97.51, precision=100.0, recall=92.35,
            specificity=100.0, f1=96.03,
        ),
        ClassReference(
            class_id=20, accuracy=100.0, precision=100.0, recall=100.0,
            specificity=100.0, f1=100.0,
        ),
    ),
    average_precision_pct=60.34,
    average_recall_pct=95.48,
    average_specificity_pct=98.17,
    average_f1_pct=58.88,
    overall_accuracy_pct=91.23,
)

# Confusion counts from the same trial (actual rows x predicted columns,
# classes 22, 23, 18, 20). Row data as published; the published marginal
# totals do not all agree with these cells, which is exactly what the
# reconciliation report exists to surface.
FIELD_TRIAL_MATRIX = ConfusionMatrix(
    classes=(22, 23, 18, 20),
    counts=(
        (662, 0, 36, 33),
        (0, 302, 0, 25),
        (0, 0, 0, 0),
        (0, 0, 0, 13),
    ),
)
