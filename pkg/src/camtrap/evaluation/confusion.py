"""Confusion matrices and the per-class metrics derived from them.

Counts-to-metrics arithmetic is exact (``fractions.Fraction``); rounding
happens only when a value is rendered. A 0/0 metric is UNDEFINED and
surfaces as ``None`` rather than being coerced to zero, since absent
classes otherwise produce misleading rows.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Sequence

from ..errors import EmptyInput, UnknownClass
from .matching import MatchResult

Metric = Fraction | None

BACKGROUND = -1  # pseudo-class for unmatched rows/columns and blank verdicts


@dataclass(frozen=True)
class ConfusionMatrix:
    """Square counts over a class list, rows=actual, columns=predicted.

    ``background_row`` counts predictions whose actual content is nothing
    (false alarms); ``background_column`` counts truths no prediction
    claimed (misses). Both are optional and used in detection mode.
    """

    classes: tuple[int, ...]
    counts: tuple[tuple[int, ...], ...]
    background_row: tuple[int, ...] | None = None
    background_column: tuple[int, ...] | None = None

    def __post_init__(self):
        n = len(self.classes)
        if len(set(self.classes)) != n:
            raise ValueError("duplicate class ids")
        if len(self.counts) != n or any(len(row) != n for row in self.counts):
            raise ValueError("counts must be a square matrix over the class list")
        cells: list[int] = [c for row in self.counts for c in row]
        for extra in (self.background_row, self.background_column):
            if extra is not None:
                if len(extra) != n:
                    raise ValueError("background counts must match the class list")
                cells.extend(extra)
        if any(c < 0 for c in cells):
            raise ValueError("negative count")

    @property
    def grand_total(self) -> int:
        total = sum(sum(row) for row in self.counts)
        if self.background_row is not None:
            total += sum(self.background_row)
        if self.background_column is not None:
            total += sum(self.background_column)
        return total

    @property
    def trace(self) -> int:
        return sum(self.counts[i][i] for i in range(len(self.classes)))

    def index_of(self, class_id: int) -> int:
        try:
            return self.classes.index(class_id)
        except ValueError:
            raise UnknownClass(f"class {class_id} not in matrix") from None

    def cell(self, actual: int, predicted: int) -> int:
        return self.counts[self.index_of(actual)][self.index_of(predicted)]

    @classmethod
    def from_pairs(
        cls, pairs: Iterable[tuple[int, int]], classes: Sequence[int] | None = None
    ) -> "ConfusionMatrix":
        """Classification-mode matrix from (actual, predicted) class pairs.

        An actual of ``BACKGROUND`` lands in the background row (a
        prediction on an actually-empty image).
        """
        pairs = list(pairs)
        if classes is None:
            seen = {c for a, p in pairs for c in (a, p) if c != BACKGROUND}
            classes = sorted(seen)
        classes = tuple(classes)
        idx = {c: i for i, c in enumerate(classes)}
        n = len(classes)
        grid = [[0] * n for _ in range(n)]
        background = [0] * n
        has_background = False
        for actual, predicted in pairs:
            if actual == BACKGROUND:
                background[idx[predicted]] += 1
                has_background = True
            else:
                grid[idx[actual]][idx[predicted]] += 1
        return cls(
            classes=classes,
            counts=tuple(tuple(row) for row in grid),
            background_row=tuple(background) if has_background else None,
        )

    @classmethod
    def from_match_result(
        cls, result: MatchResult, classes: Sequence[int] | None = None
    ) -> "ConfusionMatrix":
        """Detection-mode matrix: diagonal matches plus background row/column."""
        if classes is None:
            seen = {p.class_id for p, _ in result.pairs}
            seen.update(t.class_id for t in result.unmatched_truths)
            seen.update(t.class_id for _, t in result.pairs if t is not None)
            classes = sorted(seen)
        classes = tuple(classes)
        idx = {c: i for i, c in enumerate(classes)}
        n = len(classes)
        grid = [[0] * n for _ in range(n)]
        bg_row = [0] * n
        bg_col = [0] * n
        for pred, truth in result.pairs:
            if truth is None:
                bg_row[idx[pred.class_id]] += 1
            else:
                grid[idx[truth.class_id]][idx[pred.class_id]] += 1
        for truth in result.unmatched_truths:
            bg_col[idx[truth.class_id]] += 1
        return cls(
            classes=classes,
            counts=tuple(tuple(row) for row in grid),
            background_row=tuple(bg_row),
            background_column=tuple(bg_col),
        )


@dataclass(frozen=True)
class ClassMetrics:
    """One-vs-rest counts and the ratio metrics they induce."""

    class_id: int
    tp: int
    fp: int
    tn: int
    fn: int
    precision: Metric
    recall: Metric
    specificity: Metric
    f1: Metric
    accuracy: Metric

    @property
    def sensitivity(self) -> Metric:
        return self.recall

    @classmethod
    def from_counts(cls, class_id: int, tp: int, fp: int, tn: int, fn: int) -> "ClassMetrics":
        def ratio(num: int, den: int) -> Metric:
            return Fraction(num, den) if den else None

        return cls(
            class_id=class_id,
            tp=tp,
            fp=fp,
            tn=tn,
            fn=fn,
            precision=ratio(tp, tp + fp),
            recall=ratio(tp, tp + fn),
            specificity=ratio(tn, tn + fp),
            f1=ratio(2 * tp, 2 * tp + fp + fn),
            accuracy=ratio(tp + tn, tp + tn + fp + fn),
        )


def class_metrics(cm: ConfusionMatrix, class_id: int) -> ClassMetrics:
    """One-vs-rest metrics for ``class_id`` against the rest of the matrix.

    tp is the diagonal cell; fp everything else in the class's column
    (plus its background-row cell); fn everything else in its row (plus
    its background-column cell); tn is the remainder of the grand total.
    """
    i = cm.index_of(class_id)
    tp = cm.counts[i][i]
    fp = sum(cm.counts[a][i] for a in range(len(cm.classes)) if a != i)
    fn = sum(cm.counts[i][p] for p in range(len(cm.classes)) if p != i)
    if cm.background_row is not None:
        fp += cm.background_row[i]
    if cm.background_column is not None:
        fn += cm.background_column[i]
    tn = cm.grand_total - tp - fp - fn
    return ClassMetrics.from_counts(class_id, tp=tp, fp=fp, tn=tn, fn=fn)


class MacroPolicy(str, Enum):
    SKIP_UNDEFINED = "skip-undefined"
    UNDEFINED_AS_ZERO = "undefined-as-zero"


@dataclass(frozen=True)
class MacroAverages:
    precision: Metric
    recall: Metric
    specificity: Metric
    f1: Metric
    accuracy: Metric
    n_classes: int
    policy: MacroPolicy


def macro_average(
    metrics: Sequence[ClassMetrics], policy: MacroPolicy = MacroPolicy.SKIP_UNDEFINED
) -> MacroAverages:
    """Arithmetic mean of each metric across classes.

    Under SKIP_UNDEFINED a class missing a metric simply drops out of
    that metric's mean; under UNDEFINED_AS_ZERO it counts as zero.
    """
    if not metrics:
        raise EmptyInput("no class metrics to average")

    def mean(name: str) -> Metric:
        values = [getattr(m, name) for m in metrics]
        if policy is MacroPolicy.UNDEFINED_AS_ZERO:
            values = [v if v is not None else Fraction(0) for v in values]
        else:
            values = [v for v in values if v is not None]
        if not values:
            return None
        return sum(values, Fraction(0)) / len(values)

    return MacroAverages(
        precision=mean("precision"),
        recall=mean("recall"),
        specificity=mean("specificity"),
        f1=mean("f1"),
        accuracy=mean("accuracy"),
        n_classes=len(metrics),
        policy=policy,
    )


def round_half_up(value: Fraction, decimals: int = 2) -> Fraction:
    """Round a non-negative rational half-up at ``decimals`` places."""
    scale = 10**decimals
    scaled = value * scale
    q, r = divmod(scaled.numerator, scaled.denominator)
    if 2 * r >= scaled.denominator:
        q += 1
    return Fraction(q, scale)


def percent_value(metric: Metric, decimals: int = 2) -> float | None:
    """Metric as a percentage number rounded half-up (None stays None)."""
    if metric is None:
        return None
    return float(round_half_up(metric * 100, decimals))


def render_percent(metric: Metric, decimals: int = 2) -> str:
    """Display form: '90.56%' or 'UNDEFINED' for 0/0 metrics."""
    if metric is None:
        return "UNDEFINED"
    scale = 10**decimals
    q = int(round_half_up(metric * 100, decimals) * scale)  # exact integer
    return f"{q // scale}.{q % scale:0{decimals}d}%"
