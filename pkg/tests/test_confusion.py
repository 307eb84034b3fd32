from fractions import Fraction

import pytest

from camtrap.errors import EmptyInput, UnknownClass
from camtrap.evaluation.confusion import (
    BACKGROUND,
    ClassMetrics,
    ConfusionMatrix,
    MacroPolicy,
    class_metrics,
    macro_average,
    percent_value,
    render_percent,
    round_half_up,
)
from camtrap.evaluation.reference import FIELD_TRIAL_MATRIX


def test_field_trial_adult_curlew_counts_and_metrics():
    m = class_metrics(FIELD_TRIAL_MATRIX, 22)
    assert (m.tp, m.fp, m.fn) == (662, 0, 69)
    assert m.tn == FIELD_TRIAL_MATRIX.grand_total - 662 - 69
    assert render_percent(m.precision) == "100.00%"
    assert render_percent(m.recall) == "90.56%"
    assert render_percent(m.specificity) == "100.00%"
    assert render_percent(m.f1) == "95.05%"


def test_field_trial_chick_metrics():
    m = class_metrics(FIELD_TRIAL_MATRIX, 23)
    assert render_percent(m.recall) == "92.35%"
    assert render_percent(m.f1) == "96.03%"
    assert render_percent(m.precision) == "100.00%"
    assert render_percent(m.specificity) == "100.00%"


def test_perfect_diagonal_matrix():
    cm = ConfusionMatrix(classes=(0, 1), counts=((5, 0), (0, 7)))
    for class_id in (0, 1):
        m = class_metrics(cm, class_id)
        for value in (m.precision, m.recall, m.specificity, m.f1, m.accuracy):
            assert render_percent(value) == "100.00%"


def test_all_zero_matrix_is_undefined_not_zero():
    cm = ConfusionMatrix(classes=(0, 1), counts=((0, 0), (0, 0)))
    m = class_metrics(cm, 0)
    assert m.precision is None
    assert m.recall is None
    assert m.f1 is None
    assert render_percent(m.precision) == "UNDEFINED"


def test_unknown_class():
    with pytest.raises(UnknownClass):
        class_metrics(FIELD_TRIAL_MATRIX, 99)


def test_exact_rational_rendering():
    # 662/731 is 90.5608...%, which must round half-up to 90.56, not 90.55
    assert render_percent(Fraction(662, 731)) == "90.56%"
    # a true half-cent case rounds up under round-half-up
    assert render_percent(Fraction(90555, 100000)) == "90.56%"
    assert round_half_up(Fraction(1, 3) * 100) == Fraction(3333, 100)
    assert percent_value(Fraction(662, 731)) == 90.56
    assert percent_value(None) is None


def test_tp_sum_equals_trace_and_totals_balance():
    cm = FIELD_TRIAL_MATRIX
    metrics = [class_metrics(cm, c) for c in cm.classes]
    assert sum(m.tp for m in metrics) == cm.trace
    for m in metrics:
        assert m.tp + m.fp + m.tn + m.fn == cm.grand_total


def test_f1_zero_iff_no_tp():
    cm = ConfusionMatrix(classes=(0, 1), counts=((0, 3), (2, 4)))
    m = class_metrics(cm, 0)
    assert m.tp == 0 and (m.fp or m.fn)
    assert m.f1 == Fraction(0)


from hypothesis import given  # noqa: E402
from hypothesis import strategies as st  # noqa: E402


@given(st.lists(st.integers(0, 50), min_size=9, max_size=9))
def test_metric_bounds_and_balance_on_random_matrices(cells):
    cm = ConfusionMatrix(
        classes=(0, 1, 2),
        counts=(tuple(cells[0:3]), tuple(cells[3:6]), tuple(cells[6:9])),
    )
    for class_id in cm.classes:
        m = class_metrics(cm, class_id)
        assert m.tp + m.fp + m.tn + m.fn == cm.grand_total
        for value in (m.precision, m.recall, m.specificity, m.f1, m.accuracy):
            if value is not None:
                assert Fraction(0) <= value <= Fraction(1)
        if m.tp == 0 and m.tp + m.fp + m.fn > 0:
            assert m.f1 == Fraction(0)
        if m.tp > 0:
            assert m.f1 is not None and m.f1 > 0
    assert sum(class_metrics(cm, c).tp for c in cm.classes) == cm.trace


def test_macro_average_of_published_sensitivities():
    # means over display-rounded values, as a published table would carry
    rows = [
        ClassMetrics.from_counts(22, tp=9056, fp=0, tn=0, fn=944),
        ClassMetrics.from_counts(23, tp=9235, fp=0, tn=0, fn=765),
        ClassMetrics.from_counts(20, tp=10000, fp=0, tn=0, fn=0),
    ]
    averages = macro_average(rows)
    assert render_percent(averages.recall) == "94.30%"


def test_macro_single_class_identity():
    row = ClassMetrics.from_counts(1, tp=3, fp=1, tn=5, fn=2)
    averages = macro_average([row])
    assert averages.precision == row.precision
    assert averages.recall == row.recall


def test_macro_policies_differ_on_undefined():
    defined = ClassMetrics.from_counts(0, tp=1, fp=0, tn=1, fn=0)  # precision 1
    undefined = ClassMetrics.from_counts(1, tp=0, fp=0, tn=2, fn=0)  # precision 0/0
    skip = macro_average([defined, undefined], MacroPolicy.SKIP_UNDEFINED)
    zero = macro_average([defined, undefined], MacroPolicy.UNDEFINED_AS_ZERO)
    assert skip.precision == Fraction(1)
    assert zero.precision == Fraction(1, 2)


def test_macro_empty_input():
    with pytest.raises(EmptyInput):
        macro_average([])


def test_from_pairs_classification_mode():
    pairs = [(22, 22), (22, 18), (23, 23), (BACKGROUND, 22)]
    cm = ConfusionMatrix.from_pairs(pairs)
    assert cm.classes == (18, 22, 23)
    assert cm.cell(22, 22) == 1
    assert cm.cell(22, 18) == 1
    assert cm.background_row is not None
    assert cm.background_row[cm.index_of(22)] == 1
    assert cm.grand_total == 4


def test_matrix_shape_validation():
    with pytest.raises(ValueError):
        ConfusionMatrix(classes=(0, 1), counts=((1, 2),))
    with pytest.raises(ValueError):
        ConfusionMatrix(classes=(0, 0), counts=((1, 2), (3, 4)))
    with pytest.raises(ValueError):
        ConfusionMatrix(classes=(0,), counts=((-1,),))
