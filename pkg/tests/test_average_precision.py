import random

import pytest

from camtrap.evaluation.average_precision import average_precision, map_at_50, pr_curve

from oracles import oracle_average_precision
from test_matching import pred, random_instance, to_records, truth


def test_perfect_predictions_ap_is_one():
    truths = [truth("a", 1, (0, 0, 10, 10)), truth("b", 1, (5, 5, 20, 20))]
    preds = [pred("a", 1, 0.9, (0, 0, 10, 10)), pred("b", 1, 0.8, (5, 5, 20, 20))]
    assert average_precision(preds, truths, class_id=1) == 1.0


def test_no_predictions_ap_is_zero():
    truths = [truth("a", 1, (0, 0, 10, 10))]
    assert average_precision([], truths, class_id=1) == 0.0


def test_no_truths_ap_is_none():
    preds = [pred("a", 1, 0.9, (0, 0, 10, 10))]
    assert average_precision(preds, [], class_id=1) is None


def test_three_pred_two_truth_instance_equals_rank_oracle():
    truths = [truth("a", 0, (0, 0, 10, 10)), truth("a", 0, (20, 20, 30, 30))]
    preds = [
        pred("a", 0, 0.9, (50, 50, 60, 60)),   # FP at rank 1
        pred("a", 0, 0.8, (0, 0, 10, 10)),     # TP at rank 2
        pred("a", 0, 0.7, (20, 20, 30, 30)),   # TP at rank 3
    ]
    ap = average_precision(preds, truths, class_id=0)
    raw_preds = [
        {"image_id": p.image_id, "class_id": p.class_id, "confidence": p.confidence, "box": p.box.corners()}
        for p in preds
    ]
    raw_truths = [
        {"image_id": t.image_id, "class_id": t.class_id, "box": t.box.corners()} for t in truths
    ]
    oracle = oracle_average_precision(raw_preds, raw_truths, 0, 0.5)
    assert ap == oracle
    # rank walk by hand: precisions (0, 1/2, 2/3), recalls (0, 1/2, 1);
    # the envelope at recall 1/2 already sees the later 2/3
    assert ap == pytest.approx(0.5 * (2 / 3) + 0.5 * (2 / 3))


def test_ap_equals_oracle_on_random_instances():
    rng = random.Random(4242)
    for case in range(200):
        preds, truths = random_instance(rng)
        p_records, t_records = to_records(preds, truths)
        for class_id in range(3):
            got = average_precision(p_records, t_records, class_id)
            want = oracle_average_precision(preds, truths, class_id, 0.5)
            assert got == want, f"case {case} class {class_id}"


def test_map_excludes_classes_without_truth():
    truths = [truth("a", 0, (0, 0, 10, 10))]
    preds = [
        pred("a", 0, 0.9, (0, 0, 10, 10)),
        pred("a", 7, 0.9, (0, 0, 10, 10)),  # class with zero truths
    ]
    report = map_at_50(preds, truths)
    assert report.per_class == {0: 1.0}
    assert report.mean == 1.0
    assert report.no_truth_classes == (7,)


def test_map_empty_everything():
    report = map_at_50([], [])
    assert report.mean is None
    assert report.per_class == {}


def test_pr_curve_monotone_envelope():
    truths = [truth("a", 0, (0, 0, 10, 10)), truth("a", 0, (20, 20, 30, 30))]
    preds = [
        pred("a", 0, 0.9, (0, 0, 10, 10)),
        pred("a", 0, 0.8, (50, 50, 60, 60)),
        pred("a", 0, 0.7, (20, 20, 30, 30)),
    ]
    series = pr_curve(preds, truths, class_id=0)
    assert series.kind == "pr"
    assert list(series.thresholds) == sorted(series.thresholds)
    # envelope precision never increases as recall grows
    assert all(b <= a for a, b in zip(series.values, series.values[1:]))
