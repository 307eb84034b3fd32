import random

import pytest

from camtrap.boxes import BoundingBox, Frame
from camtrap.errors import DegenerateBox
from camtrap.inference.letterbox import apply_to_box, letterbox, unletterbox_box


def test_square_input_is_identity():
    t = letterbox(640, 640)
    assert t.scale == 1.0
    assert (t.pad_left, t.pad_top) == (0, 0)
    assert (t.scaled_width, t.scaled_height) == (640, 640)


def test_camera_resolution_1920x1072():
    t = letterbox(1920, 1072)
    assert t.scale == pytest.approx(1 / 3)
    assert (t.scaled_width, t.scaled_height) == (640, 357)
    assert t.pad_top == 141
    assert t.pad_bottom == 142
    assert (t.pad_left, t.pad_right) == (0, 0)


def test_mean_resolution_972x769():
    t = letterbox(972, 769)
    assert t.scale == pytest.approx(0.658436, abs=1e-6)
    assert (t.scaled_width, t.scaled_height) == (640, 506)
    assert t.pad_top == 67


def test_unletterbox_identity_transform():
    t = letterbox(640, 640)
    box = BoundingBox(10, 20, 100, 200, frame=Frame.MODEL_INPUT)
    out = unletterbox_box(box, t, 640, 640)
    assert out.corners() == (10, 20, 100, 200)
    assert out.frame is Frame.ORIGINAL


def test_unletterbox_camera_frame_box():
    t = letterbox(1920, 1072)
    box = BoundingBox(0, 141, 640, 498, frame=Frame.MODEL_INPUT)
    out = unletterbox_box(box, t, 1920, 1072)
    assert out.corners() == pytest.approx((0, 0, 1920, 1071))


def test_box_entirely_inside_padding_is_degenerate():
    t = letterbox(1920, 1072)
    box = BoundingBox(0, 0, 640, 100, frame=Frame.MODEL_INPUT)  # above the image band
    with pytest.raises(DegenerateBox):
        unletterbox_box(box, t, 1920, 1072)


def test_full_model_frame_maps_to_image_bounds():
    # a backend reporting the whole model frame must land exactly on the
    # original image bounds: padding never shifts detections
    for width, height in ((1920, 1072), (972, 769), (640, 640), (333, 77)):
        t = letterbox(width, height)
        box = BoundingBox(0, 0, t.target, t.target, frame=Frame.MODEL_INPUT)
        out = unletterbox_box(box, t, width, height)
        assert out.corners() == (0, 0, width, height)


def test_round_trip_corner_error_at_most_one_pixel():
    rng = random.Random(123)
    for _ in range(500):
        width = rng.randint(1, 4096)
        height = rng.randint(1, 4096)
        x0 = rng.uniform(0, width - 0.001)
        y0 = rng.uniform(0, height - 0.001)
        x1 = rng.uniform(x0 + 0.001, width)
        y1 = rng.uniform(y0 + 0.001, height)
        t = letterbox(width, height)
        model_box = apply_to_box(BoundingBox(x0, y0, x1, y1), t)
        try:
            back = unletterbox_box(model_box, t, width, height)
        except DegenerateBox:
            # sub-pixel boxes can collapse after the down/up trip
            assert (x1 - x0) * t.scale < 1 or (y1 - y0) * t.scale < 1
            continue
        for got, want in zip(back.corners(), (x0, y0, x1, y1)):
            assert abs(got - want) <= 1.0


def test_dimension_validation():
    with pytest.raises(ValueError):
        letterbox(0, 100)
