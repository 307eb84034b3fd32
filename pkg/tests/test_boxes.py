import pytest
from hypothesis import given
from hypothesis import strategies as st

from camtrap.boxes import BoundingBox, Frame, clamp_box, intersection_area
from camtrap.errors import DegenerateBox, FrameMismatch


def test_clamp_at_origin():
    box = clamp_box(BoundingBox(-5, -5, 10, 10), 100, 100)
    assert box.corners() == (0, 0, 10, 10)


def test_clamp_identity():
    box = BoundingBox(0, 0, 50, 50)
    assert clamp_box(box, 100, 100) == box


def test_clamp_fully_outside_raises():
    with pytest.raises(DegenerateBox):
        clamp_box(BoundingBox(150, 150, 200, 200), 100, 100)


def test_empty_box_rejected_at_construction():
    with pytest.raises(DegenerateBox):
        BoundingBox(10, 10, 10, 20)


def test_normalized_frame_bounds():
    BoundingBox(0.0, 0.0, 1.0, 1.0, frame=Frame.NORMALIZED)
    with pytest.raises(DegenerateBox):
        BoundingBox(-0.1, 0.0, 0.5, 0.5, frame=Frame.NORMALIZED)


def test_frame_mismatch():
    a = BoundingBox(0, 0, 1, 1, frame=Frame.ORIGINAL)
    b = BoundingBox(0, 0, 1, 1, frame=Frame.MODEL_INPUT)
    with pytest.raises(FrameMismatch):
        intersection_area(a, b)


boxes = st.tuples(
    st.floats(-50, 150), st.floats(-50, 150), st.floats(1, 100), st.floats(1, 100)
).map(lambda t: BoundingBox(t[0], t[1], t[0] + t[2], t[1] + t[3]))


@given(boxes)
def test_clamp_is_idempotent(box):
    try:
        once = clamp_box(box, 100, 100)
    except DegenerateBox:
        return
    assert clamp_box(once, 100, 100) == once
