import pytest
from hypothesis import given
from hypothesis import strategies as st

from camtrap.dataset.voc import parse_voc
from camtrap.dataset.yolo import YoloRow, voc_to_yolo, yolo_to_box
from camtrap.errors import ExcludedDocument, UnknownClass

from test_voc import obj, voc_xml


def test_derived_conversion_example(catalog):
    doc = parse_voc(voc_xml(obj()))
    label = voc_to_yolo(doc, catalog)
    assert label.serialize() == "22 0.200000 0.375000 0.200000 0.250000\n"


def test_full_frame_box(catalog):
    doc = parse_voc(voc_xml(obj(name="Person", x0=0, y0=0, x1=1000, y1=800)))
    label = voc_to_yolo(doc, catalog)
    assert label.rows[0] == YoloRow(0, 0.5, 0.5, 1.0, 1.0)


def test_empty_document_empty_label(catalog):
    label = voc_to_yolo(parse_voc(voc_xml()), catalog)
    assert label.rows == ()
    assert label.serialize() == ""


def test_excluded_document_refused(catalog):
    doc = parse_voc(voc_xml(obj(name="no good", x0=1, y0=1, x1=2, y1=2)))
    with pytest.raises(ExcludedDocument):
        voc_to_yolo(doc, catalog)


def test_unknown_class_name(catalog):
    doc = parse_voc(voc_xml(obj(name="Dodo")))
    with pytest.raises(UnknownClass):
        voc_to_yolo(doc, catalog)


def test_yolo_to_box_inverse_example():
    box = yolo_to_box(YoloRow(22, 0.2, 0.375, 0.2, 0.25), 1000, 800)
    assert box.corners() == pytest.approx((100, 200, 300, 400), abs=1e-9)


def test_yolo_to_box_full_frame():
    box = yolo_to_box(YoloRow(0, 0.5, 0.5, 1.0, 1.0), 640, 640)
    assert box.corners() == (0, 0, 640, 640)


def test_degenerate_row_rejected():
    with pytest.raises(ValueError):
        YoloRow(0, 0.5, 0.5, 0.0, 0.1)


@given(
    width=st.integers(2, 4096),
    height=st.integers(2, 4096),
    data=st.data(),
)
def test_round_trip_within_half_pixel(width, height, data):
    from camtrap.catalog import default_catalog

    catalog = default_catalog()
    x0 = data.draw(st.integers(0, width - 1))
    y0 = data.draw(st.integers(0, height - 1))
    x1 = data.draw(st.integers(x0 + 1, width))
    y1 = data.draw(st.integers(y0 + 1, height))
    doc = parse_voc(voc_xml(obj(name="Person", x0=x0, y0=y0, x1=x1, y1=y1), width, height))
    label = voc_to_yolo(doc, catalog)
    # through the serialized text, as a real pipeline would
    parsed = YoloRow.parse(label.serialize().strip())
    box = yolo_to_box(parsed, width, height)
    for got, want in zip(box.corners(), (x0, y0, x1, y1)):
        assert abs(got - want) <= 0.5
