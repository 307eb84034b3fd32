import pytest

from camtrap.dataset.voc import parse_voc
from camtrap.errors import MalformedXml, MissingBox, MissingSize


def voc_xml(objects: str = "", width: int = 1000, height: int = 800, filename: str = "img1.jpg"):
    return f"""<annotation>
  <filename>{filename}</filename>
  <size><width>{width}</width><height>{height}</height><depth>3</depth></size>
  {objects}
</annotation>""".encode()


OBJ = """<object>
  <name>{name}</name>
  <difficult>{difficult}</difficult>
  <bndbox><xmin>{x0}</xmin><ymin>{y0}</ymin><xmax>{x1}</xmax><ymax>{y1}</ymax></bndbox>
</object>"""


def obj(name="Numenius arquata", x0=100, y0=200, x1=300, y1=400, difficult=0):
    return OBJ.format(name=name, difficult=difficult, x0=x0, y0=y0, x1=x1, y1=y1)


def test_empty_document():
    doc = parse_voc(voc_xml())
    assert doc.objects == ()
    assert not doc.excluded
    assert (doc.image_width, doc.image_height) == (1000, 800)


def test_single_object_box():
    doc = parse_voc(voc_xml(obj()))
    assert len(doc.objects) == 1
    assert doc.objects[0].name == "Numenius arquata"
    assert doc.objects[0].box.corners() == (100.0, 200.0, 300.0, 400.0)


def test_no_good_marks_document_excluded():
    doc = parse_voc(voc_xml(obj() + obj(name="no good", x0=1, y0=1, x1=5, y1=5)))
    assert doc.excluded


def test_no_good_case_insensitive():
    assert parse_voc(voc_xml(obj(name="No Good", x0=1, y0=1, x1=5, y1=5))).excluded


def test_box_clamped_to_image_bounds():
    doc = parse_voc(voc_xml(obj(x0=-20, y0=0.5, x1=1500, y1=700)))
    assert doc.objects[0].box.corners() == (0.0, 0.5, 1000.0, 700.0)


def test_difficult_flag():
    doc = parse_voc(voc_xml(obj(difficult=1)))
    assert doc.objects[0].difficult


def test_malformed_xml():
    with pytest.raises(MalformedXml):
        parse_voc(b"<annotation><unclosed>")


def test_missing_size():
    with pytest.raises(MissingSize):
        parse_voc(b"<annotation><filename>x.jpg</filename></annotation>")


def test_missing_box():
    xml = b"""<annotation><filename>x.jpg</filename>
    <size><width>10</width><height>10</height></size>
    <object><name>Person</name></object></annotation>"""
    with pytest.raises(MissingBox):
        parse_voc(xml)


def test_object_entirely_outside_image():
    with pytest.raises(MissingBox):
        parse_voc(voc_xml(obj(x0=2000, y0=2000, x1=3000, y1=3000)))


def test_image_stem():
    assert parse_voc(voc_xml(filename="trail/cam1_0001.jpg")).image_stem == "cam1_0001"
