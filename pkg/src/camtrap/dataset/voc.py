"""Pascal-VOC annotation parsing.

Labeling exports one XML document per image. Objects tagged "no good"
mark the whole image as rejected: such documents are excluded from label
conversion and from every dataset statistic.
"""

from __future__ import annotations

import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from pathlib import Path

from ..boxes import BoundingBox, clamp_box
from ..errors import DegenerateBox, MalformedXml, MissingBox, MissingSize

EXCLUSION_LABEL = "no good"


@dataclass(frozen=True)
class VocObject:
    name: str
    box: BoundingBox
    difficult: bool = False


@dataclass(frozen=True)
class VocDocument:
    image_filename: str
    image_width: int
    image_height: int
    objects: tuple[VocObject, ...] = ()
    excluded: bool = False

    @property
    def image_stem(self) -> str:
        return Path(self.image_filename).stem


def _float_of(elem: ET.Element | None, tag: str, owner: str) -> float:
    if elem is None or elem.text is None:
        raise MissingBox(f"object in {owner} lacks <{tag}>")
    try:
        return float(elem.text)
    except ValueError:
        raise MissingBox(f"object in {owner} has non-numeric <{tag}>") from None


def parse_voc(xml_bytes: bytes) -> VocDocument:
    """Parse one VOC document from raw XML bytes.

    Boxes are clamped to the image bounds. A document containing any
    object named "no good" comes back with ``excluded=True`` (its other
    objects are still parsed, for audit purposes).
    """
    try:
        root = ET.fromstring(xml_bytes)
    except ET.ParseError as exc:
        raise MalformedXml(str(exc)) from exc

    filename_el = root.find("filename")
    filename = (filename_el.text or "").strip() if filename_el is not None else ""

    size = root.find("size")
    if size is None:
        raise MissingSize(f"{filename or '<document>'} has no <size> element")
    try:
        width = int(float(size.findtext("width", "")))
        height = int(float(size.findtext("height", "")))
    except ValueError:
        raise MissingSize(f"{filename or '<document>'} has non-numeric size") from None
    if width < 1 or height < 1:
        raise MissingSize(f"{filename or '<document>'} has size {width}x{height}")

    objects: list[VocObject] = []
    excluded = False
    for obj in root.iter("object"):
        name = (obj.findtext("name") or "").strip()
        if name.lower() == EXCLUSION_LABEL:
            excluded = True
            continue
        bndbox = obj.find("bndbox")
        if bndbox is None:
            raise MissingBox(f"object {name!r} in {filename or '<document>'} has no <bndbox>")
        owner = filename or "<document>"
        raw = BoundingBox(
            x_min=_float_of(bndbox.find("xmin"), "xmin", owner),
            y_min=_float_of(bndbox.find("ymin"), "ymin", owner),
            x_max=_float_of(bndbox.find("xmax"), "xmax", owner),
            y_max=_float_of(bndbox.find("ymax"), "ymax", owner),
        )
        try:
            box = clamp_box(raw, width, height)
        except DegenerateBox:
            raise MissingBox(
                f"object {name!r} in {owner} lies entirely outside the image"
            ) from None
        difficult = (obj.findtext("difficult") or "0").strip() in ("1", "true", "True")
        objects.append(VocObject(name=name, box=box, difficult=difficult))

    return VocDocument(
        image_filename=filename,
        image_width=width,
        image_height=height,
        objects=tuple(objects),
        excluded=excluded,
    )


def parse_voc_file(path: str | Path) -> VocDocument:
    return parse_voc(Path(path).read_bytes())
