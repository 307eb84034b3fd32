"""Operator command line.

``serve`` boots the whole service (SMTP + API + workers); the dataset,
eval, infer and manifest verbs run offline against local files. Failures
print one JSON error line on stderr and exit nonzero.
"""

from __future__ import annotations

import json
import sys
import uuid
from pathlib import Path

import click

from .catalog import SpeciesCatalog, default_catalog
from .config import load_config
from .dataset.manifest import export_training_manifest
from .dataset.splits import split_dataset
from .dataset.stats import compute_stats
from .dataset.voc import parse_voc_file
from .dataset.yolo import voc_to_yolo
from .errors import CamtrapError
from .evaluation.average_precision import map_at_50
from .evaluation.confusion import ConfusionMatrix, class_metrics, macro_average, render_percent
from .evaluation.curves import confidence_curves
from .evaluation.deployment import render_matrix
from .evaluation.matching import match_detections
from .evaluation.records import load_records
from .evaluation.reference import FIELD_TRIAL_REFERENCE, reconcile
from .models import content_hash


def _fail(exc: Exception, code: str = "internal") -> None:
    body = {
        "http_status": 400,
        "code": getattr(exc, "code", code),
        "message": str(exc),
        "request_id": uuid.uuid4().hex,
    }
    click.echo(json.dumps(body), err=True)
    sys.exit(1)


def _load_catalog(path: str | None) -> SpeciesCatalog:
    return SpeciesCatalog.load(path) if path else default_catalog()


@click.group()
def main() -> None:
    """Camera-trap monitoring platform."""


@main.command()
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
def serve(config_path: str | None) -> None:
    """Run the SMTP listener, the REST API and the background workers."""
    import logging

    from .runtime import ServiceRuntime

    logging.basicConfig(level=logging.INFO, format="%(asctime)s %(name)s %(message)s")
    try:
        config = load_config(config_path)
        static_dir = Path(__file__).resolve().parents[2] / "frontend" / "dist"
        runtime = ServiceRuntime(config, static_dir=static_dir if static_dir.is_dir() else None)
    except (CamtrapError, ValueError, OSError) as exc:
        _fail(exc)
        return
    runtime.start()
    runtime.wait()


@main.command()
@click.option("--dir", "directory", type=click.Path(exists=True, file_okay=False), required=True)
@click.option("--fixture", type=click.Path(exists=True), default=None, help="mock detector table")
@click.option("--endpoint", default=None, help="remote inference server URL")
@click.option("--threshold", type=float, default=0.387, show_default=True)
@click.option("--catalog", "catalog_path", type=click.Path(exists=True), default=None)
def infer(
    directory: str,
    fixture: str | None,
    endpoint: str | None,
    threshold: float,
    catalog_path: str | None,
) -> None:
    """Offline batch inference over a directory of images (one JSON line each)."""
    from .inference.detector import DetectorConfig, detect
    from .inference.mock import MockBackend
    from .inference.preprocess import decode_image
    from .inference.remote import RemoteBackend
    from .models import ImageAsset, new_id, utcnow

    try:
        catalog = _load_catalog(catalog_path)
        config = DetectorConfig(confidence_threshold=threshold, endpoint=endpoint or "")
        if endpoint:
            backend = RemoteBackend(config)
        elif fixture:
            backend = MockBackend.from_fixture(fixture)
        else:
            backend = MockBackend()
        paths = sorted(
            p
            for p in Path(directory).iterdir()
            if p.suffix.lower() in (".jpg", ".jpeg", ".png")
        )
        for path in paths:
            data = path.read_bytes()
            digest = content_hash(data)
            decoded = decode_image(data)
            asset = ImageAsset(
                asset_id=new_id("asset"),
                content_hash=digest,
                width=decoded.width,
                height=decoded.height,
                source="batch-upload",
                received_at=utcnow(),
                storage_key="-",
                declared_filename=path.name,
            )
            detections = detect(asset, data, backend, catalog, config)
            click.echo(
                json.dumps(
                    {
                        "file": path.name,
                        "content_hash": digest,
                        "blank": not detections,
                        "detections": [
                            {
                                "class_id": d.class_id,
                                "scientific_name": catalog.scientific_name(d.class_id),
                                "confidence": d.confidence,
                                "box": list(d.box.corners()),
                            }
                            for d in detections
                        ],
                    }
                )
            )
    except (CamtrapError, ValueError, OSError) as exc:
        _fail(exc)


@main.group()
def dataset() -> None:
    """Annotation conversion, splitting and statistics."""


@dataset.command()
@click.option("--voc-dir", type=click.Path(exists=True, file_okay=False), required=True)
@click.option("--out-dir", type=click.Path(file_okay=False), required=True)
@click.option("--catalog", "catalog_path", type=click.Path(exists=True), default=None)
def convert(voc_dir: str, out_dir: str, catalog_path: str | None) -> None:
    """Convert VOC XML files to YOLO label files (rejected images skipped)."""
    try:
        catalog = _load_catalog(catalog_path)
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        converted = excluded = 0
        for xml_path in sorted(Path(voc_dir).glob("*.xml")):
            doc = parse_voc_file(xml_path)
            if doc.excluded:
                excluded += 1
                continue
            label = voc_to_yolo(doc, catalog)
            stem = label.image_stem or xml_path.stem
            (out / f"{stem}.txt").write_text(label.serialize(), encoding="utf-8")
            converted += 1
        click.echo(f"converted\t{converted}")
        click.echo(f"excluded\t{excluded}")
    except (CamtrapError, ValueError, OSError) as exc:
        _fail(exc)


@dataset.command()
@click.option("--ids-file", type=click.Path(exists=True), default=None, help="one id per line")
@click.option("--voc-dir", type=click.Path(exists=True, file_okay=False), default=None)
@click.option("--out-dir", type=click.Path(file_okay=False), required=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--ratios", default="0.8,0.1,0.1", show_default=True)
def split(
    ids_file: str | None, voc_dir: str | None, out_dir: str, seed: int, ratios: str
) -> None:
    """Deterministic train/val/test split written as id list files."""
    try:
        if ids_file:
            ids = [
                line.strip()
                for line in Path(ids_file).read_text(encoding="utf-8").splitlines()
                if line.strip()
            ]
        elif voc_dir:
            ids = [p.stem for p in sorted(Path(voc_dir).glob("*.xml"))]
        else:
            raise click.UsageError("provide --ids-file or --voc-dir")
        parts = tuple(float(r) for r in ratios.split(","))
        if len(parts) != 3:
            raise ValueError("ratios must be three comma-separated numbers")
        result = split_dataset(ids, ratios=parts, seed=seed)
        result.write(out_dir)
        click.echo(f"train\t{len(result.train)}")
        click.echo(f"val\t{len(result.val)}")
        click.echo(f"test\t{len(result.test)}")
    except (CamtrapError, ValueError, OSError) as exc:
        _fail(exc)


@dataset.command()
@click.option("--voc-dir", type=click.Path(exists=True, file_okay=False), required=True)
@click.option("--catalog", "catalog_path", type=click.Path(exists=True), default=None)
def stats(voc_dir: str, catalog_path: str | None) -> None:
    """Dataset audit: per-class tag counts and resolution spread."""
    try:
        catalog = _load_catalog(catalog_path)
        docs = [parse_voc_file(p) for p in sorted(Path(voc_dir).glob("*.xml"))]
        click.echo(compute_stats(docs, catalog).render(catalog), nl=False)
    except (CamtrapError, ValueError, OSError) as exc:
        _fail(exc)


@main.command("eval")
@click.option("--preds", type=click.Path(exists=True), required=True)
@click.option("--truths", type=click.Path(exists=True), required=True)
@click.option(
    "--mode",
    type=click.Choice(["detection", "classification"]),
    default="detection",
    show_default=True,
)
@click.option("--iou", "iou_threshold", type=float, default=0.5, show_default=True)
@click.option("--curves-out", type=click.Path(file_okay=False), default=None)
@click.option("--reference", type=click.Choice(["builtin"]), default=None)
@click.option("--catalog", "catalog_path", type=click.Path(exists=True), default=None)
def eval_cmd(
    preds: str,
    truths: str,
    mode: str,
    iou_threshold: float,
    curves_out: str | None,
    reference: str | None,
    catalog_path: str | None,
) -> None:
    """Evaluate predictions against ground truth records."""
    try:
        catalog = _load_catalog(catalog_path)
        pred_records = load_records(preds, as_truth=False)
        truth_records = load_records(truths, as_truth=True)

        if mode == "classification":
            _eval_classification(pred_records, truth_records, catalog, reference)
            return

        report = map_at_50(pred_records, truth_records, iou_threshold)
        if report.mean is not None:
            click.echo(f"mAP@{iou_threshold:g}\t{report.mean!r}")
        for class_id, ap in sorted(report.per_class.items()):
            name = catalog.scientific_name(class_id) if class_id in catalog else str(class_id)
            click.echo(f"AP\t{name}\t{ap!r}")
        if report.no_truth_classes:
            click.echo("no_truth_classes\t" + ",".join(map(str, report.no_truth_classes)))
        matched = match_detections(pred_records, truth_records, iou_threshold)
        click.echo(f"matched\t{matched.tp}\tfalse_positives\t{matched.fp}\tmissed\t{matched.fn}")
        click.echo("")
        click.echo(
            render_matrix(ConfusionMatrix.from_match_result(matched), catalog), nl=False
        )
        if curves_out:
            bundle = confidence_curves(pred_records, truth_records, iou_threshold)
            out = Path(curves_out)
            out.mkdir(parents=True, exist_ok=True)
            bundle.precision.write_csv(out / "precision_confidence.csv")
            bundle.recall.write_csv(out / "recall_confidence.csv")
            bundle.f1.write_csv(out / "f1_confidence.csv")
            click.echo(f"peak_f1\t{bundle.peak_f1!r}\t@\t{bundle.peak_f1_threshold!r}")
    except (CamtrapError, ValueError, OSError) as exc:
        _fail(exc)


def _eval_classification(pred_records, truth_records, catalog, reference) -> None:
    """Pair one truth and one prediction per image id; tabulate the labels."""
    truths_by_image = {t.image_id: t for t in truth_records}
    preds_by_image = {p.image_id: p for p in pred_records}
    pairs = [
        (truths_by_image[i].class_id, preds_by_image[i].class_id)
        for i in truths_by_image
        if i in preds_by_image
    ]
    skipped = len(set(truths_by_image) ^ set(preds_by_image))
    matrix = ConfusionMatrix.from_pairs(pairs)
    click.echo("class\tAccuracy\tPrecision\tSensitivity\tSpecificity\tF1")
    per_class = []
    for class_id in matrix.classes:
        m = class_metrics(matrix, class_id)
        per_class.append(m)
        name = catalog.scientific_name(class_id) if class_id in catalog else str(class_id)
        click.echo(
            f"{name}\t{render_percent(m.accuracy)}\t{render_percent(m.precision)}"
            f"\t{render_percent(m.recall)}\t{render_percent(m.specificity)}"
            f"\t{render_percent(m.f1)}"
        )
    averages = macro_average(per_class)
    click.echo(
        f"average ({averages.policy.value})\t{render_percent(averages.accuracy)}"
        f"\t{render_percent(averages.precision)}\t{render_percent(averages.recall)}"
        f"\t{render_percent(averages.specificity)}\t{render_percent(averages.f1)}"
    )
    if skipped:
        click.echo(f"unpaired_images\t{skipped}")
    click.echo("")
    click.echo(render_matrix(matrix, catalog), nl=False)
    if reference == "builtin":
        click.echo("")
        click.echo(reconcile(matrix, FIELD_TRIAL_REFERENCE, catalog).render(), nl=False)


@main.group()
def manifest() -> None:
    """Training manifest export."""


@manifest.command("export")
@click.option("--out", "out_path", type=click.Path(dir_okay=False), required=True)
@click.option("--set", "overrides", multiple=True, help="key=value override")
def manifest_export(out_path: str, overrides: tuple[str, ...]) -> None:
    """Write the training manifest (defaults unless overridden)."""
    try:
        parsed: dict[str, float] = {}
        for item in overrides:
            key, _, value = item.partition("=")
            if not key or not value:
                raise ValueError(f"override {item!r} is not key=value")
            number = float(value)
            parsed[key.strip()] = int(number) if number == int(number) else number
        export_training_manifest(out_path, parsed)
        click.echo(f"wrote\t{out_path}")
    except (CamtrapError, ValueError, OSError) as exc:
        _fail(exc)


if __name__ == "__main__":
    main()
