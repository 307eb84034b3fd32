from camtrap.dataset.stats import compute_stats
from camtrap.dataset.voc import parse_voc

from test_voc import obj, voc_xml


def test_mean_resolution_two_documents(catalog):
    docs = [
        parse_voc(voc_xml(width=1920, height=1072)),
        parse_voc(voc_xml(width=24, height=466)),
    ]
    stats = compute_stats(docs, catalog)
    assert stats.mean_resolution == (972.0, 769.0)
    assert stats.total_images == 2


def test_zero_documents(catalog):
    stats = compute_stats([], catalog)
    assert stats.total_images == 0
    assert stats.total_objects == 0
    assert stats.mean_resolution == (0.0, 0.0)
    assert stats.per_class_counts == {}


def test_per_class_counting(catalog):
    docs = [parse_voc(voc_xml(obj())) for _ in range(3)]
    stats = compute_stats(docs, catalog)
    assert stats.per_class_counts == {22: 3}
    assert stats.total_objects == 3


def test_excluded_documents_contribute_nothing(catalog):
    bad = parse_voc(voc_xml(obj() + obj(name="no good", x0=1, y0=1, x1=2, y1=2)))
    good = parse_voc(voc_xml(obj()))
    stats = compute_stats([good, bad], catalog)
    assert stats.total_images == 1
    assert stats.excluded_images == 1
    assert stats.per_class_counts == {22: 1}
    assert stats.resolution_histogram == {(1000, 800): 1}


def test_totals_equal_histogram_sums(catalog):
    docs = [
        parse_voc(voc_xml(obj(), width=1000 + i, height=800))
        for i in range(5)
    ]
    stats = compute_stats(docs, catalog)
    assert sum(stats.resolution_histogram.values()) == stats.total_images
    assert sum(stats.per_class_counts.values()) == stats.total_objects


def test_render_table(catalog):
    stats = compute_stats([parse_voc(voc_xml(obj()))], catalog)
    text = stats.render(catalog)
    assert "total_images\t1" in text
    assert "22\tNumenius arquata\t1" in text
    assert "1000\t800\t1" in text
