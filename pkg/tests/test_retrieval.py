import numpy as np
import pytest

from vaselab.catalog import ingest_records
from vaselab.errors import DegenerateSketch, EmptyCatalog, KindMissing, TruthMismatch
from vaselab.image import Image, load_image, save_image
from vaselab.retrieval import (
    RankedResult,
    SketchQuery,
    build_index,
    evaluate_ranking,
    load_index,
    query,
    rasterize_sketch,
    save_index,
)


def _draw_family(kind, rng, size=128):
    yy, xx = np.mgrid[0:size, 0:size].astype(float)
    cy, cx = size / 2 + rng.uniform(-6, 6), size / 2 + rng.uniform(-6, 6)
    y, x = yy - cy, xx - cx
    if kind == "disc":
        a = rng.uniform(size * 0.22, size * 0.34)
        b = a * rng.uniform(0.8, 1.0)
        ang = rng.uniform(0, np.pi)
        yr = y * np.cos(ang) + x * np.sin(ang)
        xr = -y * np.sin(ang) + x * np.cos(ang)
        mask = (yr / a) ** 2 + (xr / b) ** 2 < 1
    elif kind == "square":
        s = rng.uniform(size * 0.20, size * 0.31)
        ang = rng.uniform(-0.3, 0.3)
        yr = y * np.cos(ang) + x * np.sin(ang)
        xr = -y * np.sin(ang) + x * np.cos(ang)
        mask = (np.abs(yr) < s) & (np.abs(xr) < s * rng.uniform(0.75, 1.0))
    else:
        r = np.hypot(y, x)
        th = np.arctan2(y, x)
        base = rng.uniform(size * 0.17, size * 0.25)
        mask = r < base * (1 + rng.uniform(0.35, 0.5) * np.cos(5 * (th + rng.uniform(0, 6))))
    return Image(np.where(mask, 0.0, 1.0))


@pytest.fixture(scope="module")
def corpus(tmp_path_factory):
    root = tmp_path_factory.mktemp("corpus")
    rng = np.random.default_rng(42)
    raw = []
    for fam in ("disc", "square", "star"):
        for i in range(20):
            name = f"{fam}{i:02d}"
            save_image(_draw_family(fam, rng), root / f"{name}.png")
            raw.append({"id": name, "image_paths": [f"{name}.png"], "shape_class": fam})
    records = ingest_records(raw)
    index = build_index(records, ("hog", "scd"), image_root=root)
    return root, records, index


# ---- build ---------------------------------------------------------------------

def test_build_entry_counts(corpus):
    _, _, index = corpus
    assert index.size("hog") == 60
    assert index.size("scd") == 60
    assert index.warnings == []


def test_build_unreadable_image_skipped(tmp_path):
    (tmp_path / "ok.png").write_bytes(b"")  # empty file, unreadable
    recs = ingest_records(
        [
            {"id": "bad", "image_paths": ["ok.png"]},
            {"id": "none", "image_paths": []},
        ]
    )
    index = build_index(recs, ("hog",), image_root=tmp_path)
    assert index.size("hog") == 0
    assert len(index.warnings) == 2


def test_build_empty_catalog():
    with pytest.raises(EmptyCatalog):
        build_index([], ("hog",))


def test_build_no_kinds(corpus):
    _, records, _ = corpus
    with pytest.raises(ValueError):
        build_index(records, ())


# ---- query ------------------------------------------------------------------------

def test_query_self_rank_one(corpus):
    root, records, index = corpus
    for rec in records[::7]:
        for kind in ("hog", "scd"):
            r = query(index, load_image(root / rec.image_paths[0]), kind, k=3)
            assert r.items[0][0] == rec.id
            assert r.items[0][1] == pytest.approx(0.0, abs=1e-9)


def test_query_family_precision(corpus):
    root, records, index = corpus
    precisions = []
    for rec in records:
        r = query(index, load_image(root / rec.image_paths[0]), "scd", k=11)
        top = [i for i, _ in r.items if i != rec.id][:10]
        fam = rec.shape_class
        precisions.append(np.mean([t.startswith(fam) for t in top]))
    assert np.mean(precisions) >= 0.9


def test_query_k_larger_than_index(corpus):
    root, records, index = corpus
    r = query(index, load_image(root / records[0].image_paths[0]), "hog", k=10_000)
    assert len(r.items) == 60


def test_query_missing_kind(corpus):
    root, records, index = corpus
    with pytest.raises(KindMissing):
        query(index, load_image(root / records[0].image_paths[0]), "sc", k=5)


def test_query_deterministic(corpus):
    root, records, index = corpus
    img = load_image(root / records[3].image_paths[0])
    a = query(index, img, "hog", k=60)
    b = query(index, img, "hog", k=60)
    assert a.items == b.items


def test_query_monotone_metric_transform_same_order(corpus):
    """Ranking depends only on distance order (checked via argsort equality)."""
    from vaselab.retrieval.index import metric_distances
    from vaselab.image.hog import hog as hog_fn

    root, records, index = corpus
    img = load_image(root / records[5].image_paths[0])
    payload = hog_fn(img).vector
    d = metric_distances("hog", payload, index.payloads["hog"])
    ids = index.ids["hog"]
    by_distance = sorted(range(len(ids)), key=lambda i: (d[i], ids[i]))
    by_transformed = sorted(range(len(ids)), key=lambda i: (np.sqrt(d[i]) + 7.0, ids[i]))
    assert by_distance == by_transformed


# ---- sketch -----------------------------------------------------------------------

def test_sketch_square_fill():
    sk = SketchQuery(
        polylines=(np.array([[20.0, 20], [80, 20], [80, 80], [20, 80], [20, 22]]),),
        canvas=(100, 100),
    )
    img = rasterize_sketch(sk)
    dark_frac = (img.values < 0.5).mean()
    assert 0.2 < dark_frac < 0.6  # filled square scaled into the letterbox


def test_sketch_single_point_rejected():
    with pytest.raises(DegenerateSketch):
        SketchQuery(polylines=(np.array([[5.0, 5.0]]),), canvas=(100, 100))


def test_sketch_autoclose_open_c():
    t = np.linspace(0.04, 2 * np.pi - 0.04, 80)
    pts = np.stack([50 + 30 * np.cos(t), 50 + 30 * np.sin(t)], axis=1)
    gap = np.linalg.norm(pts[0] - pts[-1])
    assert 0 < gap < 0.02 * np.hypot(100, 100)  # near-touching ends
    img = rasterize_sketch(SketchQuery(polylines=(pts,), canvas=(100, 100)))
    assert (img.values < 0.5).mean() > 0.2  # interior filled after auto-close


def test_sketch_wide_gap_not_closed():
    t = np.linspace(0.2, 2 * np.pi - 0.2, 40)
    pts = np.stack([50 + 30 * np.cos(t), 50 + 30 * np.sin(t)], axis=1)
    img = rasterize_sketch(SketchQuery(polylines=(pts,), canvas=(100, 100)))
    assert (img.values < 0.5).mean() < 0.1  # stroke only, interior open


def test_sketch_query_end_to_end(corpus):
    _, _, index = corpus
    sk = SketchQuery(
        polylines=(np.array([[20.0, 20], [80, 20], [80, 80], [20, 80], [20, 21]]),),
        canvas=(100, 100),
    )
    r = query(index, sk, "scd", k=10)
    assert sum(1 for i, _ in r.items if i.startswith("square")) >= 8


# ---- evaluation -----------------------------------------------------------------------

def _ranked(ids):
    return RankedResult(items=tuple((i, float(k)) for k, i in enumerate(ids)), kind="scd")


def test_evaluate_perfect_match():
    ids = [f"o{i}" for i in range(20)]
    m = evaluate_ranking(_ranked(ids), ids)
    assert m["spearman"] == pytest.approx(1.0)
    assert m["precision@5"] == 1.0
    assert m["precision@10"] == 1.0
    assert m["precision@20"] == 1.0


def test_evaluate_reversed_order():
    ids = [f"o{i}" for i in range(20)]
    m = evaluate_ranking(_ranked(ids[::-1]), ids)
    assert m["spearman"] == pytest.approx(-1.0)


def test_evaluate_random_mean_spearman_near_zero():
    rng = np.random.default_rng(77)
    ids = [f"o{i}" for i in range(20)]
    vals = []
    for _ in range(1000):
        perm = list(rng.permutation(ids))
        vals.append(evaluate_ranking(_ranked(perm), ids)["spearman"])
    assert abs(np.mean(vals)) < 0.05


def test_evaluate_relevance_labels():
    ids = ["a", "b", "c", "d", "e"]
    truth = {"a": True, "b": False, "c": True, "d": False, "e": False}
    m = evaluate_ranking(_ranked(ids), truth)
    assert m["precision@5"] == pytest.approx(0.4)
    assert m["spearman"] is None


def test_evaluate_truth_mismatch():
    with pytest.raises(TruthMismatch):
        evaluate_ranking(_ranked(["a", "b"]), ["a"])


# ---- persistence -------------------------------------------------------------------------

def test_index_roundtrip(tmp_path, corpus):
    _, _, index = corpus
    p = tmp_path / "index.zip"
    save_index(index, p)
    back = load_index(p)
    assert back.kinds() == index.kinds()
    for kind in index.kinds():
        assert back.ids[kind] == index.ids[kind]
        np.testing.assert_array_equal(back.payloads[kind], index.payloads[kind])


def test_index_version_check(tmp_path, corpus):
    import json
    import zipfile

    _, _, index = corpus
    p = tmp_path / "index.zip"
    save_index(index, p)
    with zipfile.ZipFile(p) as zf:
        manifest = json.loads(zf.read("manifest.json"))
    manifest["version"] = 99
    with zipfile.ZipFile(p, "w") as zf:
        zf.writestr("manifest.json", json.dumps(manifest))
    with pytest.raises(ValueError):
        load_index(p)
