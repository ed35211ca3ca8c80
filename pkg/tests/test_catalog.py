import json

import numpy as np
import pytest

from vaselab.catalog import (
    CatalogRecord,
    build_similarity_graph,
    ingest,
    ingest_records,
    linked_selection,
    serialize_records,
)
from vaselab.errors import CatalogFieldError, DuplicateId, KindMissing, UnknownId


def _raw(id_, **kw):
    base = {"id": id_, "date_from": -600, "date_to": -550}
    base.update(kw)
    return base


# ---- ingest --------------------------------------------------------------------

def test_ingest_valid_file(tmp_path):
    path = tmp_path / "catalog.json"
    path.write_text(json.dumps([
        _raw("a", findspot={"lat": 37.9, "lon": 23.7, "place": "Athens"}),
        _raw("b"),
        _raw("c", mass_g=512.5, density_g_per_ml=1.8),
    ]))
    records = ingest(path)
    assert [r.id for r in records] == ["a", "b", "c"]
    assert records[0].findspot[2] == "Athens"
    assert records[2].mass_g == 512.5


def test_ingest_missing_id_names_index():
    with pytest.raises(CatalogFieldError) as exc:
        ingest_records([_raw("a"), {"date_from": 0, "date_to": 1}])
    assert "record 1" in str(exc.value)


def test_ingest_duplicate_id():
    with pytest.raises(DuplicateId):
        ingest_records([_raw("a"), _raw("a")])


def test_ingest_rejects_reversed_dates():
    with pytest.raises(CatalogFieldError):
        ingest_records([_raw("a", date_from=-500, date_to=-600)])


def test_ingest_rejects_bad_latitude():
    with pytest.raises(CatalogFieldError):
        ingest_records([_raw("a", findspot={"lat": 123.0, "lon": 0.0})])


def test_ingest_all_or_nothing():
    rows = [_raw("a"), _raw("b", date_from="not a year")]
    with pytest.raises(CatalogFieldError):
        ingest_records(rows)


def test_roundtrip_serialize(tmp_path):
    records = ingest_records([
        _raw("a", findspot={"lat": 37.9, "lon": 23.7, "place": "Athens"},
             image_paths=["x.png"], fabric="attic"),
        _raw("b", mesh_path="m.obj"),
    ])
    path = tmp_path / "out.json"
    serialize_records(records, path)
    back = ingest(path)
    assert back == records


# ---- similarity graph -----------------------------------------------------------

class _FakeIndex:
    """Minimal index stub over 1D feature points (hog metric = euclidean)."""

    def __init__(self, ids, values):
        self.ids = {"hog": list(ids)}
        self.payloads = {"hog": np.asarray(values, dtype=np.float64)}

    def require_kind(self, kind):
        if kind != "hog" or not self.ids["hog"]:
            raise KindMissing(kind)

    def size(self, kind):
        return len(self.ids.get(kind, []))


def test_graph_three_clusters():
    rng = np.random.default_rng(0)
    ids, vals = [], []
    for c, center in enumerate((0.0, 10.0, 20.0)):
        for i in range(6):
            ids.append(f"c{c}-{i}")
            vals.append(center + rng.uniform(-0.5, 0.5, 4))
    g = build_similarity_graph(_FakeIndex(ids, vals), "hog", k=3)
    intra = sum(1 for a, b, _ in g.edges if a.split("-")[0] == b.split("-")[0])
    assert intra / len(g.edges) >= 0.9


def test_graph_k_zero_empty():
    g = build_similarity_graph(_FakeIndex(["a", "b"], [[0.0], [1.0]]), "hog", 0)
    assert g.edges == ()


def test_graph_k_clamped():
    g = build_similarity_graph(_FakeIndex(["a", "b"], [[0.0], [1.0]]), "hog", 5)
    assert len(g.edges) == 1


def test_graph_symmetry():
    rng = np.random.default_rng(1)
    ids = [f"o{i}" for i in range(12)]
    g = build_similarity_graph(_FakeIndex(ids, rng.normal(size=(12, 3))), "hog", 2)
    neigh = g.neighbor_map()
    for a, b, _ in g.edges:
        assert b in neigh[a] and a in neigh[b]
    assert all(a != b for a, b, _ in g.edges)


# ---- linked selection ---------------------------------------------------------------

@pytest.fixture()
def small_catalog():
    records = ingest_records([
        _raw("a", date_from=-600, date_to=-590,
             findspot={"lat": 37.0, "lon": 23.0, "place": "P1"}),
        _raw("b", date_from=-580, date_to=-560,
             findspot={"lat": 38.0, "lon": 24.0, "place": "P2"}),
        _raw("c", date_from=-550, date_to=-500),  # no findspot
    ])
    graph = build_similarity_graph(
        _FakeIndex(["a", "b", "c"], [[0.0], [0.1], [5.0]]), "hog", 1
    )
    return records, graph


def test_selection_date_interval(small_catalog):
    records, graph = small_catalog
    sel = linked_selection(records, graph, {"date": [-600, -585]})
    assert sel.selected_ids == ("a",)
    assert sel.map_view["ids"] == ["a"]
    assert sel.timeline_view["ids"] == ["a"]
    assert sel.graph_view["ids"] == ["a"]


def test_selection_empty_bbox(small_catalog):
    records, graph = small_catalog
    sel = linked_selection(records, graph, {"bbox": [0, 0, 1, 1]})
    assert sel.selected_ids == ()
    assert sel.map_view["points"] == []
    assert sel.timeline_view["intervals"] == []


def test_selection_node_with_hops(small_catalog):
    records, graph = small_catalog
    sel = linked_selection(records, graph, {"node": "a", "hops": 1})
    assert "a" in sel.selected_ids and "b" in sel.selected_ids


def test_selection_3clique_full():
    records = ingest_records([_raw(i) for i in "abc"])
    idx = _FakeIndex(["a", "b", "c"], [[0.0], [0.1], [0.2]])
    graph = build_similarity_graph(idx, "hog", 2)  # 3-clique
    sel = linked_selection(records, graph, {"node": "a", "hops": 1})
    assert sel.selected_ids == ("a", "b", "c")


def test_selection_idempotent(small_catalog):
    records, graph = small_catalog
    first = linked_selection(records, graph, {"date": [-600, -500]})
    second = linked_selection(records, graph, {"ids": list(first.selected_ids)})
    assert second.selected_ids == first.selected_ids


def test_selection_unknown_id(small_catalog):
    records, graph = small_catalog
    with pytest.raises(UnknownId):
        linked_selection(records, graph, {"ids": ["nope"]})
    with pytest.raises(UnknownId):
        linked_selection(records, graph, {"node": "nope"})


def test_selection_views_share_ids(small_catalog):
    records, graph = small_catalog
    sel = linked_selection(records, graph, {"date": [-600, -500]})
    assert sel.map_view["ids"] == sel.timeline_view["ids"] == sel.graph_view["ids"]
    # record without findspot appears in ids but has no map point
    assert "c" in sel.map_view["ids"]
    assert all(p["id"] != "c" for p in sel.map_view["points"])


def test_selection_no_findspot_record_roundtrip():
    rec = CatalogRecord(id="x", date_from=0, date_to=10)
    assert rec.findspot is None
    d = rec.to_dict()
    assert d["findspot"] is None
