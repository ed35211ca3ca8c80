"""Linked-selection resolution: one selector, identical ids in every view.

Selectors:
  {"ids": [...]}                          explicit id set
  {"date": [from, to]}                    records whose interval overlaps
  {"bbox": [lat_min, lon_min, lat_max, lon_max]}  findspot inside box
  {"node": id, "hops": h}                 graph neighborhood (default h=1)

Every payload view carries the same selected id set; the map view lists
coordinates only for records that have them, and the graph view annotates
1-hop neighbors as non-selected context.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import UnknownId
from .graph import SimilarityGraph
from .records import CatalogRecord


@dataclass(frozen=True)
class LinkedSelection:
    selected_ids: tuple  # sorted
    map_view: dict
    timeline_view: dict
    graph_view: dict

    def to_dict(self) -> dict:
        return {
            "selected_ids": list(self.selected_ids),
            "map": self.map_view,
            "timeline": self.timeline_view,
            "graph": self.graph_view,
        }


def _resolve(records_by_id, graph: SimilarityGraph | None, selector: dict) -> set:
    if not isinstance(selector, dict):
        raise ValueError("selector must be an object")
    known = set(records_by_id)
    if "ids" in selector:
        ids = selector["ids"]
        if not isinstance(ids, (list, tuple)):
            raise ValueError("'ids' selector must hold a list")
        unknown = [i for i in ids if i not in known]
        if unknown:
            raise UnknownId(f"unknown ids: {unknown[:5]}")
        return set(ids)
    if "date" in selector:
        lo, hi = selector["date"]
        lo, hi = int(lo), int(hi)
        if lo > hi:
            raise ValueError("date interval reversed")
        return {
            r.id
            for r in records_by_id.values()
            if r.date_from <= hi and r.date_to >= lo
        }
    if "bbox" in selector:
        lat_min, lon_min, lat_max, lon_max = (float(v) for v in selector["bbox"])
        return {
            r.id
            for r in records_by_id.values()
            if r.findspot is not None
            and lat_min <= r.findspot[0] <= lat_max
            and lon_min <= r.findspot[1] <= lon_max
        }
    if "node" in selector:
        node = selector["node"]
        if node not in known:
            raise UnknownId(f"unknown id: {node}")
        hops = int(selector.get("hops", 1))
        if hops < 0:
            raise ValueError("hops must be >= 0")
        selected = {node}
        if graph is not None and hops > 0:
            neigh = graph.neighbor_map()
            frontier = {node}
            for _ in range(hops):
                frontier = set().union(
                    *(neigh.get(v, set()) for v in frontier)
                ) - selected
                if not frontier:
                    break
                selected |= frontier
        return selected
    raise ValueError(
        "selector must contain one of: 'ids', 'date', 'bbox', 'node'"
    )


def linked_selection(
    records: list[CatalogRecord],
    graph: SimilarityGraph | None,
    selector: dict,
) -> LinkedSelection:
    records_by_id = {r.id: r for r in records}
    selected = _resolve(records_by_id, graph, selector)
    ids = tuple(sorted(selected))

    map_points = [
        {
            "id": r.id,
            "lat": r.findspot[0],
            "lon": r.findspot[1],
            "place": r.findspot[2],
        }
        for r in (records_by_id[i] for i in ids)
        if r.findspot is not None
    ]
    intervals = [
        {"id": r.id, "from": r.date_from, "to": r.date_to}
        for r in (records_by_id[i] for i in ids)
    ]
    context = []
    if graph is not None and ids:
        neigh = graph.neighbor_map()
        halo = set().union(*(neigh.get(i, set()) for i in ids)) - set(ids)
        context = sorted(halo)
    graph_view = {
        "ids": list(ids),
        "context": [{"id": c, "selected": False} for c in context],
    }
    return LinkedSelection(
        selected_ids=ids,
        map_view={"ids": list(ids), "points": map_points},
        timeline_view={"ids": list(ids), "intervals": intervals},
        graph_view=graph_view,
    )
