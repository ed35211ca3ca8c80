from .records import CatalogRecord, ingest, ingest_records, serialize_records
from .graph import SimilarityGraph, build_similarity_graph
from .selection import LinkedSelection, linked_selection

__all__ = [
    "CatalogRecord",
    "ingest",
    "ingest_records",
    "serialize_records",
    "SimilarityGraph",
    "build_similarity_graph",
    "LinkedSelection",
    "linked_selection",
]
