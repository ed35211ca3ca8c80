from .index import DescriptorIndex, build_index, load_index, save_index, KINDS
from .query import RankedResult, SketchQuery, query, rasterize_sketch
from .evaluate import evaluate_ranking

__all__ = [
    "DescriptorIndex",
    "build_index",
    "load_index",
    "save_index",
    "KINDS",
    "RankedResult",
    "SketchQuery",
    "query",
    "rasterize_sketch",
    "evaluate_ranking",
]
