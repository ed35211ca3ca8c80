"""Shape-similarity graph: symmetrized k-NN over a descriptor kind.

The server ships topology and weights only; layout is the client's job.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..retrieval.index import DescriptorIndex, metric_distances


@dataclass(frozen=True)
class SimilarityGraph:
    nodes: tuple  # object ids
    edges: tuple  # of (id_a, id_b, weight) with id_a < id_b
    kind: str
    k: int

    def __post_init__(self):
        for a, b, _ in self.edges:
            if a == b:
                raise ValueError("self-edges are not allowed")
            if not a < b:
                raise ValueError("edges must be stored with id_a < id_b")

    def neighbor_map(self) -> dict:
        out: dict = {n: set() for n in self.nodes}
        for a, b, _ in self.edges:
            out[a].add(b)
            out[b].add(a)
        return out

    def to_dict(self) -> dict:
        return {
            "nodes": list(self.nodes),
            "edges": [[a, b, w] for a, b, w in self.edges],
            "kind": self.kind,
            "k": self.k,
        }


def build_similarity_graph(index: DescriptorIndex, kind: str, k: int) -> SimilarityGraph:
    """Directed k-NN edges symmetrized by union; weights are metric distances."""
    index.require_kind(kind)
    if k < 0:
        raise ValueError("k must be >= 0")
    ids = index.ids[kind]
    payloads = index.payloads[kind]
    n = len(ids)
    edge_weights: dict = {}
    if k > 0 and n > 1:
        kk = min(k, n - 1)
        for i in range(n):
            dists = metric_distances(kind, payloads[i], payloads)
            order = sorted(range(n), key=lambda j: (dists[j], ids[j]))
            picked = [j for j in order if j != i][:kk]
            for j in picked:
                a, b = sorted((ids[i], ids[j]))
                key = (a, b)
                w = float(dists[j])
                if key not in edge_weights or w < edge_weights[key]:
                    edge_weights[key] = w
    edges = tuple((a, b, edge_weights[(a, b)]) for a, b in sorted(edge_weights))
    return SimilarityGraph(nodes=tuple(ids), edges=edges, kind=kind, k=k)
