"""Ranking evaluation against expert orders or relevance labels."""

from __future__ import annotations

import numpy as np

from ..errors import TruthMismatch
from .query import RankedResult

PRECISION_KS = (5, 10, 20)


def _spearman(rank_a: np.ndarray, rank_b: np.ndarray) -> float:
    n = len(rank_a)
    if n < 2:
        return 1.0
    d = rank_a.astype(np.float64) - rank_b.astype(np.float64)
    return float(1.0 - 6.0 * np.sum(d * d) / (n * (n * n - 1)))


def evaluate_ranking(result: RankedResult, truth) -> dict:
    """Metrics for a ranked result.

    truth is either an ordered id list (expert ranking: Spearman rank
    correlation + precision@k via top-k overlap) or a mapping id ->
    relevance (precision@k = relevant fraction; no rank correlation).
    Raises TruthMismatch when truth does not cover the ranked ids.
    """
    ids = result.ids()
    metrics: dict = {}
    if isinstance(truth, dict):
        missing = [i for i in ids if i not in truth]
        if missing:
            raise TruthMismatch(f"truth lacks labels for {missing[:5]}")
        rel = [bool(truth[i]) for i in ids]
        for k in PRECISION_KS:
            kk = min(k, len(rel))
            if kk:
                metrics[f"precision@{k}"] = float(np.mean(rel[:kk]))
        metrics["spearman"] = None
        return metrics

    expert = list(truth)
    missing = [i for i in ids if i not in expert]
    if missing:
        raise TruthMismatch(f"expert order lacks {missing[:5]}")
    pos_expert = {oid: r for r, oid in enumerate(expert)}
    common = [oid for oid in expert if oid in set(ids)]
    pos_result = {oid: r for r, oid in enumerate(ids)}
    rank_r = np.array([pos_result[oid] for oid in common])
    rank_e = np.array([pos_expert[oid] for oid in common])
    # re-rank within the common subset so both sides are permutations
    rank_r = np.argsort(np.argsort(rank_r))
    rank_e = np.argsort(np.argsort(rank_e))
    metrics["spearman"] = _spearman(rank_r, rank_e)
    for k in PRECISION_KS:
        kk = min(k, len(ids), len(expert))
        if kk:
            overlap = len(set(ids[:kk]) & set(expert[:kk]))
            metrics[f"precision@{k}"] = overlap / kk
    return metrics
