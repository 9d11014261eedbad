"""Generation of all non-isomorphic connected GF(d)-weighted graphs.

Simple (unweighted) isomorphism classes are grown one vertex at a time:
every class on k+1 vertices restricts to some class on k vertices, so
attaching a new vertex to each k-class with every possible neighbor mask
and canonicalizing covers everything.  Weighted classes then come from
dressing each connected simple support with all weight combinations in
{1, ..., d-1} and canonicalizing again.  Supports are isomorphism
invariants, so deduplication never has to cross supports and the work
shards cleanly per support.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .gf import check_prime
from .wgraph import (
    WeightedGraph,
    canonical_ranks,
    is_connected,
    pair_count,
    pair_table,
    weights_of_ranks,
)

MAX_ENUM_VERTICES = 8


def _check_n(n: int):
    if not 1 <= n <= MAX_ENUM_VERTICES:
        raise ValueError(f"enumeration supports 1 <= n <= {MAX_ENUM_VERTICES}, got {n}")


@lru_cache(maxsize=None)
def _simple_class_ranks(n: int) -> tuple:
    """Sorted canonical ranks (d=2) of ALL simple graphs on n vertices."""
    if n == 1:
        return (0,)
    prev = _simple_class_ranks(n - 1)
    m_prev = pair_count(n - 1)
    base = weights_of_ranks(np.array(prev, dtype=np.int64), m_prev, 2)
    # place the k-vertex graph on vertices 0..k-1 and attach vertex k
    pairs_prev, _ = pair_table(n - 1)
    _, pos_new = pair_table(n)
    old_cols = np.array([pos_new[p] for p in pairs_prev], dtype=np.int64) \
        if pairs_prev else np.empty(0, dtype=np.int64)
    att_cols = np.array([pos_new[(i, n - 1)] for i in range(n - 1)], dtype=np.int64)
    masks = np.arange(1 << (n - 1), dtype=np.int64)
    att = (masks[:, None] >> np.arange(n - 1)[None, :]) & 1
    cand = np.zeros((len(prev) * len(masks), pair_count(n)), dtype=np.int64)
    row = 0
    for g in base:
        block = cand[row:row + len(masks)]
        if old_cols.size:
            block[:, old_cols] = g
        block[:, att_cols] = att
        row += len(masks)
    ranks = np.unique(canonical_ranks(cand, n, 2))
    return tuple(int(r) for r in ranks)


def enumerate_simple_connected(n: int) -> list:
    """One representative per isomorphism class of connected simple graphs,
    ordered by canonical code."""
    _check_n(n)
    out = []
    for r in _simple_class_ranks(n):
        w = weights_of_ranks(np.array([r], dtype=np.int64), pair_count(n), 2)[0]
        g = WeightedGraph(n, 2, tuple(int(x) for x in w))
        if is_connected(g):
            out.append(g)
    return out


def _weight_combos(support_cols: np.ndarray, m: int, d: int) -> np.ndarray:
    """All weightings {1..d-1}^e placed on the support positions."""
    e = support_cols.size
    combos = (d - 1) ** e
    vals = np.arange(combos, dtype=np.int64)
    out = np.zeros((combos, m), dtype=np.int64)
    for idx in range(e - 1, -1, -1):
        out[:, support_cols[idx]] = vals % (d - 1) + 1
        vals = vals // (d - 1)
    return out


def support_class_ranks(support: WeightedGraph, d: int) -> np.ndarray:
    """Sorted canonical ranks of all weighted classes over one simple support."""
    n = support.n
    m = pair_count(n)
    cols = np.flatnonzero(np.array(support.upper, dtype=np.int64))
    if cols.size == 0:
        return np.zeros(1, dtype=np.int64) if n == 1 else np.empty(0, dtype=np.int64)
    combos = _weight_combos(cols, m, d)
    return np.unique(canonical_ranks(combos, n, d))


def enumerate_weighted_connected(n: int, d: int, jobs: int = 1) -> np.ndarray:
    """Sorted canonical ranks of all connected weighted classes on n vertices."""
    _check_n(n)
    check_prime(d)
    supports = enumerate_simple_connected(n)
    if jobs > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(lambda s: support_class_ranks(s, d), supports))
    else:
        parts = [support_class_ranks(s, d) for s in supports]
    if not parts:
        return np.empty(0, dtype=np.int64)
    return np.sort(np.concatenate(parts))


def enumeration_census(n: int, d: int) -> dict:
    """Class count per simple support, keyed by the support's canonical rank."""
    _check_n(n)
    check_prime(d)
    census = {}
    for s in enumerate_simple_connected(n):
        key = int(canonical_ranks(np.array([s.upper], dtype=np.int64), n, 2)[0])
        census[key] = int(support_class_ranks(s, d).size)
    return census
