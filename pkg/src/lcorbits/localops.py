"""Graphical local operations: scaling and complementation about a vertex.

Scaling by gamma multiplies every weight incident to the vertex; a
gamma-complementation adds gamma * G_uw * G_vw to every weight between
neighbors u, v of the vertex w.  Both act mod d and implement local
Clifford unitaries on the corresponding graph states.

The admissible factor sets exclude identity operations: scaling gamma
in {2, ..., d-1}, complementation gamma in {1, ..., d-1}.  Per vertex
that is (d-2) + (d-1) operations.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gf import FieldError, check_prime
from .wgraph import WeightedGraph, canonical_ranks, incident_pairs, pair_table

SCALING = "scaling"
COMPLEMENTATION = "complementation"


@dataclass(frozen=True)
class LocalOp:
    kind: str
    vertex: int
    gamma: int

    def __post_init__(self):
        if self.kind not in (SCALING, COMPLEMENTATION):
            raise ValueError(f"unknown op kind {self.kind!r}")


def admissible_ops(n: int, d: int) -> list:
    """All non-identity (kind, vertex, gamma) ops for an n-vertex graph."""
    check_prime(d)
    ops = []
    for w in range(n):
        for gamma in range(2, d):
            ops.append(LocalOp(SCALING, w, gamma))
        for gamma in range(1, d):
            ops.append(LocalOp(COMPLEMENTATION, w, gamma))
    return ops


def local_scaling(g: WeightedGraph, w: int, gamma: int) -> WeightedGraph:
    """Multiply all weights at vertex w by gamma (mod d)."""
    gamma %= g.d
    if gamma == 0:
        raise FieldError("scaling factor must be nonzero")
    up = list(g.upper)
    for k in incident_pairs(g.n)[w]:
        up[k] = (up[k] * gamma) % g.d
    return WeightedGraph(g.n, g.d, tuple(up))


def local_complementation(g: WeightedGraph, w: int, gamma: int) -> WeightedGraph:
    """Add gamma * G_uw * G_vw to every pair u != v (mod d); w's edges fixed."""
    gamma %= g.d
    up = list(g.upper)
    pairs, _ = pair_table(g.n)
    for k, (u, v) in enumerate(pairs):
        if u == w or v == w:
            continue
        up[k] = (up[k] + gamma * g.weight(u, w) * g.weight(v, w)) % g.d
    return WeightedGraph(g.n, g.d, tuple(up))


def apply_op(g: WeightedGraph, op: LocalOp) -> WeightedGraph:
    if op.kind == SCALING:
        return local_scaling(g, op.vertex, op.gamma)
    return local_complementation(g, op.vertex, op.gamma)


def op_neighbors(g: WeightedGraph) -> list:
    """One layer of admissible ops applied to g.

    Returns (op, canonical code of the image, changed) triples, where
    `changed` records whether the adjacency matrix moved at all before
    canonicalization — needed to tell identity applications apart from
    ops that land on an isomorphic graph (atlas self-loops).
    """
    from .wgraph import canonical_form, encode

    out = []
    for op in admissible_ops(g.n, g.d):
        img = apply_op(g, op)
        changed = img.upper != g.upper
        out.append((op, canonical_form(img)[1], changed))
    return out


# ---------------------------------------------------------------------------
# vectorized op application over many graphs at once
# ---------------------------------------------------------------------------

def apply_ops_bulk(weights: np.ndarray, n: int, d: int, op: LocalOp) -> np.ndarray:
    """Apply one op to every weight row; returns a new int64 array."""
    w = np.asarray(weights, dtype=np.int64)
    out = w.copy()
    if op.kind == SCALING:
        cols = incident_pairs(n)[op.vertex]
        out[:, cols] = (out[:, cols] * op.gamma) % d
        return out
    pairs, pos = pair_table(n)
    tcols, acols, bcols = [], [], []
    for k, (u, v) in enumerate(pairs):
        if u == op.vertex or v == op.vertex:
            continue
        tcols.append(k)
        acols.append(pos[tuple(sorted((u, op.vertex)))])
        bcols.append(pos[tuple(sorted((v, op.vertex)))])
    if tcols:
        out[:, tcols] = (out[:, tcols] + op.gamma * w[:, acols] * w[:, bcols]) % d
    return out


def neighbor_ranks_bulk(weights: np.ndarray, n: int, d: int):
    """Canonical ranks of every admissible op image of every weight row.

    Returns (ranks, changed): both shaped (rows, ops), ops ordered as
    admissible_ops(n, d).
    """
    w = np.asarray(weights, dtype=np.int64)
    ops = admissible_ops(n, d)
    nrows = w.shape[0]
    ranks = np.empty((nrows, len(ops)), dtype=np.int64)
    changed = np.empty((nrows, len(ops)), dtype=bool)
    for j, op in enumerate(ops):
        img = apply_ops_bulk(w, n, d, op)
        changed[:, j] = (img != w).any(axis=1)
        ranks[:, j] = canonical_ranks(img, n, d)
    return ranks, changed
