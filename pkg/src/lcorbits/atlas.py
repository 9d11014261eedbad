"""Orbit atlas: one layer of local ops over every canonical graph.

Vertices are canonical graphs (as base-d ranks), edges join graphs one
admissible local operation apart.  Edges are simple and unlabeled.  An op
application landing back on the same canonical graph marks a self-loop on
that vertex; this covers both identity applications (the matrix did not
move, e.g. complementation at a degree-one vertex) and applications that
land on an isomorphic relabeling.  Both kinds are tallied separately per
vertex so every loop-count reading stays available downstream; the
published-table calibration counts a vertex as looped when either kind
occurs (see observables).

Connected components of the atlas are the entanglement classes (orbits).
"""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components as _sp_components

from .enumeration import enumerate_weighted_connected
from .localops import neighbor_ranks_bulk
from .wgraph import (
    GraphError,
    WeightedGraph,
    canonical_ranks,
    pair_count,
    weights_of_ranks,
)

CHECKPOINT_VERSION = 1


def op_policy_fingerprint(n: int, d: int) -> dict:
    """Identifies the op set an atlas was built with; stores must match."""
    return {
        "scaling_gammas": list(range(2, d)),
        "complementation_gammas": list(range(1, d)),
        "ops_per_vertex": (d - 2) + (d - 1),
        "loop_rule": "changed-matrix-and-same-canonical",
        "n": n,
        "d": d,
    }


@dataclass
class OrbitAtlas:
    n: int
    d: int
    ranks: np.ndarray          # sorted canonical ranks, the vertex set
    edge_keys: np.ndarray      # sorted unique u * V + v keys, u < v, no loops
    loop_iso_counts: np.ndarray    # per-vertex: changed-matrix ops landing on self
    loop_ident_counts: np.ndarray  # per-vertex: identity (matrix-fixing) ops

    @property
    def num_vertices(self) -> int:
        return int(self.ranks.size)

    def edge_pairs(self) -> np.ndarray:
        nv = self.num_vertices
        return np.stack([self.edge_keys // nv, self.edge_keys % nv], axis=1)


@dataclass
class OrbitRecord:
    """One entanglement class: members, representative, observable slots."""

    n: int
    d: int
    member_ranks: np.ndarray       # sorted
    rep: WeightedGraph
    rep_rank: int
    rep_edge_count: int
    rep_total_weight: int
    edges_local: np.ndarray        # (E, 2) int64, indices into member_ranks
    loop_iso_counts: np.ndarray    # per member
    loop_ident_counts: np.ndarray  # per member
    index: int = 0                 # 1-based, assigned by sort_orbits
    observables: dict = field(default_factory=dict)
    schmidt: object = None

    @property
    def size(self) -> int:
        return int(self.member_ranks.size)

    def sort_key(self) -> tuple:
        return (self.n, self.rep_edge_count, self.rep_total_weight, self.rep_rank)

    def member_weights(self) -> np.ndarray:
        return weights_of_ranks(self.member_ranks, pair_count(self.n), self.d)


class AtlasBuilder:
    """Chunked neighbor generation with optional checkpointing.

    Processing order is fixed by the sorted vertex list, so any
    interrupted run resumed from a checkpoint reproduces the exact
    final atlas.
    """

    def __init__(self, ranks: np.ndarray, n: int, d: int, chunk_size: int = 8192,
                 jobs: int = 1):
        self.ranks = np.sort(np.asarray(ranks, dtype=np.int64))
        self.n = n
        self.d = d
        self.chunk_size = int(chunk_size)
        self.jobs = max(1, int(jobs))
        self.cursor = 0
        self.loop_iso_counts = np.zeros(self.ranks.size, dtype=np.int64)
        self.loop_ident_counts = np.zeros(self.ranks.size, dtype=np.int64)
        self._edge_parts: list = []

    @property
    def num_chunks(self) -> int:
        return max(1, -(-self.ranks.size // self.chunk_size))

    @property
    def done(self) -> bool:
        return self.cursor >= self.num_chunks

    def _process_range(self, lo: int, hi: int):
        m = pair_count(self.n)
        w = weights_of_ranks(self.ranks[lo:hi], m, self.d)
        nb, changed = neighbor_ranks_bulk(w, self.n, self.d)
        vidx = np.searchsorted(self.ranks, nb)
        if vidx.size and not (np.take(self.ranks, np.minimum(vidx, self.ranks.size - 1))
                              == nb).all():
            raise GraphError("op image missing from the vertex set; "
                             "atlas input must be the full canonical enumeration")
        uidx = np.repeat(np.arange(lo, hi, dtype=np.int64), nb.shape[1]) \
            .reshape(nb.shape)
        same = vidx == uidx
        iso_at = uidx[changed & same]
        ident_at = uidx[~changed]  # unchanged matrix implies same canonical vertex
        is_edge = ~same
        a = uidx[is_edge]
        b = vidx[is_edge]
        lo_v = np.minimum(a, b)
        hi_v = np.maximum(a, b)
        keys = np.unique(lo_v * self.ranks.size + hi_v)
        return iso_at, ident_at, keys

    def step(self) -> bool:
        """Process one chunk; returns True while work remains."""
        if self.done:
            return False
        lo = self.cursor * self.chunk_size
        hi = min(self.ranks.size, lo + self.chunk_size)
        if self.jobs > 1 and hi - lo > self.jobs:
            from concurrent.futures import ThreadPoolExecutor

            splits = np.linspace(lo, hi, self.jobs + 1, dtype=np.int64)
            spans = [(int(a), int(b)) for a, b in zip(splits[:-1], splits[1:]) if b > a]
            with ThreadPoolExecutor(max_workers=self.jobs) as pool:
                parts = list(pool.map(lambda s: self._process_range(*s), spans))
            iso_at = np.concatenate([p[0] for p in parts])
            ident_at = np.concatenate([p[1] for p in parts])
            keys = np.unique(np.concatenate([p[2] for p in parts]))
        else:
            iso_at, ident_at, keys = self._process_range(lo, hi)
        np.add.at(self.loop_iso_counts, iso_at, 1)
        np.add.at(self.loop_ident_counts, ident_at, 1)
        self._edge_parts.append(keys)
        self.cursor += 1
        return not self.done

    def run(self, checkpoint_path: str | None = None, checkpoint_every: int = 0,
            max_chunks: int | None = None):
        steps = 0
        while not self.done:
            self.step()
            steps += 1
            if checkpoint_path and checkpoint_every and steps % checkpoint_every == 0:
                self.save_checkpoint(checkpoint_path)
            if max_chunks is not None and steps >= max_chunks:
                break
        if checkpoint_path and self.done:
            self.save_checkpoint(checkpoint_path)
        return self

    def _compact_edges(self) -> np.ndarray:
        if not self._edge_parts:
            return np.empty(0, dtype=np.int64)
        merged = np.unique(np.concatenate(self._edge_parts))
        self._edge_parts = [merged]
        return merged

    def result(self) -> OrbitAtlas:
        if not self.done:
            raise GraphError("atlas build not finished")
        return OrbitAtlas(self.n, self.d, self.ranks, self._compact_edges(),
                          self.loop_iso_counts, self.loop_ident_counts)

    # -- checkpointing ------------------------------------------------------

    def save_checkpoint(self, path: str):
        header = {
            "version": CHECKPOINT_VERSION,
            "cursor": self.cursor,
            "chunk_size": self.chunk_size,
            "policy": op_policy_fingerprint(self.n, self.d),
        }
        fd, tmp = tempfile.mkstemp(dir=os.path.dirname(os.path.abspath(path)),
                                   suffix=".tmp")
        os.close(fd)
        try:
            np.savez_compressed(
                tmp, header=json.dumps(header, sort_keys=True),
                ranks=self.ranks, loop_iso=self.loop_iso_counts,
                loop_ident=self.loop_ident_counts, edges=self._compact_edges())
            # np.savez appends .npz to names lacking it
            src = tmp if tmp.endswith(".npz") else tmp + ".npz"
            os.replace(src, path)
        finally:
            if os.path.exists(tmp):
                os.unlink(tmp)

    @classmethod
    def load_checkpoint(cls, path: str, n: int, d: int, jobs: int = 1) -> "AtlasBuilder":
        with np.load(path, allow_pickle=False) as z:
            header = json.loads(str(z["header"]))
            if header["version"] != CHECKPOINT_VERSION:
                raise GraphError(f"unsupported checkpoint version {header['version']}")
            if header["policy"] != op_policy_fingerprint(n, d):
                raise GraphError("checkpoint op policy does not match this build")
            builder = cls(z["ranks"], n, d, chunk_size=header["chunk_size"], jobs=jobs)
            builder.cursor = int(header["cursor"])
            builder.loop_iso_counts = z["loop_iso"].astype(np.int64)
            builder.loop_ident_counts = z["loop_ident"].astype(np.int64)
            builder._edge_parts = [z["edges"].astype(np.int64)]
        return builder


def build_atlas(n: int, d: int, chunk_size: int = 8192, jobs: int = 1) -> OrbitAtlas:
    """Enumerate all canonical connected classes and wire one op layer."""
    ranks = enumerate_weighted_connected(n, d, jobs=jobs)
    return AtlasBuilder(ranks, n, d, chunk_size=chunk_size, jobs=jobs).run().result()


def connected_components(atlas: OrbitAtlas) -> list:
    """Split the atlas into orbits (loops do not affect membership)."""
    nv = atlas.num_vertices
    pairs = atlas.edge_pairs()
    mat = coo_matrix(
        (np.ones(pairs.shape[0], dtype=np.int8), (pairs[:, 0], pairs[:, 1])),
        shape=(nv, nv))
    ncomp, labels = _sp_components(mat, directed=False)
    orbits = []
    order = np.argsort(labels, kind="stable")
    bounds = np.searchsorted(labels[order], np.arange(ncomp + 1))
    edge_labels = labels[pairs[:, 0]] if pairs.size else np.empty(0, dtype=labels.dtype)
    for c in range(ncomp):
        members = np.sort(order[bounds[c]:bounds[c + 1]])
        sub_edges = pairs[edge_labels == c] if pairs.size else pairs
        local = np.searchsorted(members, sub_edges)
        orbits.append(_make_record(atlas, members, local))
    return orbits


def _make_record(atlas: OrbitAtlas, members: np.ndarray, edges_local: np.ndarray):
    ranks = atlas.ranks[members]
    rep_rank, ecount, tweight = select_representative_rank(ranks, atlas.n, atlas.d)
    w = weights_of_ranks(np.array([rep_rank], dtype=np.int64),
                         pair_count(atlas.n), atlas.d)[0]
    rep = WeightedGraph(atlas.n, atlas.d, tuple(int(x) for x in w))
    return OrbitRecord(
        n=atlas.n, d=atlas.d, member_ranks=ranks, rep=rep, rep_rank=rep_rank,
        rep_edge_count=ecount, rep_total_weight=tweight,
        edges_local=edges_local, loop_iso_counts=atlas.loop_iso_counts[members],
        loop_ident_counts=atlas.loop_ident_counts[members])


def select_representative_rank(member_ranks: np.ndarray, n: int, d: int) -> tuple:
    """Member minimizing (edge count, total weight, encoding)."""
    if member_ranks.size == 0:
        raise GraphError("empty orbit")
    w = weights_of_ranks(member_ranks, pair_count(n), d).astype(np.int64)
    ecount = (w > 0).sum(axis=1)
    tweight = w.sum(axis=1)
    best = np.lexsort((member_ranks, tweight, ecount))[0]
    return int(member_ranks[best]), int(ecount[best]), int(tweight[best])


def select_representative(record: OrbitRecord) -> WeightedGraph:
    return record.rep


def sort_orbits(orbits: list) -> list:
    """Paper ordering: by particle count, then the representative tuple."""
    ordered = sorted(orbits, key=lambda o: o.sort_key())
    for i, o in enumerate(ordered, start=1):
        o.index = i
    return ordered


def are_lc_equivalent(g1: WeightedGraph, g2: WeightedGraph,
                      max_frontier: int = 2_000_000) -> bool:
    """Single-query orbit membership via bidirectional closure."""
    if (g1.n, g1.d) != (g2.n, g2.d):
        raise GraphError(f"size/dimension mismatch: "
                         f"({g1.n},{g1.d}) vs ({g2.n},{g2.d})")
    r1 = int(canonical_ranks(np.array([g1.upper], dtype=np.int64), g1.n, g1.d)[0])
    r2 = int(canonical_ranks(np.array([g2.upper], dtype=np.int64), g2.n, g2.d)[0])
    if r1 == r2:
        return True
    n, d, m = g1.n, g1.d, pair_count(g1.n)
    sides = [({r1}, {r1}), ({r2}, {r2})]  # (seen, frontier) per side
    while sides[0][1] or sides[1][1]:
        # expand the smaller frontier first
        s = 0 if (sides[0][1] and (not sides[1][1]
                  or len(sides[0][1]) <= len(sides[1][1]))) else 1
        seen, frontier = sides[s]
        w = weights_of_ranks(np.array(sorted(frontier), dtype=np.int64), m, d)
        nb, _ = neighbor_ranks_bulk(w, n, d)
        new = set(int(x) for x in np.unique(nb)) - seen
        if new & sides[1 - s][0]:
            return True
        seen |= new
        if len(seen) > max_frontier:
            raise GraphError("equivalence search exceeded the frontier cap")
        sides[s] = (seen, new)
    return False
