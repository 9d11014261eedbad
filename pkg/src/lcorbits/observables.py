"""Per-orbit observables: orbit-graph metrics and in-orbit graph-state metrics.

Orbit-graph (OG) side: greedy chromatic number, self-loop count, density,
average shortest path length, diameter, maximum degree.  Graph-state side:
minimum chromatic number and minimum max weighted degree over the orbit's
members.

Calibrated conventions (anchored on the smallest orbit against the published
table): self-loops are counted per op application, the OG degree excludes
loops, density counts loops inside |E|, distances ignore loops, and the
greedy coloring processes vertices by descending loop-free degree with ties
broken by ascending canonical code.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path as _sp_shortest_path

from .atlas import OrbitRecord
from .wgraph import (
    WeightedGraph,
    canonical_ranks,
    chromatic_number_exact,
    incident_pairs,
    pair_count,
    weights_of_ranks,
)

# N_L semantics, calibrated against the published table: a vertex carries a
# self-loop when ANY op application lands back on the same canonical graph,
# identity applications included ("leads to the same state"); N_L counts such
# vertices once each.  Alternative readings are kept selectable.
LOOP_COUNT_MODE = "any-vertices"

# exact ASPL / diameter are mandatory below this OG size
DEFAULT_EXACT_THRESHOLD = 20_000

_BFS_CELL_BUDGET = 4_000_000  # distance-matrix cells held at once


class ObservableError(Exception):
    pass


@dataclass
class SamplingPlan:
    """Heuristic-mode knobs; defaults follow the published runs."""

    exact_threshold: int = DEFAULT_EXACT_THRESHOLD
    aspl_pairs: int = 10_000
    aspl_rounds: int = 5
    diameter_seeds: int = 1_000
    seed: int = 0


def _degrees(orbit: OrbitRecord) -> np.ndarray:
    deg = np.zeros(orbit.size, dtype=np.int64)
    e = orbit.edges_local
    if e.size:
        np.add.at(deg, e[:, 0], 1)
        np.add.at(deg, e[:, 1], 1)
    return deg


def _adjacency_lists(orbit: OrbitRecord) -> list:
    adj = [[] for _ in range(orbit.size)]
    for u, v in orbit.edges_local:
        adj[u].append(v)
        adj[v].append(u)
    return adj


def _csr(orbit: OrbitRecord) -> csr_matrix:
    nv = orbit.size
    e = orbit.edges_local
    if e.size == 0:
        return csr_matrix((nv, nv), dtype=np.int8)
    rows = np.concatenate([e[:, 0], e[:, 1]])
    cols = np.concatenate([e[:, 1], e[:, 0]])
    return csr_matrix((np.ones(rows.size, dtype=np.int8), (rows, cols)),
                      shape=(nv, nv))


def og_self_loops(orbit: OrbitRecord, mode: str = LOOP_COUNT_MODE) -> tuple:
    """(N_L, ln(N_L + 1)) for the orbit's OG."""
    iso = orbit.loop_iso_counts
    ident = orbit.loop_ident_counts
    if mode == "any-vertices":
        nl = int(((iso + ident) > 0).sum())
    elif mode == "iso-vertices":
        nl = int((iso > 0).sum())
    elif mode == "iso-applications":
        nl = int(iso.sum())
    else:
        raise ObservableError(f"unknown loop mode {mode!r}")
    return nl, math.log(nl + 1)


def og_density(orbit: OrbitRecord, mode: str = LOOP_COUNT_MODE) -> float:
    """|E| / C(|V|, 2), loops included in |E|."""
    nv = orbit.size
    if nv < 2:
        raise ObservableError("density undefined for fewer than two vertices")
    nl, _ = og_self_loops(orbit, mode)
    edges = int(orbit.edges_local.shape[0]) + nl
    return edges / (nv * (nv - 1) / 2)


def og_max_degree(orbit: OrbitRecord) -> int:
    """Maximum loop-free OG degree."""
    if orbit.size == 0:
        return 0
    return int(_degrees(orbit).max(initial=0))


def og_chromatic_greedy(orbit: OrbitRecord, loop_degree_bonus: bool = True) -> int:
    """Largest-first greedy coloring of the OG.

    The processing order sorts by descending degree with a +2 bonus for
    loop-carrying vertices (an undirected graph library counts a self-loop
    twice in the degree), ties broken by ascending canonical code.  Greedy
    results are ordering-dependent; this policy is deterministic, but exact
    agreement with any particular published run is a coin flip on the tied
    groups, so treat the value as the upper bound it is.
    """
    nv = orbit.size
    if nv == 0:
        return 0
    deg = _degrees(orbit)
    if loop_degree_bonus:
        deg = deg + 2 * ((orbit.loop_iso_counts + orbit.loop_ident_counts) > 0)
    # member_ranks is sorted, so index order == ascending code order
    order = np.lexsort((np.arange(nv), -deg))
    adj = _adjacency_lists(orbit)
    color = np.full(nv, -1, dtype=np.int64)
    used = 0
    for v in order:
        taken = {color[u] for u in adj[v] if color[u] >= 0}
        c = 0
        while c in taken:
            c += 1
        color[v] = c
        used = max(used, c + 1)
    return used


def _bfs_sweep(orbit: OrbitRecord, sources: np.ndarray):
    """Yields (sources_chunk, distance block) over the requested sources."""
    g = _csr(orbit)
    step = max(1, _BFS_CELL_BUDGET // max(1, orbit.size))
    for lo in range(0, sources.size, step):
        idx = sources[lo:lo + step]
        dist = _sp_shortest_path(g, method="D", unweighted=True, indices=idx)
        yield idx, np.atleast_2d(dist)


def og_aspl_exact(orbit: OrbitRecord) -> float:
    nv = orbit.size
    if nv < 2:
        return 0.0
    total = 0.0
    for _, dist in _bfs_sweep(orbit, np.arange(nv)):
        if np.isinf(dist).any():
            raise ObservableError("orbit OG is not connected")
        total += dist.sum()
    return total / (nv * (nv - 1))


def og_aspl_sampled(orbit: OrbitRecord, pairs: int, rounds: int, seed: int) -> float:
    """Mean distance over `rounds` random subsets of `pairs` distinct pairs."""
    nv = orbit.size
    if nv < 2:
        return 0.0
    rng = np.random.default_rng(seed)
    round_means = []
    for _ in range(rounds):
        u = rng.integers(0, nv, size=pairs)
        v = rng.integers(0, nv - 1, size=pairs)
        v = np.where(v >= u, v + 1, v)  # distinct endpoints, uniform
        srcs = np.unique(u)
        dist_at = np.empty(pairs, dtype=np.float64)
        for idx, dist in _bfs_sweep(orbit, srcs):
            for local, s in enumerate(idx):
                sel = u == s
                dist_at[sel] = dist[local, v[sel]]
        round_means.append(dist_at.mean())
    return float(np.mean(round_means))


def og_diameter_exact(orbit: OrbitRecord) -> int:
    nv = orbit.size
    if nv < 2:
        return 0
    best = 0.0
    for _, dist in _bfs_sweep(orbit, np.arange(nv)):
        best = max(best, float(dist.max()))
    return int(best)


def og_diameter_heuristic(orbit: OrbitRecord, seeds: int, seed: int) -> int:
    """Max BFS eccentricity over randomly chosen start vertices; <= exact."""
    nv = orbit.size
    if nv < 2:
        return 0
    rng = np.random.default_rng(seed)
    k = min(seeds, nv)
    starts = rng.choice(nv, size=k, replace=False)
    best = 0.0
    for _, dist in _bfs_sweep(orbit, starts):
        best = max(best, float(dist.max()))
    return int(best)


def og_aspl(orbit: OrbitRecord, mode: str = "exact",
            plan: SamplingPlan | None = None) -> float:
    plan = plan or SamplingPlan()
    if mode == "exact":
        return og_aspl_exact(orbit)
    if mode == "sampled":
        return og_aspl_sampled(orbit, plan.aspl_pairs, plan.aspl_rounds, plan.seed)
    raise ObservableError(f"unknown ASPL mode {mode!r}")


def og_diameter(orbit: OrbitRecord, mode: str = "exact",
                plan: SamplingPlan | None = None) -> int:
    plan = plan or SamplingPlan()
    if mode == "exact":
        return og_diameter_exact(orbit)
    if mode == "heuristic":
        return og_diameter_heuristic(orbit, plan.diameter_seeds, plan.seed)
    raise ObservableError(f"unknown diameter mode {mode!r}")


# ---------------------------------------------------------------------------
# in-orbit graph-state observables
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _support_chromatic(n: int, support_rank: int) -> int:
    w = weights_of_ranks(np.array([support_rank], dtype=np.int64),
                         pair_count(n), 2)[0]
    g = WeightedGraph(n, 2, tuple(int(x) for x in w))
    return chromatic_number_exact(g)


def member_support_ranks(orbit: OrbitRecord) -> np.ndarray:
    """Canonical rank (d=2) of each member's simple support."""
    w = orbit.member_weights()
    return canonical_ranks((w > 0).astype(np.int64), orbit.n, 2)


def orbit_min_chromatic(orbit: OrbitRecord) -> int:
    """Minimum exact chromatic number over the orbit's members."""
    uniq = np.unique(member_support_ranks(orbit))
    return min(_support_chromatic(orbit.n, int(r)) for r in uniq)


def orbit_min_max_degree(orbit: OrbitRecord) -> int:
    """min over members of max over vertices of the weighted degree."""
    w = orbit.member_weights().astype(np.int64)
    per_vertex = np.stack(
        [w[:, incident_pairs(orbit.n)[v]].sum(axis=1) for v in range(orbit.n)],
        axis=1)
    return int(per_vertex.max(axis=1).min())


def compute_observables(orbit: OrbitRecord, plan: SamplingPlan | None = None,
                        loop_mode: str = LOOP_COUNT_MODE) -> dict:
    """Fill the full observable row; exact modes below the size threshold."""
    plan = plan or SamplingPlan()
    exact = orbit.size <= plan.exact_threshold
    nl, ln_nl = og_self_loops(orbit, loop_mode)
    row = {
        "chi_og": og_chromatic_greedy(orbit),
        "n_loops": nl,
        "ln_nl": ln_nl,
        "chi_i": orbit_min_chromatic(orbit),
        "density": og_density(orbit, loop_mode) if orbit.size >= 2 else 0.0,
        "aspl": og_aspl(orbit, "exact" if exact else "sampled", plan),
        "diameter": og_diameter(orbit, "exact" if exact else "heuristic", plan),
        "deg_g_min": orbit_min_max_degree(orbit),
        "deg_og_max": og_max_degree(orbit),
        "aspl_exact": exact,
        "diameter_exact": exact,
    }
    orbit.observables = row
    return row
