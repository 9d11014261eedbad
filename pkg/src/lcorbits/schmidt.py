"""Schmidt-measure bounds for graph states, in log_d units.

The measure is an entanglement monotone, so any bound computed on any
member of an orbit bounds the whole orbit.  Six facts are used:

1. lower bound: max rank of an off-diagonal adjacency block over all
   bipartitions;
2. orbit invariance (bounds transfer across members);
3. deleting a vertex lowers the measure by at most 1;
4. a 2-colorable graph is bounded below by half the adjacency rank and
   above by floor(n/2);
5. 2-colorable with full-rank adjacency pins the value to floor(n/2);
6. a proper coloring with at most 3 colors and class sizes n1 <= n2 <= n3
   leaves at most d^(n1+n2) product terms, i.e. an upper bound n1 + n2.

For rule 6 all colorings are scanned: minimizing n1 + n2 equals finding
the largest independent set whose removal leaves a bipartite graph.
Empty color classes are allowed, which makes rule 6 subsume the upper
half of rule 4 (and gives the min part size for bipartite graphs).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .atlas import OrbitRecord
from .gf import rank_mod
from .wgraph import WeightedGraph, pair_count, weights_of_ranks


class SchmidtError(Exception):
    pass


@dataclass(frozen=True)
class SchmidtBounds:
    lower: int
    upper: int

    def __post_init__(self):
        if self.lower > self.upper:
            raise SchmidtError(
                f"inconsistent bounds: lower {self.lower} > upper {self.upper}")

    @property
    def exact(self) -> bool:
        return self.lower == self.upper

    def as_text(self) -> str:
        return str(self.lower) if self.exact else f"({self.lower}, {self.upper})"


def _support_masks(g: WeightedGraph) -> list:
    """Neighborhood bitmask per vertex of the support graph."""
    masks = [0] * g.n
    for u, v, _ in g.edges():
        masks[u] |= 1 << v
        masks[v] |= 1 << u
    return masks


def _is_bipartite_masked(masks: list, vert_mask: int) -> bool:
    n = len(masks)
    color = {}
    for s in range(n):
        if not (vert_mask >> s) & 1 or s in color:
            continue
        color[s] = 0
        stack = [s]
        while stack:
            u = stack.pop()
            nb = masks[u] & vert_mask
            while nb:
                v = (nb & -nb).bit_length() - 1
                nb &= nb - 1
                if v not in color:
                    color[v] = 1 - color[u]
                    stack.append(v)
                elif color[v] == color[u]:
                    return False
    return True


def bipartition_lower_bound(g: WeightedGraph) -> int:
    """Max GF(d) rank of the off-diagonal block over all bipartitions."""
    n = g.n
    if n < 2:
        return 0
    adj = g.adjacency()
    best = 0
    # fix vertex 0 in side A to halve the scan
    for mask in range(1 << (n - 1)):
        a = [0] + [v for v in range(1, n) if (mask >> (v - 1)) & 1]
        b = [v for v in range(1, n) if not (mask >> (v - 1)) & 1]
        if not b:
            continue
        block = adj[np.ix_(a, b)]
        best = max(best, rank_mod(block, g.d))
        if best >= min(len(a), len(b)) == n // 2:
            break
    return best


def three_coloring_upper_bound(g: WeightedGraph) -> int | None:
    """n - max{|S| : S independent, support minus S bipartite}; None if not
    3-colorable.  Scans every proper coloring with at most 3 colors."""
    n = g.n
    masks = _support_masks(g)
    full = (1 << n) - 1
    best = None
    for s in range(1 << n):
        ok = True
        rem = s
        while rem:
            v = (rem & -rem).bit_length() - 1
            rem &= rem - 1
            if masks[v] & s:
                ok = False
                break
        if not ok:
            continue
        if _is_bipartite_masked(masks, full & ~s):
            size = bin(s).count("1")
            if best is None or n - size < best:
                best = n - size
    return best


def colorability_bounds(g: WeightedGraph) -> tuple:
    """(lower, upper) from the coloring rules alone."""
    n = g.n
    lower, upper = 0, n - 1
    masks = _support_masks(g)
    if _is_bipartite_masked(masks, (1 << n) - 1):
        r = rank_mod(g.adjacency(), g.d)
        lower = (r + 1) // 2
        upper = n // 2
        if r == n:
            lower = upper = n // 2
    three = three_coloring_upper_bound(g)
    if three is not None:
        upper = min(upper, three)
    if lower > upper:  # cannot happen for valid rules; guard anyway
        raise SchmidtError(f"coloring rules disagree: ({lower}, {upper})")
    return lower, upper


def _delete_vertex(g: WeightedGraph, v: int) -> WeightedGraph:
    keep = [u for u in range(g.n) if u != v]
    up = []
    for i in range(len(keep)):
        for j in range(i + 1, len(keep)):
            up.append(g.weight(keep[i], keep[j]))
    return WeightedGraph(g.n - 1, g.d, tuple(up))


def vertex_removal_upper_bound(g: WeightedGraph, budget: int = 2) -> int:
    """Rule 3: best coloring-rule upper bound reachable by deleting up to
    `budget` vertices, each deletion costing 1."""
    if budget < 1:
        raise SchmidtError("recursion budget must be at least 1")
    best = g.n - 1
    for v in range(g.n):
        sub = _delete_vertex(g, v)
        _, sub_upper = colorability_bounds(sub)
        if budget > 1 and sub.n > 1:
            sub_upper = min(sub_upper, vertex_removal_upper_bound(sub, budget - 1))
        best = min(best, sub_upper + 1)
    return best


def graph_schmidt_bounds(g: WeightedGraph, budget: int = 2) -> SchmidtBounds:
    """Bounds from all rules applied to one graph."""
    lo_col, up_col = colorability_bounds(g)
    lower = max(bipartition_lower_bound(g), lo_col)
    upper = min(g.n - 1, up_col)
    if lower < upper and g.n > 1:
        upper = min(upper, vertex_removal_upper_bound(g, budget))
    return SchmidtBounds(lower, upper)


@lru_cache(maxsize=None)
def _support_upper_bound(n: int, support_rank: int, budget: int) -> int:
    """Upper bound from rules 3, 4, 6 for one support class.

    The upper-bound rules never look at the weights (rule 5's rank check
    only tightens the lower side), so the value is shared by every member
    on an isomorphic support.
    """
    w = weights_of_ranks(np.array([support_rank], dtype=np.int64),
                         pair_count(n), 2)[0]
    g = WeightedGraph(n, 2, tuple(int(x) for x in w))
    _, upper = colorability_bounds(g)
    if g.n > 1:
        upper = min(upper, vertex_removal_upper_bound(g, budget))
    return min(g.n - 1, upper)


def orbit_schmidt_bounds(orbit: OrbitRecord, scan: str = "all",
                         budget: int = 2) -> SchmidtBounds:
    """Bounds for an orbit.

    The lower bound is the block-rank bound on the representative (it is
    the same for every member, and the coloring lower bound can never beat
    it: for a bipartite member the coloring bipartition is itself one of
    the scanned blocks).  The upper bound minimizes the coloring and
    vertex-removal rules over members; scan='all' covers every member via
    its support class, scan='representative' uses the representative only.
    """
    from .observables import member_support_ranks

    lo_col, up_col = colorability_bounds(orbit.rep)
    lower = max(bipartition_lower_bound(orbit.rep), lo_col)
    if scan == "representative":
        upper = min(orbit.n - 1, up_col)
        if orbit.n > 1:
            upper = min(upper, vertex_removal_upper_bound(orbit.rep, budget))
    elif scan == "all":
        upper = orbit.n - 1
        for r in np.unique(member_support_ranks(orbit)):
            upper = min(upper, _support_upper_bound(orbit.n, int(r), budget))
    else:
        raise SchmidtError(f"unknown scan mode {scan!r}")
    bounds = SchmidtBounds(lower, upper)
    orbit.schmidt = bounds
    return bounds
