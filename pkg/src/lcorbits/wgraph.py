"""Weighted graphs over GF(d): packed-integer codes, canonical forms, queries.

A graph on n vertices with edge weights in GF(d) is stored as the row-major
upper triangle of its adjacency matrix (pairs (i,j), i<j).  Two integer
encodings of that weight vector are used:

* the *code* packs each weight into b = ceil(log2(d)) bits — this is the
  external identity of a graph (files, CSV, store);
* the *rank* is the same vector read as a base-d number — used internally
  because it is cheaper and shares the code's order.

Which pair occupies which digit is fixed by CODE_LAYOUT.  The published
orbit ordering pins this down empirically (see the layout note below);
within any one layout, numeric code order equals lexicographic order of
the weight vector read in that layout's digit sequence.

Canonicalization minimizes the encoding over all n! vertex relabelings.
The scan is vectorized: relabeling permutes upper-triangle positions, so
the rank of every relabeled graph is a fixed linear function of the weight
vector, and all n! ranks of a batch of graphs come out of one matrix
product against a precomputed (m, n!) power table.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .gf import check_prime

MAX_VERTICES = 9

# Digit order of the packed encoding.  'row_lsb' makes the first row-major
# pair the least significant digit; it is the layout that reproduces the
# published orbit ordering (tie-breaks between orbits with equal edge count
# and total weight resolve by encoding, which exposes the layout).
# Alternatives kept for calibration: 'row_msb', 'col_msb', 'col_lsb'.
CODE_LAYOUT = "row_lsb"

# memory cap for the (chunk, n!) intermediate in bulk canonicalization
_CANON_BUDGET_BYTES = 192 * 1024 * 1024


class GraphError(Exception):
    """Malformed graph, code, or incompatible (n, d)."""


def bits_per_weight(d: int) -> int:
    return max(1, (d - 1).bit_length())


def pair_count(n: int) -> int:
    return n * (n - 1) // 2


@lru_cache(maxsize=None)
def pair_table(n: int):
    """Row-major upper-triangle pair list and (i, j) -> position lookup."""
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    pos = {p: k for k, p in enumerate(pairs)}
    return tuple(pairs), pos


@lru_cache(maxsize=None)
def digit_significance(n: int, layout: str | None = None) -> tuple:
    """significance[k] of row-major pair k: 0 = most significant digit."""
    layout = layout or CODE_LAYOUT
    pairs, _ = pair_table(n)
    m = len(pairs)
    if layout == "row_msb":
        sig = list(range(m))
    elif layout == "row_lsb":
        sig = [m - 1 - k for k in range(m)]
    elif layout in ("col_msb", "col_lsb"):
        colmajor = [(i, j) for j in range(n) for i in range(j)]
        sig = [colmajor.index(p) for p in pairs]
        if layout == "col_lsb":
            sig = [m - 1 - s for s in sig]
    else:
        raise ValueError(f"unknown code layout {layout!r}")
    return tuple(sig)


def pair_pos(n: int, u: int, v: int) -> int:
    if u > v:
        u, v = v, u
    return pair_table(n)[1][(u, v)]


@lru_cache(maxsize=None)
def incident_pairs(n: int) -> tuple:
    """incident_pairs(n)[v] = positions of pairs touching vertex v."""
    pairs, _ = pair_table(n)
    out = []
    for v in range(n):
        out.append(np.array([k for k, (i, j) in enumerate(pairs) if v in (i, j)],
                            dtype=np.int64))
    return tuple(out)


@dataclass(frozen=True)
class WeightedGraph:
    """Symmetric GF(d)-weighted adjacency on n vertices, zero diagonal."""

    n: int
    d: int
    upper: tuple  # length n(n-1)/2, row-major over pairs (i,j), i<j

    def __post_init__(self):
        check_prime(self.d)
        if not 1 <= self.n <= MAX_VERTICES:
            raise GraphError(f"vertex count must be in 1..{MAX_VERTICES}, got {self.n}")
        up = tuple(int(w) for w in self.upper)
        if len(up) != pair_count(self.n):
            raise GraphError(
                f"expected {pair_count(self.n)} upper-triangle weights, got {len(up)}")
        if any(w < 0 or w >= self.d for w in up):
            raise GraphError(f"weights must lie in [0, {self.d})")
        object.__setattr__(self, "upper", up)

    @classmethod
    def from_edges(cls, n: int, d: int, edges) -> "WeightedGraph":
        """Build from (u, v, w) triples, 0-based vertices."""
        up = [0] * pair_count(n)
        for u, v, w in edges:
            if u == v:
                raise GraphError("self-loops are not allowed in graph states")
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"vertex out of range: ({u}, {v})")
            up[pair_pos(n, u, v)] = int(w) % d
        return cls(n, d, tuple(up))

    def weight(self, u: int, v: int) -> int:
        if u == v:
            return 0
        return self.upper[pair_pos(self.n, u, v)]

    def adjacency(self) -> np.ndarray:
        """Full symmetric adjacency matrix as int64."""
        a = np.zeros((self.n, self.n), dtype=np.int64)
        for k, (i, j) in enumerate(pair_table(self.n)[0]):
            a[i, j] = a[j, i] = self.upper[k]
        return a

    def edges(self) -> list:
        """Nonzero-weight edges as (u, v, w) triples."""
        return [(i, j, w) for (i, j), w in zip(pair_table(self.n)[0], self.upper) if w]

    def edge_count(self) -> int:
        return sum(1 for w in self.upper if w)


@dataclass(frozen=True)
class GraphCode:
    """Packed-integer identity of a weighted graph: b bits per weight, MSB first."""

    bits: int
    n: int
    d: int

    def __post_init__(self):
        check_prime(self.d)
        b = bits_per_weight(self.d)
        if self.bits < 0 or self.bits >> (b * pair_count(self.n)):
            raise GraphError(f"code {self.bits} out of range for (n={self.n}, d={self.d})")


def encode(g: WeightedGraph) -> GraphCode:
    """Pack the upper triangle, b bits per weight, per CODE_LAYOUT."""
    b = bits_per_weight(g.d)
    m = pair_count(g.n)
    sig = digit_significance(g.n)
    bits = 0
    for k, w in enumerate(g.upper):
        bits |= w << (b * (m - 1 - sig[k]))
    return GraphCode(bits, g.n, g.d)


def decode(code: GraphCode) -> WeightedGraph:
    b = bits_per_weight(code.d)
    m = pair_count(code.n)
    sig = digit_significance(code.n)
    mask = (1 << b) - 1
    up = [0] * m
    for k in range(m):
        w = (code.bits >> (b * (m - 1 - sig[k]))) & mask
        if w >= code.d:
            raise GraphError(f"malformed code: weight field {w} >= d = {code.d}")
        up[k] = w
    return WeightedGraph(code.n, code.d, tuple(up))


# ---------------------------------------------------------------------------
# bulk canonicalization
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _canon_table(n: int, d: int):
    """Power table for the full-permutation scan.

    Column p holds the digit weight of pair position k after relabeling
    by permutation p, so that (weights @ table)[p] is the base-d rank of
    the relabeled graph.  Column 0 is the identity.
    """
    m = pair_count(n)
    perms = [tuple(range(n))] + [p for p in itertools.permutations(range(n))
                                 if p != tuple(range(n))]
    pairs, pos = pair_table(n)
    sig = digit_significance(n)
    tbl = np.zeros((m, len(perms)), dtype=object)
    for pi, perm in enumerate(perms):
        for k, (i, j) in enumerate(pairs):
            newpos = pos[tuple(sorted((perm[i], perm[j])))]
            tbl[k, pi] = d ** (m - 1 - sig[newpos])
    max_rank = d ** m - 1
    if max_rank < 2**53:
        return perms, tbl.astype(np.float64), np.float64
    if max_rank < 2**63:
        return perms, tbl.astype(np.int64), np.int64
    return perms, tbl, object


@lru_cache(maxsize=None)
def _rank_powers(n: int, d: int) -> np.ndarray:
    m = pair_count(n)
    sig = np.array(digit_significance(n), dtype=np.int64)
    return d ** (m - 1 - sig).astype(np.int64) if m else np.empty(0, dtype=np.int64)


def rank_of_weights(weights: np.ndarray, n: int, d: int) -> np.ndarray:
    """Base-d rank of each weight row; int64 (requires d^m < 2^63)."""
    w = np.asarray(weights, dtype=np.int64)
    return w @ _rank_powers(n, d)


def weights_of_ranks(ranks: np.ndarray, m: int, d: int, n: int | None = None) -> np.ndarray:
    """Inverse of rank_of_weights, vectorized; returns (N, m) uint8."""
    if n is None:
        # m determines n uniquely for m = n(n-1)/2
        n = next(v for v in range(1, MAX_VERTICES + 1) if pair_count(v) == m)
    sig = digit_significance(n)
    r = np.asarray(ranks, dtype=np.int64).copy()
    out = np.empty((r.shape[0], m), dtype=np.uint8)
    inv = sorted(range(m), key=lambda k: sig[k], reverse=True)
    # peel digits least significant first
    for k in inv:
        out[:, k] = r % d
        r //= d
    return out


def canonical_ranks(weights: np.ndarray, n: int, d: int) -> np.ndarray:
    """Canonical (minimum over relabelings) base-d rank per weight row."""
    perms, tbl, dtype = _canon_table(n, d)
    w = np.asarray(weights)
    nrows = w.shape[0]
    m = pair_count(n)
    if m == 0:
        return np.zeros(nrows, dtype=np.int64)
    if dtype is object:
        out = np.empty(nrows, dtype=object)
        for r in range(nrows):
            row = [int(x) for x in w[r]]
            out[r] = min(sum(row[k] * tbl[k, p] for k in range(m))
                         for p in range(len(perms)))
        return out
    chunk = max(1, _CANON_BUDGET_BYTES // (len(perms) * 8))
    out = np.empty(nrows, dtype=np.int64)
    for lo in range(0, nrows, chunk):
        hi = min(nrows, lo + chunk)
        prod = w[lo:hi].astype(dtype) @ tbl
        out[lo:hi] = prod.min(axis=1).astype(np.int64)
    return out


def canonical_weights(weights: np.ndarray, n: int, d: int) -> np.ndarray:
    """Canonical weight rows (the relabeling achieving the minimum rank)."""
    return weights_of_ranks(canonical_ranks(weights, n, d), pair_count(n), d)


def canonical_form(g: WeightedGraph) -> tuple:
    """Minimum-encoding relabeling of g; returns (graph, code)."""
    w = np.array([g.upper], dtype=np.int64)
    cw = canonical_weights(w, g.n, g.d)[0]
    cg = WeightedGraph(g.n, g.d, tuple(int(x) for x in cw))
    return cg, encode(cg)


def code_of_rank(rank: int, n: int, d: int) -> GraphCode:
    """Convert a base-d rank to the packed GraphCode."""
    m = pair_count(n)
    w = weights_of_ranks(np.array([rank], dtype=np.int64), m, d, n=n)[0]
    return encode(WeightedGraph(n, d, tuple(int(x) for x in w)))


def rank_of_code(code: GraphCode) -> int:
    return int(rank_of_weights(
        np.array([decode(code).upper], dtype=np.int64), code.n, code.d)[0])


def codes_of_ranks(ranks, n: int, d: int) -> list:
    """Packed code integers for an array of base-d ranks."""
    m = pair_count(n)
    b = bits_per_weight(d)
    if b * m < 63:
        sig = np.array(digit_significance(n), dtype=np.int64)
        w = weights_of_ranks(np.asarray(ranks, dtype=np.int64), m, d, n=n) \
            .astype(np.int64)
        shifts = np.int64(1) << (b * (m - 1 - sig))
        return [int(x) for x in w @ shifts]
    return [code_of_rank(int(r), n, d).bits for r in ranks]


def ranks_of_codes(codes, n: int, d: int) -> np.ndarray:
    """Base-d ranks for an iterable of packed code integers."""
    return np.array([rank_of_code(GraphCode(int(c), n, d)) for c in codes],
                    dtype=np.int64)


# ---------------------------------------------------------------------------
# structural queries
# ---------------------------------------------------------------------------

def support_adjacency(g: WeightedGraph) -> list:
    """Neighbor lists of the underlying simple graph (weights ignored)."""
    adj = [[] for _ in range(g.n)]
    for u, v, _ in g.edges():
        adj[u].append(v)
        adj[v].append(u)
    return adj


def is_connected(g: WeightedGraph) -> bool:
    if g.n == 1:
        return True
    adj = support_adjacency(g)
    seen = [False] * g.n
    stack = [0]
    seen[0] = True
    count = 1
    while stack:
        u = stack.pop()
        for v in adj[u]:
            if not seen[v]:
                seen[v] = True
                count += 1
                stack.append(v)
    return count == g.n


def weighted_degree(g: WeightedGraph, v: int) -> int:
    """Sum of incident edge weights, as a plain integer (no reduction)."""
    if not 0 <= v < g.n:
        raise GraphError(f"vertex {v} out of range")
    return int(sum(g.upper[k] for k in incident_pairs(g.n)[v]))


def total_weight(g: WeightedGraph) -> int:
    return int(sum(g.upper))


def chromatic_number_exact(g: WeightedGraph) -> int:
    """Exact chromatic number of the support graph (weights ignored)."""
    adj = support_adjacency(g)
    return chromatic_number_adj(adj)


def chromatic_number_adj(adj: list) -> int:
    """Exact chromatic number of a simple graph given neighbor lists."""
    n = len(adj)
    if n == 0:
        return 0
    if all(not nb for nb in adj):
        return 1
    order = sorted(range(n), key=lambda v: -len(adj[v]))
    colors = [-1] * n

    def feasible(k: int, idx: int) -> bool:
        if idx == n:
            return True
        v = order[idx]
        used = {colors[u] for u in adj[v] if colors[u] >= 0}
        # cap new-color introduction at one beyond those already used
        limit = min(k, (max(colors[order[i]] for i in range(idx)) + 2) if idx else 1)
        for c in range(limit):
            if c not in used:
                colors[v] = c
                if feasible(k, idx + 1):
                    return True
                colors[v] = -1
        return False

    for k in range(2, n + 1):
        if feasible(k, 0):
            return k
    return n


def to_dot(g: WeightedGraph, name: str = "g") -> str:
    """DOT text; nodes 1-based, edge label = weight."""
    lines = [f"graph {name} {{"]
    for v in range(g.n):
        lines.append(f"  {v + 1};")
    for u, v, w in g.edges():
        lines.append(f'  {u + 1} -- {v + 1} [label="{w}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
