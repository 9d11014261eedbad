from itertools import combinations

import numpy as np
import pytest

from lcorbits.schmidt import (
    SchmidtBounds,
    SchmidtError,
    bipartition_lower_bound,
    colorability_bounds,
    graph_schmidt_bounds,
    orbit_schmidt_bounds,
    three_coloring_upper_bound,
    vertex_removal_upper_bound,
)
from lcorbits.gf import rank_mod
from lcorbits.wgraph import WeightedGraph

# published Schmidt column for orbits 1..9
ES_1_TO_9 = {1: "1", 2: "1", 3: "2", 4: "2", 5: "1", 6: "2", 7: "2",
             8: "(2, 3)", 9: "2"}


def _path(n, d=3, ws=None):
    ws = ws or [1] * (n - 1)
    return WeightedGraph.from_edges(n, d, [(i, i + 1, ws[i]) for i in range(n - 1)])


def test_bounds_type():
    assert SchmidtBounds(2, 2).exact
    assert SchmidtBounds(2, 3).as_text() == "(2, 3)"
    assert SchmidtBounds(1, 1).as_text() == "1"
    with pytest.raises(SchmidtError):
        SchmidtBounds(3, 2)


def test_bipartition_lower_bound_basics():
    assert bipartition_lower_bound(WeightedGraph.from_edges(2, 3, [(0, 1, 2)])) == 1
    assert bipartition_lower_bound(WeightedGraph(4, 3, (0,) * 6)) == 0
    assert bipartition_lower_bound(_path(4)) == 2


def test_bipartition_lower_bound_by_hand():
    # enumerate all 7 bipartitions of the all-ones P4 directly
    g = _path(4)
    adj = g.adjacency()
    best = 0
    for size in (1, 2):
        for a in combinations(range(4), size):
            b = [v for v in range(4) if v not in a]
            best = max(best, rank_mod(adj[np.ix_(list(a), b)], 3))
    assert best == 2 == bipartition_lower_bound(g)


def test_colorability_bounds_path3():
    # 2-colorable with adjacency rank 2: lower 1, upper 1
    assert colorability_bounds(_path(3)) == (1, 1)


def test_colorability_bounds_full_rank():
    # all-ones P4 adjacency is full rank over GF(3): exact floor(n/2)
    assert colorability_bounds(_path(4)) == (2, 2)


def test_colorability_edgeless():
    assert colorability_bounds(WeightedGraph(4, 3, (0,) * 6)) == (0, 0)


def test_three_coloring_bound():
    c5 = WeightedGraph.from_edges(
        5, 3, [(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 4, 1), (4, 0, 1)])
    # best proper <=3-coloring of C5 keeps a class of size 2
    assert three_coloring_upper_bound(c5) == 3
    k4 = WeightedGraph.from_edges(4, 3, [(u, v, 1) for u in range(4)
                                         for v in range(u + 1, 4)])
    assert three_coloring_upper_bound(k4) is None  # not 3-colorable
    star = WeightedGraph.from_edges(4, 3, [(0, 1, 1), (0, 2, 1), (0, 3, 1)])
    assert three_coloring_upper_bound(star) == 1  # empty class allowed


def test_vertex_removal():
    single = WeightedGraph.from_edges(2, 3, [(0, 1, 2)])
    assert vertex_removal_upper_bound(single) == 1
    c5 = WeightedGraph.from_edges(
        5, 3, [(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 4, 1), (4, 0, 1)])
    # deleting any C5 vertex leaves a full-rank 2-colorable P4: 2 + 1
    assert vertex_removal_upper_bound(c5) == 3
    with pytest.raises(SchmidtError):
        vertex_removal_upper_bound(single, budget=0)


def test_graph_bounds_star():
    star = WeightedGraph.from_edges(5, 3, [(0, v, 1) for v in range(1, 5)])
    b = graph_schmidt_bounds(star)
    assert (b.lower, b.upper) == (1, 1)


def test_orbit_bounds_published_column(records_n5):
    for rec in records_n5:
        assert orbit_schmidt_bounds(rec).as_text() == ES_1_TO_9[rec.index]


def test_orbit_bounds_scan_modes(records_n5):
    for rec in records_n5:
        rep_scan = orbit_schmidt_bounds(rec, scan="representative")
        full = orbit_schmidt_bounds(rec, scan="all")
        assert rep_scan.lower == full.lower
        assert full.upper <= rep_scan.upper
    with pytest.raises(SchmidtError):
        orbit_schmidt_bounds(records_n5[0], scan="some")


def test_rule2_block_rank_is_orbit_invariant(records_n5):
    # the Schmidt-rank lower bound must be constant across members
    for rec in records_n5:
        values = set()
        for row in rec.member_weights():
            g = WeightedGraph(rec.n, rec.d, tuple(int(x) for x in row))
            values.add(bipartition_lower_bound(g))
            if len(values) > 1:
                break
        assert len(values) == 1


def test_bounds_inside_trivial_envelope(records_n5):
    for rec in records_n5:
        b = rec.schmidt or orbit_schmidt_bounds(rec)
        assert 0 <= b.lower <= b.upper <= rec.n - 1


def test_member_bounds_contain_orbit_value(records_n5):
    # every member's own bounds must bracket the orbit bounds (rule 2)
    rec = records_n5[3]  # orbit 4, six members
    orbit = orbit_schmidt_bounds(rec)
    for row in rec.member_weights():
        g = WeightedGraph(rec.n, rec.d, tuple(int(x) for x in row))
        b = graph_schmidt_bounds(g)
        assert b.lower <= orbit.upper
        assert b.upper >= orbit.lower
