import numpy as np
import pytest

from lcorbits.enumeration import (
    enumerate_simple_connected,
    enumerate_weighted_connected,
    enumeration_census,
)
from lcorbits.wgraph import (
    WeightedGraph,
    canonical_ranks,
    is_connected,
    pair_count,
    weights_of_ranks,
)

# connected simple graphs per vertex count (OEIS A001349)
SIMPLE_CONNECTED_COUNTS = {1: 1, 2: 1, 3: 2, 4: 6, 5: 21, 6: 112, 7: 853}


def test_simple_connected_counts():
    for n, expect in SIMPLE_CONNECTED_COUNTS.items():
        graphs = enumerate_simple_connected(n)
        assert len(graphs) == expect
        assert all(is_connected(g) for g in graphs)


def test_simple_connected_sorted_and_distinct():
    graphs = enumerate_simple_connected(5)
    ranks = [int(canonical_ranks(np.array([g.upper]), 5, 2)[0]) for g in graphs]
    assert ranks == sorted(set(ranks))


def test_weighted_counts_match_published_totals():
    assert enumerate_weighted_connected(1, 3).size == 1
    assert enumerate_weighted_connected(2, 3).size == 2
    assert enumerate_weighted_connected(3, 3).size == 7
    assert enumerate_weighted_connected(4, 3).size == 53      # 10 + 37 + 6
    assert enumerate_weighted_connected(5, 3).size == 712     # 11+88+255+219+139


def test_weighted_degenerates_to_simple_for_qubits():
    for n in (3, 4, 5, 6):
        assert enumerate_weighted_connected(n, 2).size == SIMPLE_CONNECTED_COUNTS[n]


def test_census_n3():
    census = enumeration_census(3, 3)
    # path support carries 3 classes, triangle support 4
    assert sorted(census.values()) == [3, 4]
    assert sum(census.values()) == 7


def test_census_totals_match():
    for n, d in [(2, 2), (3, 3), (4, 3), (5, 3), (4, 5)]:
        census = enumeration_census(n, d)
        assert sum(census.values()) == enumerate_weighted_connected(n, d).size


def test_no_two_codes_isomorphic():
    rng = np.random.default_rng(61)
    n, d = 4, 3
    ranks = enumerate_weighted_connected(n, d)
    w = weights_of_ranks(ranks, pair_count(n), d)
    # random relabelings of random classes canonicalize back to themselves
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    pos = {p: k for k, p in enumerate(pairs)}
    rank_set = set(int(r) for r in ranks)
    for _ in range(100):
        i = int(rng.integers(0, len(ranks)))
        perm = rng.permutation(n)
        relabeled = np.zeros(len(pairs), dtype=np.int64)
        for k, (a, b) in enumerate(pairs):
            relabeled[pos[tuple(sorted((perm[a], perm[b])))]] = w[i, k]
        r = int(canonical_ranks(relabeled[None, :], n, d)[0])
        assert r == int(ranks[i])
        assert r in rank_set


def test_outputs_are_canonical_and_connected():
    ranks = enumerate_weighted_connected(4, 3)
    w = weights_of_ranks(ranks, pair_count(4), 3)
    assert (canonical_ranks(w, 4, 3) == ranks).all()
    for row in w:
        assert is_connected(WeightedGraph(4, 3, tuple(int(x) for x in row)))


def test_jobs_parameter_deterministic():
    a = enumerate_weighted_connected(5, 3, jobs=1)
    b = enumerate_weighted_connected(5, 3, jobs=3)
    assert (a == b).all()


def test_rejects_out_of_range_n():
    with pytest.raises(ValueError):
        enumerate_weighted_connected(9, 3)
    with pytest.raises(ValueError):
        enumerate_simple_connected(0)
