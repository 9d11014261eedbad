from itertools import combinations

import numpy as np
import pytest

from lcorbits.enumeration import enumerate_weighted_connected
from lcorbits.gf import rank_mod
from lcorbits.statevec import (
    StateError,
    StateVector,
    apply_local,
    build_graph_state,
    complementation_phase,
    fidelity,
    gate_h,
    gate_m,
    gate_p,
    gate_p_tilde,
    gate_x,
    gate_z,
    schmidt_rank_across,
    verify_complementation,
    verify_scaling,
    verify_sweep,
)
from lcorbits.wgraph import WeightedGraph, pair_count, weights_of_ranks

OMEGA3 = np.exp(2j * np.pi / 3)


def test_plus_states():
    g = WeightedGraph(1, 3, ())
    s = build_graph_state(g)
    assert np.allclose(s.amplitudes, np.full(3, 1 / np.sqrt(3)))
    g = WeightedGraph(3, 5, (0, 0, 0))
    s = build_graph_state(g)
    assert np.allclose(s.amplitudes, np.full(125, 5 ** (-1.5)))


def test_single_edge_amplitudes():
    g = WeightedGraph.from_edges(2, 3, [(0, 1, 1)])
    s = build_graph_state(g)
    expect = np.array([OMEGA3 ** (j * k) for j in range(3) for k in range(3)]) / 3
    assert np.allclose(s.amplitudes, expect)


def test_state_norms():
    rng = np.random.default_rng(3)
    for _ in range(10):
        up = tuple(int(x) for x in rng.integers(0, 3, pair_count(4)))
        s = build_graph_state(WeightedGraph(4, 3, up))
        assert abs(s.norm() - 1.0) < 1e-12


def test_gates_unitary():
    rng = np.random.default_rng(5)
    for d in (2, 3, 5):
        mats = [gate_h(d), gate_m(d, d - 1), gate_p(d), gate_p_tilde(d),
                gate_x(d), gate_z(d)]
        for u in mats:
            assert np.allclose(u @ u.conj().T, np.eye(d), atol=1e-12)
    # norm preservation on random states
    for _ in range(5):
        amps = rng.normal(size=9) + 1j * rng.normal(size=9)
        amps /= np.linalg.norm(amps)
        s = StateVector(3, 2, amps)
        for name in ("H", "Hdag", "P", "Ptilde", "Z", "X"):
            t = apply_local(s, name, 0)
            assert abs(t.norm() - 1.0) < 1e-12
        t = apply_local(s, "M", 1, 2)
        assert abs(t.norm() - 1.0) < 1e-12


def test_p_tilde_fourier_conjugation():
    # the dual-basis phase gate: conjugate of P by the Fourier transform
    for d in (3, 5):
        h = gate_h(d)
        assert np.allclose(gate_p_tilde(d), h @ gate_p(d) @ h.conj().T)


def test_p_gate_d2_has_order_four():
    s = gate_p(2)
    assert np.allclose(s, np.diag([1, 1j]))
    assert np.allclose(np.linalg.matrix_power(s, 4), np.eye(2))
    assert not np.allclose(np.linalg.matrix_power(s, 2), np.eye(2))


def test_zx_commutation():
    # Z X |0> = omega |1>
    s = StateVector(3, 1, np.array([1, 0, 0], dtype=complex))
    t = apply_local(apply_local(s, "X", 0), "Z", 0)
    assert np.allclose(t.amplitudes, [0, OMEGA3, 0])


def test_m_gate():
    assert np.allclose(gate_m(3, 1), np.eye(3))
    with pytest.raises(StateError):
        gate_m(3, 0)
    with pytest.raises(StateError):
        apply_local(StateVector(3, 1, np.array([1, 0, 0], dtype=complex)),
                    "M", 0, 3)


def test_fidelity_properties():
    rng = np.random.default_rng(7)
    amps = rng.normal(size=27) + 1j * rng.normal(size=27)
    amps /= np.linalg.norm(amps)
    s = StateVector(3, 3, amps)
    assert fidelity(s, s) == pytest.approx(1.0)
    rotated = StateVector(3, 3, np.exp(0.7j) * amps)
    assert fidelity(s, rotated) == pytest.approx(1.0)
    e0 = np.zeros(3, dtype=complex); e0[0] = 1
    e1 = np.zeros(3, dtype=complex); e1[1] = 1
    assert fidelity(StateVector(3, 1, e0), StateVector(3, 1, e1)) == 0
    with pytest.raises(StateError):
        fidelity(StateVector(3, 1, e0), s)


def test_verify_scaling_trivial_cases():
    g = WeightedGraph.from_edges(3, 3, [(0, 1, 1), (1, 2, 2)])
    assert verify_scaling(g, 0, 1) == pytest.approx(1.0)  # identity factor
    lonely = WeightedGraph.from_edges(3, 3, [(1, 2, 1)])
    assert verify_scaling(lonely, 0, 2) == pytest.approx(1.0)  # isolated pivot
    with pytest.raises(StateError):
        verify_scaling(g, 0, 0)


def test_verify_complementation_trivial():
    g = WeightedGraph.from_edges(3, 3, [(0, 1, 1), (1, 2, 2)])
    assert verify_complementation(g, 1, 0) == pytest.approx(1.0)


def test_exhaustive_sweeps_small():
    for d in (2, 3):
        report = verify_sweep(3, d, tol=1e-10)
        assert report.failures == 0
        assert report.max_deviation < 1e-10
    r3 = verify_sweep(3, 3)
    # 10 canonical graphs with n<=3: ops = n per graph for scaling at d=3
    assert r3.scaling_checks == 1 + 2 * 2 + 7 * 3
    assert r3.complementation_checks == 2 * r3.scaling_checks


def test_complementation_phase_recorded():
    g = WeightedGraph.from_edges(3, 3, [(0, 1, 1), (1, 2, 1)])
    ph = complementation_phase(g, 1, 1)
    assert abs(abs(ph) - 1.0) < 1e-10
    rep = verify_sweep(2, 3, record_phases=True)
    assert len(rep.phases) == rep.complementation_checks


def test_schmidt_rank_product_and_edge():
    prod = WeightedGraph(2, 3, (0,))
    assert schmidt_rank_across(prod, [0]) == 1
    edge = WeightedGraph.from_edges(2, 3, [(0, 1, 1)])
    assert schmidt_rank_across(edge, [0]) == 3
    with pytest.raises(StateError):
        schmidt_rank_across(edge, [0, 1])


def test_rank_oracle_n_le_3():
    # log_d of the state-vector Schmidt rank equals the GF(d) block rank
    for n in (2, 3):
        for rank in enumerate_weighted_connected(n, 3):
            w = weights_of_ranks(np.array([rank]), pair_count(n), 3)[0]
            g = WeightedGraph(n, 3, tuple(int(x) for x in w))
            adj = g.adjacency()
            for size in range(1, n):
                for a in combinations(range(n), size):
                    b = [v for v in range(n) if v not in a]
                    block = rank_mod(adj[np.ix_(list(a), b)], 3)
                    assert 3**block == schmidt_rank_across(g, list(a))


def test_clifford_membership_d3():
    # M, P, Ptilde conjugate X and Z to generalized Paulis up to phase
    d = 3
    x, z = gate_x(d), gate_z(d)
    paulis = [np.linalg.matrix_power(x, a) @ np.linalg.matrix_power(z, b)
              for a in range(d) for b in range(d)]

    def is_pauli_up_to_phase(m):
        for p in paulis:
            overlap = np.trace(p.conj().T @ m) / d
            if abs(abs(overlap) - 1.0) < 1e-9:
                return np.allclose(m, overlap * p, atol=1e-9)
        return False

    for u in (gate_m(d, 2), gate_p(d), gate_p_tilde(d)):
        for gen in (x, z):
            assert is_pauli_up_to_phase(u @ gen @ u.conj().T)


def test_size_cap():
    from lcorbits.statevec import _check_size
    with pytest.raises(StateError):
        _check_size(3, 20)
    with pytest.raises(StateError):
        verify_sweep(8, 3)
