"""Dense d-level state-vector simulator for cross-checking the graph rules.

A graph state is prepared by applying controlled-Z powers along the edges
of a weighted graph to a product of |+> states; the two graphical rules
then correspond to explicit local unitaries:

* scaling by gamma at w       <->  M_w(gamma^{-1}),  M(g)|k> = |g k>
* gamma-complementation at w  <->  Ptilde_w^gamma * prod_v P_v^(-gamma G_vw^2)

with P|x> = w^(x(x-1)/2)|x>, Ptilde = Hdag P H and w = exp(2 pi i / d).
Everything here is dense and meant for small n only; site 0 is the most
significant digit of the basis index.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .gf import check_prime, inv_mod
from .localops import local_complementation, local_scaling
from .wgraph import WeightedGraph, pair_table

MAX_AMPLITUDES = 10**6


class StateError(Exception):
    pass


@dataclass
class StateVector:
    d: int
    n: int
    amplitudes: np.ndarray

    def __post_init__(self):
        check_prime(self.d)
        if self.amplitudes.shape != (self.d**self.n,):
            raise StateError("amplitude vector has the wrong length")

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


def _check_size(d: int, n: int):
    if d**n > MAX_AMPLITUDES:
        raise StateError(f"state dimension {d}**{n} exceeds the dense cap")


def _site_digits(d: int, n: int, site: int) -> np.ndarray:
    idx = np.arange(d**n)
    return (idx // d ** (n - 1 - site)) % d


def build_graph_state(g: WeightedGraph) -> StateVector:
    """CZ^w along every edge applied to |+>^n."""
    _check_size(g.d, g.n)
    d, n = g.d, g.n
    omega = np.exp(2j * np.pi / d)
    phase = np.zeros(d**n, dtype=np.int64)
    for (u, v), w in zip(pair_table(n)[0], g.upper):
        if w:
            phase += w * _site_digits(d, n, u) * _site_digits(d, n, v)
    amps = omega ** (phase % d) / d ** (n / 2)
    return StateVector(d, n, amps.astype(np.complex128))


# -- single-site and two-site gates -----------------------------------------

def _omega(d: int) -> complex:
    return np.exp(2j * np.pi / d)


def gate_h(d: int) -> np.ndarray:
    j, k = np.meshgrid(np.arange(d), np.arange(d), indexing="ij")
    return _omega(d) ** ((j * k) % d) / np.sqrt(d)


def gate_m(d: int, gamma: int) -> np.ndarray:
    gamma %= d
    if gamma == 0:
        raise StateError("M(0) is not unitary")
    u = np.zeros((d, d))
    for k in range(d):
        u[(gamma * k) % d, k] = 1.0
    return u


def gate_p(d: int, a: int = 1) -> np.ndarray:
    """Quadratic phase gate, P^a|x> = tau^(a x^2)|x> with tau a primitive
    2d-th root for d = 2 and omega^(1/2) read as omega^((d+1)/2) otherwise.

    The x^2/2 exponent (rather than x(x-1)/2) is what makes the
    complementation identity hold with weight-2 edges at the pivot; the
    x(x-1)/2 variant differs by a Z power and leaves uncanceled relative
    phases (and degenerates to the identity at d = 2, where the order-4
    gate diag(1, i) is required).
    """
    if d == 2:
        return np.diag([1.0, 1j ** (a % 4)])
    inv2 = (d + 1) // 2
    expo = [(a * inv2 * x * x) % d for x in range(d)]
    return np.diag([_omega(d) ** e for e in expo])


def gate_p_tilde(d: int, a: int = 1) -> np.ndarray:
    """Fourier conjugate of the quadratic phase gate (acts on the dual basis)."""
    h = gate_h(d)
    return h @ gate_p(d, a) @ h.conj().T


def gate_x(d: int, a: int = 1) -> np.ndarray:
    u = np.zeros((d, d))
    for k in range(d):
        u[(k + a) % d, k] = 1.0
    return u


def gate_z(d: int, a: int = 1) -> np.ndarray:
    return np.diag([_omega(d) ** ((a * k) % d) for k in range(d)])


_GATES = {
    "H": lambda d, a: gate_h(d),
    "Hdag": lambda d, a: gate_h(d).conj().T,
    "M": gate_m,
    "P": gate_p,
    "Ptilde": gate_p_tilde,
    "X": gate_x,
    "Z": gate_z,
}


def apply_single(state: StateVector, site: int, u: np.ndarray) -> StateVector:
    d, n = state.d, state.n
    if not 0 <= site < n:
        raise StateError(f"site {site} out of range")
    t = state.amplitudes.reshape(d**site, d, d ** (n - site - 1))
    out = np.einsum("ab,xby->xay", u, t).reshape(d**n)
    return StateVector(d, n, out)


def apply_cz(state: StateVector, u_site: int, v_site: int, power: int = 1) -> StateVector:
    d, n = state.d, state.n
    if u_site == v_site or not (0 <= u_site < n and 0 <= v_site < n):
        raise StateError("CZ needs two distinct valid sites")
    ku = _site_digits(d, n, u_site)
    kv = _site_digits(d, n, v_site)
    phase = _omega(d) ** ((power * ku * kv) % d)
    return StateVector(d, n, state.amplitudes * phase)


def apply_local(state: StateVector, name: str, site, amount: int = 1) -> StateVector:
    """Apply a named local gate; `site` is an index (or a pair for CZ)."""
    if name == "CZ":
        return apply_cz(state, site[0], site[1], amount)
    if name not in _GATES:
        raise StateError(f"unknown gate {name!r}")
    if name == "M" and amount % state.d == 0:
        raise StateError("M(0) is not unitary")
    return apply_single(state, site, _GATES[name](state.d, amount))


def fidelity(a: StateVector, b: StateVector) -> float:
    if (a.d, a.n) != (b.d, b.n):
        raise StateError("shape mismatch")
    return float(abs(np.vdot(a.amplitudes, b.amplitudes)))


def overlap(a: StateVector, b: StateVector) -> complex:
    if (a.d, a.n) != (b.d, b.n):
        raise StateError("shape mismatch")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


# -- the two graphical-rule identities ---------------------------------------

def verify_scaling(g: WeightedGraph, w: int, gamma: int) -> float:
    """Fidelity between the scaled graph's state and M_w(gamma^-1)|G>."""
    gamma %= g.d
    if gamma == 0:
        raise StateError("scaling factor must be nonzero")
    lhs = build_graph_state(local_scaling(g, w, gamma))
    rhs = apply_local(build_graph_state(g), "M", w, inv_mod(gamma, g.d))
    return fidelity(lhs, rhs)


def _complementation_pair(g: WeightedGraph, w: int, gamma: int):
    gamma %= g.d
    lhs = build_graph_state(local_complementation(g, w, gamma))
    rhs = build_graph_state(g)
    period = 4 if g.d == 2 else g.d
    for v in range(g.n):
        expo = (-gamma * g.weight(v, w) ** 2) % period
        if expo:
            rhs = apply_local(rhs, "P", v, expo)
    rhs = apply_local(rhs, "Ptilde", w, gamma)
    return lhs, rhs


def verify_complementation(g: WeightedGraph, w: int, gamma: int) -> float:
    """Fidelity between the complemented graph's state and the unitary side."""
    lhs, rhs = _complementation_pair(g, w, gamma)
    return fidelity(lhs, rhs)


def complementation_phase(g: WeightedGraph, w: int, gamma: int) -> complex:
    """Observed global phase <unitary side | graph side> for the record."""
    lhs, rhs = _complementation_pair(g, w, gamma)
    return overlap(rhs, lhs)


def schmidt_rank_across(g: WeightedGraph, side_a, tol: float = 1e-9) -> int:
    """Schmidt rank of |G> across the bipartition (side_a, rest)."""
    side_a = sorted(set(side_a))
    side_b = [v for v in range(g.n) if v not in side_a]
    if not side_a or not side_b:
        raise StateError("both sides of the bipartition must be nonempty")
    state = build_graph_state(g)
    tensor = state.amplitudes.reshape((g.d,) * g.n)
    mat = tensor.transpose(side_a + side_b).reshape(
        g.d ** len(side_a), g.d ** len(side_b))
    s = np.linalg.svd(mat, compute_uv=False)
    return int((s > tol * s[0]).sum())


# -- exhaustive sweep for the CLI / acceptance -------------------------------

@dataclass
class VerificationReport:
    d: int
    n_max: int
    scaling_checks: int = 0
    complementation_checks: int = 0
    failures: int = 0
    max_deviation: float = 0.0
    phases: list = field(default_factory=list)

    @property
    def total_checks(self) -> int:
        return self.scaling_checks + self.complementation_checks

    def ok(self, tol: float) -> bool:
        return self.failures == 0 and self.max_deviation <= tol


def verify_sweep(n_max: int, d: int, tol: float = 1e-10,
                 record_phases: bool = False) -> VerificationReport:
    """Run both identities over every canonical connected graph, vertex and
    admissible factor with n <= n_max."""
    from .enumeration import enumerate_weighted_connected
    from .wgraph import pair_count, weights_of_ranks

    _check_size(d, n_max)
    rep = VerificationReport(d=d, n_max=n_max)
    for n in range(1, n_max + 1):
        for rank in enumerate_weighted_connected(n, d):
            w = weights_of_ranks(np.array([rank], dtype=np.int64),
                                 pair_count(n), d)[0]
            g = WeightedGraph(n, d, tuple(int(x) for x in w))
            for vertex in range(n):
                for gamma in range(2, d):
                    f = verify_scaling(g, vertex, gamma)
                    rep.scaling_checks += 1
                    rep.max_deviation = max(rep.max_deviation, abs(1.0 - f))
                    if f < 1.0 - tol:
                        rep.failures += 1
                for gamma in range(1, d):
                    f = verify_complementation(g, vertex, gamma)
                    rep.complementation_checks += 1
                    rep.max_deviation = max(rep.max_deviation, abs(1.0 - f))
                    if f < 1.0 - tol:
                        rep.failures += 1
                    if record_phases:
                        rep.phases.append(
                            complementation_phase(g, vertex, gamma))
    return rep
