"""Local-Clifford orbit classification of prime-dimension qudit graph states."""

from .atlas import (
    AtlasBuilder,
    OrbitAtlas,
    OrbitRecord,
    are_lc_equivalent,
    build_atlas,
    connected_components,
    select_representative,
    sort_orbits,
)
from .enumeration import (
    enumerate_simple_connected,
    enumerate_weighted_connected,
    enumeration_census,
)
from .gf import FieldElement, FieldError, FieldMatrix, field_add, field_inv, field_mul, matrix_rank
from .localops import LocalOp, local_complementation, local_scaling, op_neighbors
from .observables import SamplingPlan, compute_observables
from .schmidt import SchmidtBounds, orbit_schmidt_bounds
from .statevec import StateVector, build_graph_state, fidelity, schmidt_rank_across, verify_sweep
from .stats import Series, kendall_tau, pearson, summary
from .store import read_store, write_store
from .wgraph import GraphCode, WeightedGraph, canonical_form, decode, encode

__version__ = "0.1.0"
