"""Exact bounds and certificates for generalized cospectral mates of graphs."""

from .factor import Factorization, factorize, is_prime
from .graph import (
    Graph,
    Graph6Error,
    adjacency_matrix,
    canonical_form,
    complement,
    emit_graph6,
    is_isomorphic,
    parse_graph6,
    random_graph,
)
from .linalg import (
    SnfResult,
    char_poly,
    det,
    invariant_factors,
    kernel_mod_prime_power,
    level_of,
    rank_mod_p,
    rat_inverse,
    snf,
)
from .mates import (
    BoundReport,
    ContradictionReport,
    MateCertificate,
    admissible_levels,
    is_generalized_cospectral,
    mate_bound,
    q_column_diagnostics,
    regular_orthogonal_Q,
    search_mates,
    verify_mate,
)
from .walk import classify_Fn, fingerprint, is_controllable, m_matrix, w_hat, walk_matrix
from .experiment import ExperimentStats, run_experiment

__version__ = "0.1.0"
