"""Near-orthogonal systems of d+k unit vectors: bounds, constructions and
certificates of optimality."""
from .bounds import (
    BoundsReport,
    alpha,
    best_lower,
    exact_optimal_value,
    improved_lower_bound,
    kron_upper,
    mub_upper,
    steiner_upper,
    welch_bound,
)
from .certify import Certificate, certify_construction, emit_table, table_csv, verify_gram
from .designs import (
    bose_triples,
    fourier_hadamard,
    golay_heptads,
    paley_hadamard,
    seidel_276,
    steiner_pairs,
    sylvester_hadamard,
)
from .linalg import Field, GramSystem, coherence, factor_to_vectors, gram, hermitian_eig, numeric_rank
from .measures import FiniteMeasure, first_moment, iso_bound_check, lone_estimate, second_moment, whiten
from .packings import (
    construct_best,
    equiangular_system,
    kronecker_lift,
    lift_seed_from_lines,
    lift_seed_from_mubs,
    lift_seed_from_steiner,
    mub_battery,
    sic_system,
    simplex_system,
    steiner_etf,
    steiner_pipeline,
)

__version__ = "0.1.0"
