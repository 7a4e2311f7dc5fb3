"""Coherence limits of covariant Gibbs-preserving channels versus thermal operations on a qutrit."""
__version__ = "0.1.0"

from .core import (
    ConsistencyError,
    DomainError,
    ResourceError,
    StructureError,
    gibbs_weights,
    initial_state,
    make_gibbs_state,
)
from .ento import (
    entry_bounds,
    kraus_from_transition,
    lp_oracle_max,
    max_coherence_ento,
    optimal_transition,
    population_feasible,
    sweep_cone,
    thermo_majorization_reachable,
)
from .bath import (
    bath_delta_report,
    dense_channel_oracle,
    make_bath,
    optimal_pointb_unitary,
    random_block_unitary,
    random_pointb_completion,
    svd_normal_form,
    verify_sigma_pattern,
)
from .gap import (
    alpha_epsilon,
    empirical_gap,
    gap_bound_main,
    gap_bound_refined,
    pointb_values,
    sweep_gap,
)
