"""Bargmann invariants of quantum state tuples.

Numerical library and CLI for cyclic trace invariants tr(rho_1 ... rho_n):
their exact attainable region, circulant Gram structure, joint-equivalence
decisions and reconstruction from invariants, shot-noise estimation of the
cycle test, and the two-qubit local-unitary and entanglement criteria.
"""

from .core import (
    StateTuple,
    factor_gram,
    gram_matrix,
    haar_unit_vector,
    haar_unitary,
    make_rng,
    partial_trace,
    partial_transpose,
    random_density,
    split_rng,
)
from .invariants import (
    bargmann,
    inner_product_density,
    marginal_density,
    n_product,
    sample_overlap_statistics,
)
from .circulant import (
    circulant_channel_apply,
    circulant_eigenvalues,
    circulant_matrix,
    circulantize,
    channel_choi_matrix,
    fourier_basis,
    is_circulant_gram,
)
from .geometry import (
    boundary_radius,
    envelope_residual,
    envelope_touch,
    ngon_contains,
    obg_invariant,
    obg_states,
    region_bounds,
    region_contains,
    theta_to_t,
)
from .equivalence import (
    TupleOracle,
    canonical_gram_from_invariants,
    joint_projective_equivalent,
    joint_unitary_equivalent,
    mixed_orbit_equal,
    reconstruct_tuple,
)
from .estimation import (
    circuit_probability,
    controlled_cycle_unitary,
    cycle_probability,
    estimate_bargmann,
    hoeffding_shots,
    simulate_cycle_test,
)
from .twoqubit import (
    bloch_decompose,
    bloch_density,
    entangled_by_invariants,
    imaginarity_quadratic,
    lu_invariants,
    lu_similar,
    ppt_oracle,
    product_rep,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
