"""Exact and numerical verification of sphere Poisson algebra quantization
and of loop-algebra cocycle scaling identities."""

from .exact import GaussianRational, SymbolicScalar, gauss
from .harmonics import (
    DEFAULT_LMAX,
    HarmonicCoeffs,
    PoissonTable,
    SpherePoly,
    antipodal,
    b_form,
    check_invariance,
    harmonic_decompose,
    integrate_sphere,
    kappa,
    kappa_infty,
    kks_bracket,
    laplacian,
    omega_bracket,
    poisson_table,
    solid_harmonic,
    solid_harmonic_basis,
)
from .quantize import (
    FuzzyLevel,
    FuzzyOperator,
    Su2Element,
    d_phi,
    d_phi_bar,
    gram_vector,
    iota,
    op_norm,
    spin_rep,
    theta,
    toeplitz,
    trace_product,
    twist_matrix,
)

__version__ = "0.1.0"
