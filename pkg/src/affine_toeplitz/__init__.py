"""Exact monomial algebra, KMS states and truncated representations for the
Toeplitz algebra of the affine semigroup N^x |x N."""

from .affine import (
    AffinePoint,
    BoundsTooSmall,
    ConePoint,
    IDENTITY,
    brute_join,
    brute_lub,
    group_inv,
    group_mul,
    join_cone,
    leq,
    lub,
)
from .monomials import (
    AddMonomial,
    AlgebraElement,
    ClMonomial,
    MixedPresentationError,
    Monomial,
    MultMonomial,
    ONE,
    adjoint,
    alpha_endo,
    expectation_theta,
    full_mul,
    reduce_add,
    reduce_cl,
    reduce_mult,
)
from .states import (
    DELTA_MINUS1,
    DELTA_PLUS1,
    LEBESGUE,
    KmsParams,
    Measure,
    StateOracle,
    ToeplitzStateSpec,
    dirichlet_sum,
    ground_state,
    kms1_limit,
    kms_state,
)
from .verify import VerificationReport, check_char, check_ground, check_kms_identity, gcd_split, sweep

__version__ = "0.1.0"
