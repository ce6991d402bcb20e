"""Truncated noncommutative power series, matrix evaluations and joint spectral radii."""

from .errors import (
    ExpansionTooLarge,
    NCSeriesError,
    NoWitness,
    NotAnAutomorphism,
    NotAUnit,
    NumericError,
    OutsideStableRegion,
    PreconditionError,
    SamplingError,
    StableRegionUndecided,
)
from .expr import ParseError, parse_series
from .ideals import commutator_kernel_check, ideal_slice, membership
from .jsr import JsrBounds, Region, in_stable_region, jsr_estimate, norm_upper, spectral_lower
from .matrep import (
    GenericMatrixPoly,
    convergence_probe,
    divergence_witness,
    evaluate,
    identity_level,
    injectivity_rank,
    is_identity,
    phi,
    rep_from_point,
    seminorm,
)
from .matrix_tuple import MatrixTuple
from .morphism import Endomorphism, compose_endos, invert, is_automorphism, jacobian
from .series import (
    BiSeries,
    CoefficientOracle,
    CommSeries,
    Series,
    compose,
    geometric_inverse,
    majorant_radius,
    standard_identity,
    substitute_xy,
    substituted_standard_sum,
)
from .words import Word

__version__ = "0.1.0"
