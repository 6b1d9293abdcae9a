"""Positive definite kernels and interpolation on regular domains."""

from ._core import (  # noqa: F401
    CoefficientSeries,
    Domain,
    Interpolant,
    NotPositiveDefinite,
    NumericalError,
    Point,
    compare_addition_variants,
    cos_distance,
    distance,
    embed,
    evaluate,
    fit,
    gauss_rule,
    gegenbauer,
    gegenbauer_at_one,
    gegenbauer_norm,
    kernel_matrix,
    project_coefficients,
    psd_check,
    rank_bound,
    reproducing_kernel,
    sample,
    series_eval,
    verify_antipodal_failure,
    verify_distance_preservation,
    verify_psd_sufficiency,
    verify_quadrant_integral_identity,
    verify_rank_collapse,
    verify_reproducing,
    weight_normalization,
    zonal,
)
