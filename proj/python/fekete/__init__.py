"""Fekete polynomial statistics and the limiting random process."""

from fekete._core import (  # noqa: F401
    LegendreTable,
    __version__,
    arc_g,
    arc_h,
    arc_h_deriv,
    circle_zero_count,
    distribution_compare,
    fekete_grid,
    fekete_horner,
    fourth_moment_exact,
    gauss_sum,
    is_prime,
    k0_estimate,
    kq_estimate,
    lq_norm_fekete,
    mahler_fekete,
    moment_lhs,
    moment_rhs_exact,
    quadratic_correlation,
    sample_pattern,
    second_moment_exact,
    sup_norms,
    truncated_h,
)
