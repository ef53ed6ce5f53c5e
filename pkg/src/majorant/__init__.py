"""Certified numerics for comparing L^p norms of three-term exponential sums.

For the pair of squares |1 + e(x) +- e(7x)|^2 this package proves, with
explicit floating-point error accounting, that the minus variant has the
strictly larger L^p norm for every p between 10 and 12.  The building blocks
(certified midpoint quadrature, closed-form envelope maxima, Taylor
certificates with budgeted coefficient errors, and two endpoint-based sign
mechanisms) are exposed for reuse; ``prove_k5`` runs the whole argument.
"""

from .certify import (
    BudgetError,
    SignCertificate,
    TaylorCertificate,
    build_certificate,
    check_sign_chain,
    check_sign_variation,
    eval_cert_poly,
)
from .envelope import envelope_max
from .integrand import IntegrandSpec, eval_H, eval_H_second, h4_sup_bound, h4_term_bounds
from .pipeline import (
    DEFAULT_CONFIG,
    ProofReport,
    StageResult,
    emit_report,
    load_config,
    merge_config,
    prove_k5,
    reproduce_table,
)
from .quadrature import (
    CertifiedValue,
    gap_derivative,
    integrate_H,
    midpoint4_integrate,
    q_plain,
    q_star,
    thread_count,
)
from .spectral import (
    endpoint_difference_zero,
    fourier_coeffs_pow,
    parseval_integral,
    torus_integral_upper,
    torus_power_integral,
)
from .trigpoly import (
    SignVariant,
    TrigSquare,
    eval_G,
    eval_G_derivative,
    locate_maxima,
    parse_sign,
    second_deriv_L2,
    sup_norm_bound,
    variation_bound_power,
)

__version__ = "1.0.0"

__all__ = [
    "BudgetError",
    "CertifiedValue",
    "DEFAULT_CONFIG",
    "IntegrandSpec",
    "ProofReport",
    "SignCertificate",
    "SignVariant",
    "StageResult",
    "TaylorCertificate",
    "TrigSquare",
    "build_certificate",
    "check_sign_chain",
    "check_sign_variation",
    "emit_report",
    "endpoint_difference_zero",
    "envelope_max",
    "eval_G",
    "eval_G_derivative",
    "eval_H",
    "eval_H_second",
    "eval_cert_poly",
    "fourier_coeffs_pow",
    "gap_derivative",
    "h4_sup_bound",
    "h4_term_bounds",
    "integrate_H",
    "load_config",
    "locate_maxima",
    "merge_config",
    "midpoint4_integrate",
    "parse_sign",
    "parseval_integral",
    "prove_k5",
    "q_plain",
    "q_star",
    "reproduce_table",
    "second_deriv_L2",
    "sup_norm_bound",
    "thread_count",
    "torus_integral_upper",
    "torus_power_integral",
    "variation_bound_power",
]
