"""Corrected midpoint quadrature with certified error bounds.

The composite midpoint rule on [0, 1/2] with a second-derivative correction,

    sum_n  f(x_n)/(2N) + f''(x_n)/(192 N^3),   x_n = (2n-1)/(4N),

integrates exactly through third order on each subinterval, leaving an error
at most  sup|f''''| / (60 * 2^10 * N^4).  Two interchangeable error bounds are
provided: the plain one takes a scalar sup bound for f'''', while the refined
one integrates a term-form bound (powers of G, logs, and |G'| factors) using
exact moments and total-variation bounds, gaining one extra power of N.

All node reductions are exact compensated sums over a fixed chunking, so
results are bit-identical regardless of the MAJORANT_THREADS setting.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from math import fsum

from .envelope import envelope_max
from .integrand import BoundTermSum, IntegrandSpec, eval_H, eval_H_second, h4_sup_bound, h4_term_bounds
from .spectral import torus_integral_upper
from .trigpoly import (
    LocalMaxTable,
    SignVariant,
    TrigSquare,
    default_max_table,
    second_deriv_L2,
    variation_bound_power,
)

MAX_STEPS = 1_000_000
_CHUNK = 256
_ERR_DENOM = 60 * 2**10  # 61440

# Working constants for the variation-aware bound: half the sup bound of G'
# and half a rounded upper bound for the L^2 norm of G''.
_HALF_SUP_G1 = 88.0
_HALF_L2_G2 = 1700.0
assert 2.0 * _HALF_SUP_G1 >= 175.93  # sup|G'| = 2^2 pi (1 + 6 + 7) = 175.929...
assert 2.0 * _HALF_L2_G2 >= second_deriv_L2(TrigSquare(5, SignVariant.PLUS))

LOG9 = math.log(9.0)


@dataclass(frozen=True)
class CertifiedValue:
    """A numeric estimate together with a proven absolute error bound."""

    estimate: float
    error_bound: float
    steps: int
    method: str


def thread_count() -> int:
    """Worker count from MAJORANT_THREADS (default 1)."""
    raw = os.environ.get("MAJORANT_THREADS")
    if raw is None or raw.strip() == "":
        return 1
    try:
        n = int(raw)
    except ValueError:
        n = 0
    if n < 1:
        raise ValueError(f"MAJORANT_THREADS must be a positive integer, got {raw!r}")
    return n


def _node_sums(f, f2, n_steps: int) -> tuple[float, float]:
    """Exactly-rounded sums of f and f'' over the midpoint nodes.

    The node range is cut into fixed-size chunks; each chunk is compensated-
    summed, then the per-chunk sums are compensated-summed in order.  The
    chunking never depends on the worker count, so any MAJORANT_THREADS value
    produces identical bits.
    """
    spans = [(lo, min(lo + _CHUNK, n_steps + 1)) for lo in range(1, n_steps + 1, _CHUNK)]
    denom = 4.0 * n_steps

    def crunch(span):
        lo, hi = span
        xs = [(2 * n - 1) / denom for n in range(lo, hi)]
        return fsum(f(x) for x in xs), fsum(f2(x) for x in xs)

    workers = thread_count()
    if workers == 1:
        parts = [crunch(span) for span in spans]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(crunch, spans))
    return fsum(p[0] for p in parts), fsum(p[1] for p in parts)


def midpoint4_integrate(f, f2, n_steps: int, sup4: float) -> CertifiedValue:
    """Corrected midpoint estimate of the integral of f over [0, 1/2].

    ``f2`` must be the second derivative of f and ``sup4`` a bound for
    sup|f''''| (0 for integrands of degree at most 3, making the rule exact).
    """
    if not 1 <= n_steps <= MAX_STEPS:
        raise ValueError(f"step count must be in 1..{MAX_STEPS}, got {n_steps}")
    if sup4 < 0.0:
        raise ValueError(f"fourth-derivative bound must be nonnegative, got {sup4}")
    sf, sf2 = _node_sums(f, f2, n_steps)
    n = float(n_steps)
    estimate = sf / (2.0 * n) + sf2 / (192.0 * n**3)
    return CertifiedValue(estimate, sup4 / (_ERR_DENOM * n**4), n_steps, "plain")


def q_plain(spec: TrigSquare, t: float, j: int, n_steps: int, table: LocalMaxTable) -> float:
    """Bound for the node sum of G^t |log G|^j without a derivative factor.

    Splits the range of G at 1/9: small values are covered by the envelope
    maximum on [0, 1/9] at every node, large values by log(9)^j times the node
    sum of G^t, which a midpoint sum bounds through the exact mean and half
    the total variation of G^t.
    """
    if t < 1.0:
        raise ValueError(f"power must be >= 1, got {t}")
    if j < 0:
        raise ValueError(f"log exponent must be nonnegative, got {j}")
    if n_steps < 0:
        raise ValueError(f"step count must be nonnegative, got {n_steps}")
    small = envelope_max(t, j, 0.0, 1.0 / 9.0) * n_steps if j != 0 else 0.0
    mean = torus_integral_upper(t, spec.k)
    var = variation_bound_power(spec, t, table)
    return small + LOG9**j * (n_steps * mean + 0.5 * var)


def q_star(spec: TrigSquare, t: float, j: int, n_steps: int, table: LocalMaxTable) -> float:
    """Bound for the node sum of G^t |log G|^j |G'|.

    The |G'| factor is absorbed two ways: on the small range [0, 1/9] it costs
    a node-count term plus a boundary term; on the large range, node sums of
    G^t |G'| telescope into the variation of G^(t+1)/(t+1) plus correction
    terms controlled by the variation of G^t and the L^2 norm of G''.
    """
    if t < 1.0:
        raise ValueError(f"power must be >= 1, got {t}")
    if j < 0:
        raise ValueError(f"log exponent must be nonnegative, got {j}")
    if n_steps < 0:
        raise ValueError(f"step count must be nonnegative, got {n_steps}")
    small = 0.0
    if j != 0:
        small = envelope_max(t, j, 0.0, 1.0 / 9.0) * (14.0 * n_steps / 9.0 + _HALF_L2_G2)
    var_up = variation_bound_power(spec, t + 1.0, table)
    var_t = variation_bound_power(spec, t, table)
    tail = _HALF_L2_G2 * math.sqrt(torus_integral_upper(2.0 * t, spec.k))
    return small + LOG9**j * (n_steps / (t + 1.0) * var_up + _HALF_SUP_G1 * var_t + tail)


def refined_error_bound(
    bound_sum: BoundTermSum, spec: TrigSquare, n_steps: int, table: LocalMaxTable
) -> float:
    """Variation-aware quadrature error bound, one power of N sharper than plain.

    Each term of the |H''''| bound is summed over the nodes via q_star (terms
    carrying |G'|) or q_plain (terms without), then scaled like the plain
    bound with one extra 1/N.
    """
    if bound_sum.spec.trig != spec:
        raise ValueError("term bound and square disagree on sign variant or k")
    if n_steps < 1:
        raise ValueError(f"step count must be positive, got {n_steps}")
    w = fsum(
        term.coefficient
        * (q_star if term.has_gprime else q_plain)(spec, term.t_r, term.j_r, n_steps, table)
        for term in bound_sum.terms
    )
    return w / (_ERR_DENOM * float(n_steps) ** 5)


def integrate_H(spec: IntegrandSpec, n_steps: int, mode: str = "plain") -> CertifiedValue:
    """Certified integral of H = G^t log^j G over [0, 1/2]."""
    if mode not in ("plain", "refined"):
        raise ValueError(f"mode must be 'plain' or 'refined', got {mode!r}")

    def f(x: float) -> float:
        return eval_H(spec, x)

    def f2(x: float) -> float:
        return eval_H_second(spec, x)

    if mode == "plain":
        return midpoint4_integrate(f, f2, n_steps, h4_sup_bound(spec))
    bound_sum = h4_term_bounds(spec)
    trig = spec.trig
    table = default_max_table(trig)
    base = midpoint4_integrate(f, f2, n_steps, 0.0)
    err = refined_error_bound(bound_sum, trig, n_steps, table)
    return CertifiedValue(base.estimate, err, n_steps, "refined")


def gap_derivative(order: int, t: float, n_steps: int, mode: str = "refined") -> CertifiedValue:
    """Certified value of the order-th derivative of the norm-comparison gap at t.

    Differentiating the mean of G^t in t brings down log^order G, so the
    derivative of the gap is the difference of the two sign variants'
    integrals of H = G^t log^order G over the half period (both variants are
    even, so the half-period integral is half the mean).  The estimate is
    minus-variant minus plus-variant; error bounds add.
    """
    if order < 0:
        raise ValueError(f"derivative order must be nonnegative, got {order}")
    minus = integrate_H(IntegrandSpec(t, order, SignVariant.MINUS), n_steps, mode)
    plus = integrate_H(IntegrandSpec(t, order, SignVariant.PLUS), n_steps, mode)
    return CertifiedValue(
        minus.estimate - plus.estimate,
        minus.error_bound + plus.error_bound,
        n_steps,
        mode,
    )
