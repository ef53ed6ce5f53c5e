"""Taylor certificates and rigorous sign verdicts on subintervals.

A certified Taylor expansion replaces the gap function on an interval
[t0 - r, t0 + r] by a polynomial whose coefficients are certified quadrature
values, with three layers of accounting:

  * each coefficient's quadrature error, propagated as err_j * r^j / j!,
    must fit a declared per-coefficient budget;
  * the truncated tail is bounded through the closed-form envelope of
    G^t |log G|^m over [0, 9];
  * the budgets plus the tail bound must fit a single total allowance delta.

The polynomial minus (or plus) delta then brackets the gap derivative from
below (or above), and two elementary mechanisms turn endpoint data into a
sign on the whole interval: a monotonicity chain of derivative signs, and a
variation cascade that plays the growth of a would-be zero's total variation
against endpoint bounds until it contradicts a monotone tail.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import factorial, fsum

from .envelope import envelope_max
from .quadrature import gap_derivative

PIPELINE_T_MIN = 5.0
PIPELINE_T_MAX = 6.0
_EDGE_TOL = 1e-9


class BudgetError(ValueError):
    """A certificate's error accounting failed; the message names the culprit."""


@dataclass(frozen=True)
class TaylorCertificate:
    """A certified degree-n expansion of the base_order-th gap derivative."""

    center: float
    radius: float
    base_order: int
    degree: int
    coeffs: tuple[float, ...]
    coefficient_errors: tuple[float, ...]
    termwise_budget: tuple[float, ...]
    remainder: float
    total_delta: float


@dataclass(frozen=True)
class SignCertificate:
    """Outcome of a sign check on an interval; inconclusive is a value, not an error."""

    interval: tuple[float, float]
    claimed_sign: str
    method: str
    certified: bool
    evidence: tuple[dict, ...]
    failure_reason: str | None = None


def remainder_bound(center: float, radius: float, base_order: int, degree: int) -> float:
    """Bound for the truncated Taylor tail of the gap's base_order-th derivative.

    The (degree+1)-th coefficient derivative is an integral of
    G^t log^(degree+1+base_order) G over the half period for each variant, so
    the Lagrange remainder is at most twice the envelope maximum of that
    integrand times radius^(degree+1)/(degree+1)!.
    """
    if radius <= 0.0:
        raise ValueError(f"radius must be positive, got {radius}")
    if center - radius < PIPELINE_T_MIN - _EDGE_TOL or center + radius > PIPELINE_T_MAX + _EDGE_TOL:
        raise ValueError(
            f"expansion window [{center - radius}, {center + radius}] leaves [5, 6]"
        )
    if base_order < 0 or degree < 0:
        raise ValueError("base_order and degree must be nonnegative")
    peak = envelope_max(center + radius, degree + 1 + base_order, 0.0, 9.0)
    return 2.0 * peak * radius ** (degree + 1) / factorial(degree + 1)


def required_steps(sup4: float, delta: float, radius: float, j: int) -> int:
    """Steps needed for the plain error of coefficient j to fit its share of delta.

    Two quadratures (one per sign variant) each contribute
    sup4/(60*2^10*N^4), scaled by radius^j/j!; solving
    2 * sup4 * radius^j / (60*2^10*N^4*j!) <= delta for N and rounding up.
    """
    if sup4 < 0.0 or delta <= 0.0 or radius <= 0.0 or j < 0:
        raise ValueError("need sup4 >= 0, delta > 0, radius > 0, j >= 0")
    return math.ceil((2.0 * sup4 * radius**j / (60.0 * 2**10 * factorial(j) * delta)) ** 0.25)


def _as_list(value, length: int, caster):
    if isinstance(value, (list, tuple)):
        if len(value) != length:
            raise ValueError(f"expected {length} per-coefficient entries, got {len(value)}")
        return [caster(v) for v in value]
    return [caster(value)] * length


def build_certificate(
    center: float,
    radius: float,
    base_order: int,
    degree: int,
    budgets,
    steps,
    modes,
    total_delta: float,
) -> TaylorCertificate:
    """Compute and validate a certified Taylor expansion.

    ``budgets`` lists one allowance per coefficient 0..degree; ``steps`` and
    ``modes`` give per-coefficient quadrature settings (scalars broadcast).
    Fails with BudgetError naming the offending coefficient if any propagated
    quadrature error exceeds its budget, or if budgets plus the computed tail
    bound overrun total_delta.
    """
    n_terms = degree + 1
    budget_list = _as_list(budgets, n_terms, float)
    steps_list = _as_list(steps, n_terms, int)
    mode_list = _as_list(modes, n_terms, str)
    if any(b <= 0.0 for b in budget_list):
        raise ValueError("every coefficient budget must be positive")
    tail = remainder_bound(center, radius, base_order, degree)
    allowance = fsum(budget_list) + tail
    if allowance > total_delta:
        raise BudgetError(
            f"budgets plus tail bound {allowance:.9g} exceed total allowance {total_delta:g}"
        )
    coeffs = []
    errors = []
    for j in range(n_terms):
        value = gap_derivative(base_order + j, center, steps_list[j], mode_list[j])
        propagated = value.error_bound * radius**j / factorial(j)
        if propagated > budget_list[j]:
            raise BudgetError(
                f"coefficient {j}: propagated quadrature error {propagated:.6g} exceeds "
                f"budget {budget_list[j]:g} (steps={steps_list[j]}, mode={mode_list[j]})"
            )
        coeffs.append(value.estimate)
        errors.append(value.error_bound)
    return TaylorCertificate(
        center,
        radius,
        base_order,
        degree,
        tuple(coeffs),
        tuple(errors),
        tuple(budget_list),
        tail,
        float(total_delta),
    )


def eval_cert_poly(cert: TaylorCertificate, m: int, t: float) -> float:
    """m-th derivative of the certificate polynomial at t inside its window."""
    if not 0 <= m <= cert.degree:
        raise ValueError(f"derivative order must be in 0..{cert.degree}, got {m}")
    if abs(t - cert.center) > cert.radius + _EDGE_TOL:
        raise ValueError(
            f"t={t} outside certified window [{cert.center - cert.radius}, "
            f"{cert.center + cert.radius}]"
        )
    u = t - cert.center
    return fsum(
        cert.coeffs[j] / factorial(j - m) * u ** (j - m) for j in range(m, cert.degree + 1)
    )


def _chain_conditions(cert, delta, a, b, target):
    """Endpoint conditions of the monotone derivative chain, one orientation.

    For a positive verdict: P(b) - delta > 0 and every derivative of P is
    negative at a; the constant top derivative then forces each lower one to
    decrease, so P - delta is decreasing and its minimum P(b) - delta is
    positive.  For a negative verdict: P(a) + delta < 0 with the same
    derivative signs, so P + delta decreases from a negative start.
    """
    rows = []
    ok = True
    if target == "positive":
        anchor = eval_cert_poly(cert, 0, b) - delta
        rows.append({"quantity": "shifted_value", "order": 0, "location": b, "value": anchor})
        ok &= anchor > 0.0
    else:
        anchor = eval_cert_poly(cert, 0, a) + delta
        rows.append({"quantity": "shifted_value", "order": 0, "location": a, "value": anchor})
        ok &= anchor < 0.0
    for m in range(1, cert.degree + 1):
        dv = eval_cert_poly(cert, m, a)
        rows.append({"quantity": "derivative", "order": m, "location": a, "value": dv})
        ok &= dv < 0.0
    return ok, rows


def check_sign_chain(cert: TaylorCertificate, target: str, interval) -> SignCertificate:
    """Sign verdict on an interval from endpoint values and a derivative chain.

    Tries the chain as stated, then (if inconclusive) on the reflection
    t -> a + b - t, which flips every odd derivative; an interval where
    neither orientation closes yields certified=False with a reason.
    """
    a, b = float(interval[0]), float(interval[1])
    _validate_interval(cert, a, b)
    if target not in ("positive", "negative"):
        raise ValueError(f"target must be 'positive' or 'negative', got {target!r}")
    ok, rows = _chain_conditions(cert, cert.total_delta, a, b, target)
    if ok:
        return SignCertificate((a, b), target, "derivative_chain", True, tuple(rows))
    reflected = _reflect(cert, a, b)
    ok2, rows2 = _chain_conditions(reflected, cert.total_delta, a, b, target)
    if ok2:
        for row in rows2:
            row["location"] = a + b - row["location"]
            row["orientation"] = "reflected"
        return SignCertificate((a, b), target, "derivative_chain", True, tuple(rows2))
    return SignCertificate(
        (a, b),
        target,
        "derivative_chain",
        False,
        tuple(rows),
        "endpoint or derivative sign conditions fail in both orientations",
    )


def _reflect(cert: TaylorCertificate, a: float, b: float) -> TaylorCertificate:
    """Certificate of P(a + b - t), recentred so evaluation code can be reused."""
    n = cert.degree
    new_center = a + b - cert.center
    new_coeffs = tuple(cert.coeffs[j] * (-1.0) ** j for j in range(n + 1))
    return TaylorCertificate(
        new_center,
        cert.radius,
        cert.base_order,
        n,
        new_coeffs,
        cert.coefficient_errors,
        cert.termwise_budget,
        cert.remainder,
        cert.total_delta,
    )


def _validate_interval(cert, a, b):
    if not a < b:
        raise ValueError(f"empty interval [{a}, {b}]")
    if a < cert.center - cert.radius - _EDGE_TOL or b > cert.center + cert.radius + _EDGE_TOL:
        raise ValueError(
            f"interval [{a}, {b}] leaves the certified window "
            f"[{cert.center - cert.radius}, {cert.center + cert.radius}]"
        )


def _tail_negative(cert, m, a):
    """Whether derivatives m+1..degree of P are provably negative on [a, b].

    The constant top derivative is its own coefficient; each lower one is
    negative at a and decreasing (by induction from above), hence negative on
    the whole interval.
    """
    if m >= cert.degree:
        return True
    if cert.coeffs[cert.degree] >= 0.0:
        return False
    for u in range(m + 1, cert.degree):
        if eval_cert_poly(cert, u, a) >= 0.0:
            return False
    return True


def check_sign_variation(cert: TaylorCertificate, target: str, interval) -> SignCertificate:
    """Positive-sign verdict via the total-variation cascade.

    Assume p = P - delta had a zero although p(a) > 0 and p(b) > 0.  Then the
    variation of p is at least p(a) + p(b), so the mean of |p'| is at least
    I_1 = (p(a) + p(b))/(b - a) and some point has |p'| >= I_1.  That in turn
    forces Var(p') >= 2*I_1 - |p'(a) + p'(b)|, giving a mean bound I_2 for
    |p''|, and so on.  The cascade descends while each mean exceeds both
    endpoint derivative magnitudes; at the deepest such order whose remaining
    derivatives are provably negative (a monotone tail), |p^(m)| is maximal
    at an endpoint, contradicting the mean bound.  Hence p has no zero and is
    positive throughout.
    """
    a, b = float(interval[0]), float(interval[1])
    _validate_interval(cert, a, b)
    if target != "positive":
        raise ValueError("the variation cascade certifies positive targets only")
    delta = cert.total_delta
    pa = eval_cert_poly(cert, 0, a) - delta
    pb = eval_cert_poly(cert, 0, b) - delta
    rows = [
        {"quantity": "shifted_value", "order": 0, "location": a, "value": pa},
        {"quantity": "shifted_value", "order": 0, "location": b, "value": pb},
    ]
    if pa <= 0.0 or pb <= 0.0:
        return SignCertificate(
            (a, b), target, "variation_cascade", False, tuple(rows),
            "shifted endpoint values are not both positive",
        )
    width = b - a
    var = pa + pb
    rows.append({"quantity": "variation_lower", "order": 0, "value": var})
    levels = []  # (m, mean, endpoint max)
    for m in range(1, cert.degree + 1):
        mean = var / width
        da = eval_cert_poly(cert, m, a)
        db = eval_cert_poly(cert, m, b)
        edge = max(abs(da), abs(db))
        levels.append((m, mean, edge))
        if mean <= edge:
            break
        rows.append({"quantity": "mean_lower", "order": m, "value": mean})
        rows.append({"quantity": "derivative", "order": m, "location": a, "value": da})
        rows.append({"quantity": "derivative", "order": m, "location": b, "value": db})
        var = 2.0 * mean - abs(da + db)
        rows.append({"quantity": "variation_lower", "order": m, "value": var})
    for m, mean, edge in reversed(levels):
        if mean > edge and _tail_negative(cert, m, a):
            rows.append({"quantity": "contradiction_order", "order": m, "value": mean, "edge": edge})
            return SignCertificate((a, b), target, "variation_cascade", True, tuple(rows))
    return SignCertificate(
        (a, b), target, "variation_cascade", False, tuple(rows),
        "no order pairs a mean bound exceeding both endpoint magnitudes with a monotone tail",
    )
