"""The quadrature integrand ``H(x) = G(x)^t * log(G(x))^j`` and its derivative bounds.

Fractional-power norms are differentiated under the integral sign, which turns
every integrand into a power-times-log combination of G.  The quadrature rule
needs H'' pointwise and a sup-norm bound for H''''; the latter is assembled by
the chain rule from the derivative bounds of G.  Expanding four derivatives of
G^t log^j G and collecting by which G-derivatives appear yields a short list
of groups, each of the form

    constant * G^(t-i) * (|G'| or 1) * brace(t, j; log G)

where the brace is a fixed polynomial in log G with coefficients polynomial in
t and falling factorials of j.  Replacing |G'| by its sup bound gives a single
scalar envelope (``h4_sup_bound``); keeping |G'| as a factor gives the term
list (``h4_term_bounds``) that the variation-aware error bound integrates
exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .envelope import envelope_max
from .trigpoly import SignVariant, TrigSquare, eval_G, eval_G_derivative, sup_norm_bound

# Rounded working bounds for sup|G^(m)|, m = 0..4 (k = 5).  Rounding keeps the
# group constants below exact integers while staying valid upper bounds.
WORK_M = (9.0, 176.0, 6800.0, 280000.0, 11600000.0)

for _m, _w in enumerate(WORK_M):
    assert _w >= sup_norm_bound(_m).value, f"working bound {_w} below true sup at order {_m}"

# Group constants of the fourth-derivative expansion.  Scalar groups bound
# |G'| by WORK_M[1]; the refined groups keep a first-derivative factor so the
# quadrature can integrate |G'| exactly.
_SCALAR_GROUPS = (
    (WORK_M[1] ** 4, -4, "quartic"),
    (6.0 * WORK_M[1] ** 2 * WORK_M[2], -3, "cubic"),
    (3.0 * WORK_M[2] ** 2 + 4.0 * WORK_M[1] * WORK_M[3], -2, "quadratic"),
    (WORK_M[4], -1, "linear"),
)
_REFINED_GROUPS = (
    (WORK_M[1] ** 3, -4, "quartic", True),
    (6.0 * WORK_M[1] * WORK_M[2], -3, "cubic", True),
    (4.0 * WORK_M[3], -2, "quadratic", True),
    (3.0 * WORK_M[2] ** 2, -2, "quadratic", False),
    (WORK_M[4], -1, "linear", False),
)


@dataclass(frozen=True)
class IntegrandSpec:
    """Parameters of H = G^t log^j G for one sign variant."""

    t: float
    j: int
    sign: SignVariant
    k: int = 5

    def __post_init__(self):
        if self.t < 1.0:
            raise ValueError(f"power t must be >= 1, got {self.t}")
        if self.j < 0 or int(self.j) != self.j:
            raise ValueError(f"log exponent j must be a nonnegative integer, got {self.j}")

    @property
    def trig(self) -> TrigSquare:
        return TrigSquare(self.k, self.sign)


@dataclass(frozen=True)
class BoundTerm:
    """One bound term ``coefficient * G^t_r * |log G|^j_r * (|G'| if has_gprime)``."""

    coefficient: float
    t_r: float
    j_r: int
    has_gprime: bool


@dataclass(frozen=True)
class BoundTermSum:
    """A pointwise upper bound for |H''''| as a sum of BoundTerms."""

    spec: IntegrandSpec
    terms: tuple[BoundTerm, ...]


def eval_H(spec: IntegrandSpec, x: float) -> float:
    """Signed value of H at x (0 at zeros of G, where t >= 1 kills the log)."""
    g = eval_G(spec.trig, x)
    if g == 0.0:
        return 0.0
    return g**spec.t * math.log(g) ** spec.j


def eval_H_second(spec: IntegrandSpec, x: float) -> float:
    """Second derivative of H at x, by the chain rule.

    With L = log G,

        H'' = G'' G^(t-1) (t L^j + j L^(j-1))
            + G'^2 G^(t-2) (t(t-1) L^j + j(2t-1) L^(j-1) + j(j-1) L^(j-2)),

    where terms with a vanishing falling factorial of j are absent rather than
    evaluated.  At a zero of G the value is 0 (the t >= 3 powers win).
    """
    t, j = spec.t, spec.j
    trig = spec.trig
    g = eval_G(trig, x)
    if g == 0.0:
        return 0.0
    gp = eval_G_derivative(trig, 1, x)
    gpp = eval_G_derivative(trig, 2, x)
    ell = math.log(g)
    brace1 = t * ell**j
    brace2 = t * (t - 1.0) * ell**j
    if j >= 1:
        brace1 += j * ell ** (j - 1)
        brace2 += j * (2.0 * t - 1.0) * ell ** (j - 1)
    if j >= 2:
        brace2 += j * (j - 1) * ell ** (j - 2)
    return gpp * g ** (t - 1.0) * brace1 + gp * gp * g ** (t - 2.0) * brace2


def _brace_terms(kind: str, t: float, j: int) -> list[tuple[float, int]]:
    """(coefficient, log-power) pairs of one brace polynomial, zero terms omitted."""
    if kind == "quartic":
        raw = (
            (float(j * (j - 1) * (j - 2) * (j - 3)), j - 4),
            ((4.0 * t - 6.0) * j * (j - 1) * (j - 2), j - 3),
            ((6.0 * t * t - 18.0 * t + 11.0) * j * (j - 1), j - 2),
            ((2.0 * t**3 - 9.0 * t * t + 11.0 * t - 3.0) * 2.0 * j, j - 1),
            (t * (t - 1.0) * (t - 2.0) * (t - 3.0), j),
        )
    elif kind == "cubic":
        raw = (
            (float(j * (j - 1) * (j - 2)), j - 3),
            (3.0 * (t - 1.0) * j * (j - 1), j - 2),
            ((3.0 * t * t - 6.0 * t + 2.0) * j, j - 1),
            (t * (t - 1.0) * (t - 2.0), j),
        )
    elif kind == "quadratic":
        raw = (
            (float(j * (j - 1)), j - 2),
            ((2.0 * t - 1.0) * j, j - 1),
            (t * (t - 1.0), j),
        )
    else:  # linear
        raw = ((float(j), j - 1), (t, j))
    return [(c, p) for c, p in raw if p >= 0 and c != 0.0]


def h4_sup_bound(spec: IntegrandSpec) -> float:
    """Scalar sup-norm bound for H'''' over the whole period.

    Every group becomes constant * max of G^(t+offset) |log G|^p over [0, 9]
    via the closed-form envelope.  Needs t > 4 when logs are present (at
    t = 4 the G^0 log^j G term is unbounded near zeros of G), t >= 4 otherwise.
    """
    t, j = spec.t, spec.j
    if t < 4.0 or (t == 4.0 and j > 0):
        raise ValueError(f"fourth-derivative bound needs t > 4 with logs (t >= 4 plain), got t={t}, j={j}")
    pieces = []
    for const, offset, kind in _SCALAR_GROUPS:
        for c, p in _brace_terms(kind, t, j):
            pieces.append(const * abs(c) * envelope_max(t + offset, p, 0.0, 9.0))
    return math.fsum(pieces)


def h4_term_bounds(spec: IntegrandSpec) -> BoundTermSum:
    """|H''''| bound as explicit terms, keeping a |G'| factor where one arises.

    Needs t >= 5 so that every retained power of G is at least 1.
    """
    t, j = spec.t, spec.j
    if t < 5.0:
        raise ValueError(f"term-form fourth-derivative bound needs t >= 5, got {t}")
    terms = []
    for const, offset, kind, has_gprime in _REFINED_GROUPS:
        for c, p in _brace_terms(kind, t, j):
            terms.append(BoundTerm(const * abs(c), t + offset, p, has_gprime))
    return BoundTermSum(spec, tuple(terms))


def term_sum_value(bound_sum: BoundTermSum, x: float) -> float:
    """Pointwise value of a BoundTermSum at x (an upper bound for |H''''(x)|)."""
    trig = bound_sum.spec.trig
    g = eval_G(trig, x)
    if g == 0.0:
        return math.inf if any(term.j_r > 0 for term in bound_sum.terms) else 0.0
    gp = abs(eval_G_derivative(trig, 1, x))
    ell = abs(math.log(g))
    return math.fsum(
        term.coefficient * g**term.t_r * ell**term.j_r * (gp if term.has_gprime else 1.0)
        for term in bound_sum.terms
    )
