"""Trigonometric squares ``|1 + e(x) + s·e((k+2)x)|^2`` and certified facts about them.

Everything downstream rests on a single family of nonnegative trigonometric
polynomials.  For an integer ``k >= 0`` and a sign ``s`` the square expands to

    G(x) = 3 + 2*(cos(2*pi*x) + s*cos(2*pi*(k+1)*x) + s*cos(2*pi*(k+2)*x)),

an even, 1-periodic function with values in [0, 9].  This module evaluates G
and its derivatives in closed form, produces sup-norm bounds for those
derivatives, tabulates certified upper bounds at the local maxima of G over a
half period, and converts such a table into an upper bound for the total
variation of integer or real powers of G.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache
from math import cos, fsum, pi, sin

TWO_PI = 2.0 * pi


class SignVariant(enum.Enum):
    """Sign of the high-frequency term in ``1 + e(x) + s*e((k+2)x)``."""

    PLUS = "plus"
    MINUS = "minus"

    @property
    def factor(self) -> float:
        return 1.0 if self is SignVariant.PLUS else -1.0


def parse_sign(name) -> SignVariant:
    """Coerce a user-supplied sign label ('plus'/'minus') to a SignVariant."""
    if isinstance(name, SignVariant):
        return name
    try:
        return SignVariant(str(name).lower())
    except ValueError:
        raise ValueError(f"unknown sign variant {name!r}; expected 'plus' or 'minus'") from None


@dataclass(frozen=True)
class TrigSquare:
    """The squared three-term sum with frequencies 1, k+1 and k+2."""

    k: int = 5
    sign: SignVariant = SignVariant.PLUS

    def __post_init__(self):
        if self.k < 0:
            raise ValueError(f"k must be a nonnegative integer, got {self.k}")


@dataclass(frozen=True)
class DerivSupBound:
    """A proven bound ``|G^(order)(x)| <= value`` valid for every x."""

    order: int
    value: float


@dataclass(frozen=True)
class LocalMaxEntry:
    """One local maximum of G on the half period.

    ``location`` is accurate to within the tabulation step; interior maxima
    occur in symmetric pairs (multiplicity 2) while the symmetry points 0 and
    1/2 count once.  ``value_upper`` is a certified upper bound for the true
    local maximum value.
    """

    location: float
    value_upper: float
    multiplicity: int


@dataclass(frozen=True)
class LocalMaxTable:
    """Certified local-maximum bounds for one TrigSquare over [0, 1/2]."""

    spec: TrigSquare
    step: float
    bump: float
    entries: tuple[LocalMaxEntry, ...]

    @property
    def total_multiplicity(self) -> int:
        return sum(e.multiplicity for e in self.entries)


def eval_G(spec: TrigSquare, x: float) -> float:
    """Value of G at x, clamped below at 0 against roundoff."""
    s = spec.sign.factor
    f2, f3 = spec.k + 1, spec.k + 2
    v = 3.0 + 2.0 * (cos(TWO_PI * x) + s * cos(TWO_PI * f2 * x) + s * cos(TWO_PI * f3 * x))
    return v if v > 0.0 else 0.0


def eval_G_derivative(spec: TrigSquare, m: int, x: float) -> float:
    """m-th derivative of G at x (m >= 1), in closed form.

    Differentiating each cosine m times rotates it to ``+-sin`` or ``+-cos``
    and scales by the frequency to the m-th power, so

        G^(m)(x) = 2 * (-1)^ceil(m/2) * (2*pi)^m
                   * (trig(2*pi*x) + s*(k+1)^m*trig(2*pi*(k+1)x)
                                   + s*(k+2)^m*trig(2*pi*(k+2)x))

    with trig = sin for odd m and cos for even m.
    """
    if m < 1:
        raise ValueError(f"derivative order must be >= 1, got {m}")
    s = spec.sign.factor
    f2, f3 = spec.k + 1, spec.k + 2
    sgn = -1.0 if ((m + 1) // 2) % 2 else 1.0
    trig = sin if m % 2 else cos
    inner = (
        trig(TWO_PI * x)
        + s * float(f2) ** m * trig(TWO_PI * f2 * x)
        + s * float(f3) ** m * trig(TWO_PI * f3 * x)
    )
    return 2.0 * sgn * TWO_PI**m * inner


def sup_norm_bound(m: int, k: int = 5) -> DerivSupBound:
    """Sup-norm bound for G^(m): 9 for m = 0, else 2^(m+1) pi^m (1 + (k+1)^m + (k+2)^m).

    The m >= 1 case is the triangle inequality applied to the closed form of
    the derivative; it is independent of the sign variant.
    """
    if m < 0:
        raise ValueError(f"derivative order must be >= 0, got {m}")
    if m == 0:
        return DerivSupBound(0, 9.0)
    value = 2.0 ** (m + 1) * pi**m * (1.0 + float(k + 1) ** m + float(k + 2) ** m)
    return DerivSupBound(m, value)


def second_deriv_L2(spec: TrigSquare) -> float:
    """L^2 norm of G'' over one period: 8 pi^2 sqrt((1 + (k+1)^4 + (k+2)^4)/2).

    Each cosine in the closed form of G'' contributes half the square of its
    amplitude to the mean square.  For k = 5 the radicand is 3698/2 = 43^2, so
    the norm is exactly 8 pi^2 * 43.
    """
    if spec.k != 5:
        raise ValueError("second_deriv_L2 is tabulated for k = 5 only")
    return 8.0 * pi**2 * 43.0


def _ceil_decimals(x: float, decimals: int = 3) -> float:
    scale = 10.0**decimals
    return math.ceil(x * scale) / scale


@lru_cache(maxsize=None)
def locate_maxima(spec: TrigSquare, h: float, bump: float) -> LocalMaxTable:
    """Certified table of the local maxima of G over the half period [0, 1/2].

    G is sampled at step h.  A sample exceeding both neighbours (with the grid
    mirrored at 0 and 1/2, where G is even) brackets a true local maximum; a
    maximum at xi within an h-neighbourhood of the winning sample satisfies
    G(xi) <= sample + M2*(h/2)^2/2 because G'(xi) = 0, so ``bump`` must cover
    that quadratic slack.  Interior bounds are rounded up to 3 decimals; at
    the symmetry points 0 and 1/2 the derivative vanishes identically and the
    sampled value is the exact local maximum value, so no slack is added.
    Every bound is clamped at the global maximum 9.
    """
    if h <= 0.0:
        raise ValueError(f"step must be positive, got {h}")
    slack = 0.5 * sup_norm_bound(2, spec.k).value * (h / 2.0) ** 2
    if bump < slack:
        raise ValueError(
            f"bump {bump:g} does not cover the curvature slack {slack:.6g} for step {h:g}"
        )
    n = round(0.5 / h)
    if n < 2 or abs(n * h - 0.5) > 1e-9:
        raise ValueError(f"step {h:g} must evenly divide the half period")
    samples = [eval_G(spec, i * h) for i in range(n + 1)]
    entries = []
    for i in range(n + 1):
        left = samples[i - 1] if i > 0 else samples[1]
        right = samples[i + 1] if i < n else samples[n - 1]
        v = samples[i]
        if not (v > left and v > right):
            continue
        if i == 0 or i == n:
            entries.append(LocalMaxEntry(i * h, min(v, 9.0), 1))
        else:
            bound = min(_ceil_decimals(max(left, v, right) + bump), 9.0)
            entries.append(LocalMaxEntry(i * h, bound, 2))
    table = LocalMaxTable(spec, h, bump, tuple(entries))
    if spec.k == 5 and table.total_multiplicity != 7:
        raise ValueError(
            f"expected 7 local maxima (with multiplicity) for k = 5, found "
            f"{table.total_multiplicity}; the tabulation step is unreliable"
        )
    return table


def default_max_table(spec: TrigSquare) -> LocalMaxTable:
    """The standard table at step 1/1000 with matching bump."""
    return locate_maxima(spec, 0.001, 0.001)


def variation_bound_power(spec: TrigSquare, t: float, table: LocalMaxTable) -> float:
    """Upper bound for the total variation of G^t over one period.

    G^t rises from a minimum to each local maximum and falls again, so its
    variation is at most twice the sum of the local maximum values of G^t,
    counted with multiplicity; each of those is bounded by value_upper^t.
    """
    if table.spec != spec:
        raise ValueError("local-maximum table was built for a different square")
    if t < 0.0:
        raise ValueError(f"power must be nonnegative, got {t}")
    return 2.0 * fsum(e.multiplicity * e.value_upper**t for e in table.entries)
