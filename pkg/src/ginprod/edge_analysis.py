"""Soft-edge constant and the quantitative tail-bound chain.

The right endpoint of the limiting squared-singular-value support for a
product of m square Ginibre factors is u_m = (m+1)^(m+1) / m^m. The
largest squared singular value is controlled through high moments: for
z > u_m the probability P(s_1^2 >= z) is at most n G(m, n, k) / z^k for
every k >= 1, and with moment order k_n = ceil(w log n), w > 3/log(z/u_m),
the bounds sum to a convergent series. This module provides the exact
ingredients of that chain plus the asymptotic surrogates used to argue it:

* :func:`edge_constant`        -- u_m as an exact rational;
* :func:`schedule`             -- the (z, w, k_n) exponent schedule;
* :func:`markov_chain_bound`   -- the explicit bound n G / z^k;
* :func:`tail_summand`         -- one series term, exact and in log form;
* :func:`dominance_report`     -- consecutive-term ratios of the
  Stirling-form moment sum against the bound ((m+1)/2)(r+1)^2 / n;
* :func:`beta_leading_asymptotic` -- the leading coefficient beta_{k-1}/k
  against (1/k) C(k(m+1), k-1) and its closed-form Stirling approximation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .beta_poly import compute_beta
from .combinatorics import binomial, stirling2
from .moment_engine import MomentQuery, moment_falling_sum

__all__ = [
    "EdgeConstant",
    "TailSchedule",
    "DominanceReport",
    "AsymptoticCheck",
    "TailSummand",
    "edge_constant",
    "schedule",
    "dominance_report",
    "beta_leading_asymptotic",
    "tail_summand",
    "markov_chain_bound",
    "log_fraction",
]

#: Relative safety margin applied to the threshold 3/log(z/u_m) when no
#: explicit w is given; the schedule needs strict inequality and 1% keeps
#: k_n small at desk scale.
DEFAULT_W_MARGIN = 0.01


def log_fraction(x: Fraction) -> float:
    """Natural log of a positive rational.

    Computed as log(numerator) - log(denominator); Python's math.log scales
    big integers internally, so values far outside the float range are fine.
    """
    if x <= 0:
        raise ValueError(f"log requires a positive value, got {x}")
    return math.log(x.numerator) - math.log(x.denominator)


@dataclass(frozen=True)
class EdgeConstant:
    m: int
    u: Fraction


def edge_constant(m: int) -> EdgeConstant:
    """u_m = (m+1)^(m+1) / m^m; equals 4 at m = 1."""
    if not isinstance(m, int):
        raise TypeError(f"m must be an int, got {type(m).__name__}")
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    return EdgeConstant(m=m, u=Fraction((m + 1) ** (m + 1), m**m))


@dataclass(frozen=True)
class TailSchedule:
    """Exponent schedule k_n = ceil(w log n) for a fixed z > u_m."""

    m: int
    z: Fraction
    w: float
    u: Fraction

    def k_of(self, n: float) -> int:
        """Moment order at size n; n = 1 is clamped to k = 1."""
        if n < 1:
            raise ValueError(f"n must be >= 1, got {n}")
        return max(1, math.ceil(self.w * math.log(n)))


def w_threshold(m: int, z: Fraction) -> float:
    """The infimum 3 / log(z / u_m) of admissible growth rates w."""
    u = edge_constant(m).u
    if z <= u:
        raise ValueError(
            f"z = {z} must exceed the edge constant u_{m} = {u}; "
            "the moment bound is vacuous otherwise"
        )
    return 3.0 / math.log(float(Fraction(z) / u))


def schedule(m: int, z, w_override: float | None = None) -> TailSchedule:
    """Build the exponent schedule for a given m and threshold z > u_m.

    By default w = (1 + margin) * 3/log(z/u_m); an explicit ``w_override``
    must itself exceed the threshold strictly.
    """
    z = Fraction(z)
    threshold = w_threshold(m, z)
    if w_override is None:
        w = threshold * (1.0 + DEFAULT_W_MARGIN)
    else:
        w = float(w_override)
        if w <= threshold:
            raise ValueError(
                f"w = {w} does not exceed the required threshold {threshold}"
            )
    return TailSchedule(m=m, z=z, w=w, u=edge_constant(m).u)


@dataclass(frozen=True)
class DominanceReport:
    """Term-by-term behaviour of the Stirling-form moment sum.

    Exact terms t_r = n^(-r) beta_r {r brace k-1} for r = k-1 .. k(m+1),
    each consecutive ratio t_{r+1}/t_r, and the comparison against
    ((m+1)/2)(r+1)^2 / n. The ratio flags are meaningful deep in the
    k^2 << n regime; outside it the report is still exact but the bound
    may fail, which is why assertion is left to the caller.
    """

    m: int
    n: int
    k: int
    r_values: tuple[int, ...]
    terms: tuple[Fraction, ...]
    ratios: tuple[Fraction, ...]
    ratio_bounds: tuple[Fraction, ...]
    ratio_ok: tuple[bool, ...]
    all_ratios_ok: bool
    first_term_share: Fraction

    @property
    def max_ratio(self) -> Fraction:
        return max(self.ratios)

    @property
    def scaled_moment(self) -> Fraction:
        """n^(k(m+1))/k times the term sum; equals n^(mk+1) G(m, n, k)."""
        return sum(self.terms, Fraction(0)) * Fraction(self.n) ** (self.k * (self.m + 1)) / self.k


def dominance_report(m: int, n: int, k: int) -> DominanceReport:
    if k > n:
        raise ValueError(f"dominance_report requires k <= n, got k = {k}, n = {n}")
    bv = compute_beta(m, n, k)
    degree = bv.degree
    # Partition-number weights vanish above r = 0 when k = 1, so keep
    # only the orders that actually contribute to the sum.
    r_values = []
    terms = []
    n_pow = Fraction(1, n) ** (k - 1)
    for r in range(k - 1, degree + 1):
        weight = stirling2(r, k - 1)
        if weight:
            r_values.append(r)
            terms.append(bv.coeffs[r] * weight * n_pow)
        n_pow /= n
    r_values = tuple(r_values)
    ratios = tuple(terms[i + 1] / terms[i] for i in range(len(terms) - 1))
    bounds = tuple(
        Fraction((m + 1) * (r + 1) ** 2, 2 * n) for r in r_values[:-1]
    )
    ok = tuple(ratio < bound for ratio, bound in zip(ratios, bounds))
    total = sum(terms, Fraction(0))
    return DominanceReport(
        m=m,
        n=n,
        k=k,
        r_values=r_values,
        terms=tuple(terms),
        ratios=ratios,
        ratio_bounds=bounds,
        ratio_ok=ok,
        all_ratios_ok=all(ok),
        first_term_share=terms[0] / total,
    )


@dataclass(frozen=True)
class AsymptoticCheck:
    """Links of the chain beta_{k-1}/k ~ (1/k) C(k(m+1), k-1) ~ closed form.

    ``exact`` is beta_{k-1}/k evaluated at n = k^3 (safely inside the
    k^2 = o(n) regime), ``mid_form`` the binomial expression, and
    ``closed_form`` sqrt((m+1)/(2 pi m^3)) u_m^k / k^(3/2).
    """

    m: int
    k: int
    n_ref: int
    exact: Fraction
    mid_form: Fraction
    closed_form: float
    rel_err_exact_mid: float
    rel_err_mid_closed: float

    @property
    def relative_error(self) -> float:
        """End-to-end deviation |exact / closed_form - 1|."""
        return abs(float(self.exact) / self.closed_form - 1.0)


def beta_leading_asymptotic(m: int, k: int) -> AsymptoticCheck:
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    n_ref = k**3
    exact = compute_beta(m, n_ref, k).coeffs[k - 1] / k
    mid = Fraction(binomial(k * (m + 1), k - 1), k)
    u = float(edge_constant(m).u)
    closed = math.sqrt((m + 1) / (2.0 * math.pi * m**3)) * u**k / k**1.5
    return AsymptoticCheck(
        m=m,
        k=k,
        n_ref=n_ref,
        exact=exact,
        mid_form=mid,
        closed_form=closed,
        rel_err_exact_mid=abs(float(exact / mid) - 1.0),
        rel_err_mid_closed=abs(float(mid) / closed - 1.0),
    )


def markov_chain_bound(m: int, n: int, z, k: int) -> Fraction:
    """Explicit probability bound n G(m, n, k) / z^k for P(s_1^2 >= z)."""
    if k > n:
        raise ValueError(f"markov_chain_bound requires k <= n, got k = {k}, n = {n}")
    g = moment_falling_sum(MomentQuery(m=m, n=n, k=k)).value
    return n * g / Fraction(z) ** k


@dataclass(frozen=True)
class TailSummand:
    """One term of the tail series at size n, exact and in log form.

    ``log_surrogate`` is log n - (3/2) log k_n + k_n log(u_m/z), the
    asymptotic stand-in for log of the exact bound; with the default
    schedule it is at most -2 log n.
    """

    m: int
    n: int
    z: Fraction
    w: float
    k_n: int
    exact_bound: Fraction
    log_exact: float
    log_surrogate: float


def _min_admissible_n(sched: TailSchedule) -> int:
    n = 2
    while sched.k_of(n) > n:
        n += 1
    return n


def tail_summand(m: int, n: int, z, w: float | None = None) -> TailSummand:
    """Evaluate the series term n G(m, n, k_n) / z^(k_n) at one size n.

    Sizes with k_n > n are refused (the exact-moment equivalence is only
    verified for k <= n); the error names the smallest admissible n.
    """
    sched = schedule(m, z, w_override=w)
    k_n = sched.k_of(n)
    if k_n > n:
        raise ValueError(
            f"k_n = {k_n} exceeds n = {n}; smallest admissible n for this "
            f"schedule is {_min_admissible_n(sched)}"
        )
    bound = markov_chain_bound(m, n, sched.z, k_n)
    log_surrogate = (
        math.log(n)
        - 1.5 * math.log(k_n)
        - k_n * math.log(float(sched.z / sched.u))
    )
    return TailSummand(
        m=m,
        n=n,
        z=sched.z,
        w=sched.w,
        k_n=k_n,
        exact_bound=bound,
        log_exact=log_fraction(bound),
        log_surrogate=log_surrogate,
    )
