"""Exact k-th moments of the squared-singular-value distribution of a
product of m independent n x n Ginibre matrices.

Three independent formulations of the same quantity G(m, n, k) are
implemented and cross-checked for exact rational equality:

* :func:`moment_gamma_sum` -- the factorial-ratio sum over i = 0 .. n-1
  with the sign carried by a literal product of (possibly negative)
  integer factors;
* :func:`moment_falling_sum` -- the simplified alternating sum over
  j = 0 .. k-1 in terms of falling factorials (n+j)(n+j-1)...(n+j-k+1);
* :func:`moment_stirling_beta` -- the Stirling-number form built from the
  coefficients of P(x) = prod (1 - i/n + x)^(m+1).

All three agree for 1 <= k <= n. For k > n only the falling-factorial sum
is offered (it stays valid through the zero-factor convention); the other
two refuse, since their derivations assume k <= n.

The matrix-entry convention matching these values is mean 0, variance 1/n
per entry, complex Gaussian. For the real ensemble finite-n moments differ
(e.g. the second moment gains 1/n at m = 1) although the n -> infinity
limits coincide; see the montecarlo module.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import prod

from .beta_poly import compute_beta
from .combinatorics import binomial, factorial, falling_factorial, fuss_catalan, stirling2

__all__ = [
    "MomentQuery",
    "MomentValue",
    "CrossCheckReport",
    "moment_gamma_sum",
    "moment_falling_sum",
    "moment_stirling_beta",
    "moment_cross_check",
    "moment_limit_gap",
]


@dataclass(frozen=True)
class MomentQuery:
    """A (number of factors, matrix size, moment order) triple, all >= 1."""

    m: int
    n: int
    k: int

    def __post_init__(self) -> None:
        for name, value in (("m", self.m), ("n", self.n), ("k", self.k)):
            if not isinstance(value, int):
                raise TypeError(f"{name} must be an int, got {type(value).__name__}")
            if value < 1:
                raise ValueError(f"{name} must be >= 1, got {value}")


@dataclass(frozen=True)
class MomentValue:
    """G(m, n, k) together with the scaled quantity n^(mk+1) G(m, n, k)."""

    value: Fraction
    scaled: Fraction


def _require_k_le_n(q: MomentQuery, what: str) -> None:
    if q.k > q.n:
        raise ValueError(f"{what} requires k <= n, got k = {q.k}, n = {q.n}")


def _as_moment_value(scaled: Fraction, q: MomentQuery) -> MomentValue:
    # Divide by n^(mk+1) exactly once, at the end.
    return MomentValue(value=scaled / Fraction(q.n) ** (q.m * q.k + 1), scaled=scaled)


def moment_gamma_sum(q: MomentQuery) -> MomentValue:
    """Factorial-ratio form of n^(mk+1) G(m, n, k).

    Evaluates sum_{i=0}^{n-1} (-1)^(1+i) prod_{j=0}^{n-1} (j-k-i)
    / (i! (n-1-i)! k) * ((k+i)!/i!)^m term by term. The inner product is
    taken literally over integers, so its sign comes out of the arithmetic
    rather than a separate parity argument; terms with k + i <= n - 1
    contain a zero factor and vanish, which restricts the sum to
    i >= n - k automatically.
    """
    _require_k_le_n(q, "moment_gamma_sum")
    m, n, k = q.m, q.n, q.k
    total = Fraction(0)
    for i in range(n):
        signed_product = prod(j - k - i for j in range(n))
        if signed_product == 0:
            continue
        numerator = (-1) ** (1 + i) * signed_product * falling_factorial(k + i, k) ** m
        total += Fraction(numerator, factorial(i) * factorial(n - 1 - i) * k)
    return _as_moment_value(total, q)


def _gamma_sum_restricted(q: MomentQuery) -> MomentValue:
    """Same quantity with the sum explicitly restricted to i = n-k .. n-1.

    Signs are (-1)^(n+1+i) here; kept as an independent code path so the
    sign bookkeeping of :func:`moment_gamma_sum` can be cross-validated.
    """
    _require_k_le_n(q, "_gamma_sum_restricted")
    m, n, k = q.m, q.n, q.k
    total = sum(
        (-1) ** (n + 1 + i)
        * falling_factorial(k + i, k) ** (m + 1)
        * binomial(k - 1, k + i - n)
        for i in range(n - k, n)
    )
    return _as_moment_value(Fraction(total, factorial(k)), q)


def moment_falling_sum(q: MomentQuery) -> MomentValue:
    """Simplified form: (1/k!) sum_j (-1)^(k+1-j) ((n+j)...(n+j-k+1))^(m+1) C(k-1, j).

    Total for every valid query: when k > n + j the falling factorial hits a
    zero factor and the term drops out, so no domain restriction is needed.
    """
    m, n, k = q.m, q.n, q.k
    total = sum(
        (-1) ** (k + 1 - j) * falling_factorial(n + j, k) ** (m + 1) * binomial(k - 1, j)
        for j in range(k)
    )
    return _as_moment_value(Fraction(total, factorial(k)), q)


def moment_stirling_beta(q: MomentQuery) -> MomentValue:
    """Stirling-number form: (n^(k(m+1))/k) sum_r n^(-r) beta_r {r brace k-1}.

    With the integer coefficients q_r = beta_r n^(k(m+1)-r) of the
    denominator-cleared polynomial, the scaled moment collapses to
    (1/k) sum_r q_r {r brace k-1}; the sum effectively starts at r = k-1
    because {r brace k-1} = 0 below that.
    """
    _require_k_le_n(q, "moment_stirling_beta")
    m, n, k = q.m, q.n, q.k
    bv = compute_beta(m, n, k)
    degree = bv.degree
    total = 0
    for r in range(k - 1, degree + 1):
        q_r = bv.coeffs[r] * n ** (degree - r)  # integer-valued by construction
        total += int(q_r) * stirling2(r, k - 1)
    return _as_moment_value(Fraction(total, k), q)


@dataclass(frozen=True)
class CrossCheckReport:
    query: MomentQuery
    gamma_sum: MomentValue
    falling_sum: MomentValue
    stirling_beta: MomentValue
    agree: bool


def moment_cross_check(q: MomentQuery) -> CrossCheckReport:
    """Evaluate all three formulations and compare as canonical rationals."""
    _require_k_le_n(q, "moment_cross_check")
    gamma = moment_gamma_sum(q)
    falling = moment_falling_sum(q)
    stirling = moment_stirling_beta(q)
    agree = gamma.value == falling.value == stirling.value
    return CrossCheckReport(
        query=q,
        gamma_sum=gamma,
        falling_sum=falling,
        stirling_beta=stirling,
        agree=agree,
    )


def moment_limit_gap(m: int, k: int, n: int) -> Fraction:
    """Exact G(m, n, k) minus its n -> infinity limit, the Fuss-Catalan number."""
    q = MomentQuery(m=m, n=n, k=k)
    _require_k_le_n(q, "moment_limit_gap")
    return moment_falling_sum(q).value - fuss_catalan(m, k)
