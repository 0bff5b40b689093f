"""Exact integer and rational combinatorial kernels.

All functions work on Python's arbitrary-precision ``int`` (the "natural
number" carrier; negative inputs are rejected) and return exact values.
Rational quantities elsewhere in the package are ``fractions.Fraction``,
which is always stored in lowest terms with a positive denominator, so
equality of values is equality of representations.
"""

from __future__ import annotations

from functools import lru_cache
from math import comb, factorial as _factorial, perm

__all__ = [
    "binomial",
    "factorial",
    "falling_factorial",
    "stirling2",
    "stirling2_alternating",
    "fuss_catalan",
]


def _natural(name: str, value: int) -> int:
    if not isinstance(value, int):
        raise TypeError(f"{name} must be an int, got {type(value).__name__}")
    if value < 0:
        raise ValueError(f"{name} must be non-negative, got {value}")
    return value


def binomial(n: int, k: int) -> int:
    """C(n, k); 0 when k > n."""
    return comb(_natural("n", n), _natural("k", k))


def factorial(n: int) -> int:
    """n! with 0! = 1."""
    return _factorial(_natural("n", n))


def falling_factorial(x: int, k: int) -> int:
    """x (x-1) ... (x-k+1), an empty product (= 1) for k = 0.

    For non-negative x the factors descend through zero before they could
    turn negative, so the product is 0 whenever k > x and no sign handling
    is needed here.
    """
    return perm(_natural("x", x), _natural("k", k))


@lru_cache(maxsize=None)
def _stirling2_rec(n: int, k: int) -> int:
    if n == 0 and k == 0:
        return 1
    if k == 0 or k > n:
        return 0
    return k * _stirling2_rec(n - 1, k) + _stirling2_rec(n - 1, k - 1)


def stirling2(n: int, k: int) -> int:
    """Stirling number of the second kind {n brace k}.

    Counts partitions of an n-set into k non-empty blocks, computed by the
    memoized recurrence {n brace k} = k {n-1 brace k} + {n-1 brace k-1}
    with {0 brace 0} = 1. Zero for k > n and for n > 0, k = 0.
    """
    return _stirling2_rec(_natural("n", n), _natural("k", k))


def stirling2_alternating(n: int, k: int) -> int:
    """{n brace k} via the inclusion-exclusion sum (1/k!) sum_i (-1)^(k-i) C(k,i) i^n.

    Deliberately a separate code path from :func:`stirling2`; the two are
    cross-checked against each other in the test suite. Uses 0**0 == 1.
    """
    _natural("n", n)
    _natural("k", k)
    total = sum((-1) ** (k - i) * comb(k, i) * i**n for i in range(k + 1))
    q, rem = divmod(total, _factorial(k))
    if rem:
        raise ArithmeticError(
            f"alternating Stirling sum not divisible by {k}! at (n={n}, k={k})"
        )
    return q


def fuss_catalan(m: int, k: int) -> int:
    """Fuss-Catalan number C(mk + k, k) / (mk + 1); Catalan numbers at m = 1.

    The division is always exact; a non-zero remainder signals an
    arithmetic bug and raises.
    """
    if _natural("m", m) < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    _natural("k", k)
    q, rem = divmod(comb(m * k + k, k), m * k + 1)
    if rem:
        raise ArithmeticError(f"inexact Fuss-Catalan division at (m={m}, k={k})")
    return q
