"""Tail-bounded evaluation of Dirichlet series.

Every routine returns a pair ``(value, error_bound)``; the bound is rigorous
up to floating-point rounding, which is folded in as a small relative term.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Sequence, Tuple

import numpy as np

from .affine import enumerate_smooth

Estimate = Tuple[float, float]

# B_2, B_4, ..., B_20
_BERNOULLI_EVEN = [
    Fraction(1, 6), Fraction(-1, 30), Fraction(1, 42), Fraction(-1, 30), Fraction(5, 66),
    Fraction(-691, 2730), Fraction(7, 6), Fraction(-3617, 510), Fraction(43867, 798),
    Fraction(-174611, 330),
]
_EM_ORDER = len(_BERNOULLI_EVEN)
_EPS = 2.0 ** -52
# 2 * zeta(20) / (2 pi)^20 bounds the periodic Bernoulli function over (20)!
_EM_REMAINDER_CONST = 2 * 1.0000009539620339 / (2 * math.pi) ** 20


class BetaTooCloseToOne(ValueError):
    """The direct series would need more terms than the configured limit."""


def _rising(s: float, k: int) -> float:
    out = 1.0
    for i in range(k):
        out *= s + i
    return out


@lru_cache(maxsize=65536)
def hurwitz_zeta(s: float, alpha: float, tol: float = 1e-14) -> Estimate:
    """``sum_{k>=0} (k + alpha)^{-s}`` for ``s > 1`` and ``alpha > 0``.

    Euler-Maclaurin summation: ``N`` explicit terms, the integral tail, and
    Bernoulli corrections through ``B_20``.  The remainder is bounded by
    ``2 zeta(20) / (2 pi)^20 * |f^(19)(N)|``.
    """
    if not s > 1:
        raise ValueError(f"Hurwitz zeta diverges for s={s} <= 1")
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    N = 16
    while True:
        x = N + alpha
        remainder = _EM_REMAINDER_CONST * _rising(s, 2 * _EM_ORDER - 1) * x ** (-s - 2 * _EM_ORDER + 1)
        if remainder <= tol / 4 or N > 1 << 20:
            break
        N *= 2
    head = np.arange(N, dtype=float) + alpha
    terms = head ** (-s)
    partial = math.fsum(terms)
    tail = x ** (1 - s) / (s - 1) + 0.5 * x ** (-s)
    for j, B in enumerate(_BERNOULLI_EVEN, start=1):
        k = 2 * j - 1
        # f^(k)(x) = (-1)^k (s)_k x^{-s-k}; k odd so the sign is negative
        deriv = -_rising(s, k) * x ** (-s - k)
        tail -= float(B) / math.factorial(2 * j) * deriv
    value = partial + tail
    rounding = 8 * _EPS * (partial + abs(tail)) + N * _EPS * terms.max()
    return value, remainder + rounding


def zeta(s: float, tol: float = 1e-14) -> Estimate:
    """Riemann zeta for real ``s > 1``."""
    return hurwitz_zeta(s, 1.0, tol)


def zeta_tail_bound(cutoff: int, s: float) -> float:
    """``sum_{c > C} c^{-s} <= C^{1-s} / (s - 1)``."""
    return cutoff ** (1.0 - s) / (s - 1.0)


def required_cutoff(s: float, tol: float) -> int:
    """Smallest ``C`` with ``C^{1-s}/(s-1) <= tol``."""
    return max(1, math.ceil((tol * (s - 1.0)) ** (1.0 / (1.0 - s))))


def direct_series(
    s: float,
    coefficient: Callable[[np.ndarray], np.ndarray],
    tol: float,
    max_terms: int = 10**7,
    min_s: float = 1.001,
    chunk: int = 1 << 20,
) -> Estimate:
    """``sum_c c^{-s} coefficient(c)`` for coefficients of modulus at most 1.

    The cutoff is the first ``C`` whose crude tail bound is below ``tol``.
    """
    if s < min_s:
        raise BetaTooCloseToOne(f"direct series refused for beta={s} < {min_s}")
    C = required_cutoff(s, tol)
    if C > max_terms:
        raise BetaTooCloseToOne(
            f"beta={s} needs {C:.3g} terms for tol={tol:g}, above the limit {max_terms}"
        )
    total = 0j
    abs_total = 0.0
    for start in range(1, C + 1, chunk):
        c = np.arange(start, min(C, start + chunk - 1) + 1, dtype=np.int64)
        w = c.astype(float) ** (-s)
        total += complex(np.sum(w * coefficient(c)))
        abs_total += float(w.sum())
    return total, zeta_tail_bound(C, s) + 4 * C * _EPS * abs_total


def euler_product(primes: Iterable[int], s: float) -> float:
    """``sum_{c in N_E} c^{-s} = prod_p (1 - p^{-s})^{-1}`` for finite ``E``."""
    out = 1.0
    for p in set(primes):
        out /= 1.0 - p ** (-s)
    return out


def dyadic_smooth_tail(primes: Sequence[int], s: float, level: int) -> float:
    """Bound ``sum_{c > 2^level, c E-smooth} c^{-s}`` by counting exponents.

    An E-smooth ``c <= 2^{j+1}`` has ``p``-exponent at most ``(j+1)/log2 p``,
    so each dyadic block holds at most ``prod_p (floor((j+1)/log2 p) + 1)``
    such integers.
    """
    logs = [math.log2(p) for p in primes]
    k = len(primes)

    def count(j):
        out = 1
        for lg in logs:
            out *= math.floor((j + 1) / lg + 1e-12) + 1
        return out

    total = 0.0
    j = level
    decay = 2.0 ** (-s)
    while True:
        term = count(j) * 2.0 ** (-j * s)
        total += term
        # count(j') <= (j'+2)^k; close with a geometric series once the
        # polynomial growth is beaten by half of the exponential decay
        ratio = ((j + 3) / (j + 2)) ** k * decay
        if ratio <= decay ** 0.5:
            bound_next = (j + 3) ** k * 2.0 ** (-(j + 1) * s)
            total += bound_next / (1 - ratio)
            return total
        j += 1


def smooth_zeta_enumerated(primes: Sequence[int], s: float, tol: float = 1e-12) -> Estimate:
    """``sum_{c in N_E} c^{-s}`` by enumeration plus the dyadic tail bound.

    Independent of the Euler product; converges for every ``s > 0``.
    """
    if s <= 0:
        raise ValueError("s must be positive")
    primes = sorted(set(primes))
    level = 4
    while dyadic_smooth_tail(primes, s, level) > tol / 2:
        level += 4
    cs = enumerate_smooth(primes, 2**level)
    value = math.fsum(float(c) ** (-s) for c in cs)
    # each power is within an ulp and fsum rounds once
    return value, dyadic_smooth_tail(primes, s, level) + 4 * _EPS * value


def smooth_series(
    primes: Sequence[int],
    s: float,
    coefficient: Callable[[np.ndarray], np.ndarray],
    tol: float,
) -> Estimate:
    """``sum_{c in N_E} c^{-s} coefficient(c)`` with ``|coefficient| <= 1``.

    The tail is bounded by the exact Euler product minus the enumerated
    partial sum of ``c^{-s}``.
    """
    primes = sorted(set(primes))
    Z = euler_product(primes, s)
    level = 4
    while True:
        cs = enumerate_smooth(primes, 2**level)
        w = np.array([float(c) ** (-s) for c in cs])
        tail = Z - math.fsum(w)
        rounding = 8 * len(cs) * _EPS * Z
        if tail + rounding <= tol or level > 4096:
            break
        level += 8
    coeffs = coefficient(np.array(cs, dtype=object))
    value = complex(np.sum(w * np.asarray(coeffs, dtype=complex)))
    return value, max(tail, 0.0) + rounding
