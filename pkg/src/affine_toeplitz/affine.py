"""Exact arithmetic in the group Q_+^x |x Q and its positive cone N^x |x N.

Group elements are pairs ``(a, r)`` with ``a > 0`` multiplied by
``(a, r)(b, s) = (ab, br + s)``.  The cone ``N^x |x N`` induces the partial
order ``x <= y  iff  x^{-1} y`` lies in the cone, and every group element has
a least upper bound in the cone.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Optional, Sequence, Union

import numpy as np

RationalLike = Union[int, Fraction, str]


class BoundsTooSmall(ValueError):
    """Raised by the brute-force oracles when minimality cannot be certified."""


def _rational(value: RationalLike) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError("floats are not exact; pass an int, Fraction or string")
    return Fraction(value)


@dataclass(frozen=True)
class AffinePoint:
    """Element ``(a, r)`` of Q_+^x |x Q, with ``a`` a strictly positive rational."""

    a: Fraction
    r: Fraction

    def __init__(self, a: RationalLike, r: RationalLike = 0):
        a, r = _rational(a), _rational(r)
        if a <= 0:
            raise ValueError(f"multiplicative part must be positive, got {a}")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "r", r)

    def __mul__(self, other: "AffinePoint") -> "AffinePoint":
        return group_mul(self, other)

    def inverse(self) -> "AffinePoint":
        return group_inv(self)

    def in_cone(self) -> bool:
        return self.a.denominator == 1 and self.r.denominator == 1 and self.r >= 0

    def to_cone(self) -> "ConePoint":
        if not self.in_cone():
            raise ValueError(f"{self} is not in N^x |x N")
        return ConePoint(int(self.a), int(self.r))

    def __repr__(self) -> str:
        return f"AffinePoint({self.a}, {self.r})"


@dataclass(frozen=True)
class ConePoint:
    """Element ``(a, m)`` of the cone N^x |x N."""

    a: int
    m: int

    def __post_init__(self):
        if isinstance(self.a, bool) or isinstance(self.m, bool):
            raise TypeError("booleans are not cone coordinates")
        if int(self.a) != self.a or int(self.m) != self.m:
            raise TypeError("cone coordinates must be integers")
        object.__setattr__(self, "a", int(self.a))
        object.__setattr__(self, "m", int(self.m))
        if self.a < 1 or self.m < 0:
            raise ValueError(f"need a >= 1 and m >= 0, got ({self.a}, {self.m})")

    def __mul__(self, other: "ConePoint") -> "ConePoint":
        return ConePoint(self.a * other.a, other.a * self.m + other.m)

    def to_affine(self) -> AffinePoint:
        return AffinePoint(self.a, self.m)


IDENTITY = AffinePoint(1, 0)


def group_mul(x: AffinePoint, y: AffinePoint) -> AffinePoint:
    return AffinePoint(x.a * y.a, y.a * x.r + y.r)


def group_inv(x: AffinePoint) -> AffinePoint:
    return AffinePoint(1 / x.a, -x.r / x.a)


def leq(x: AffinePoint, y: AffinePoint) -> bool:
    """``x <= y`` in the order induced by the cone."""
    f = y.a / x.a
    if f.denominator != 1:
        return False
    gap = y.r - f * x.r
    return gap.denominator == 1 and gap >= 0


def cone_leq(x: ConePoint, y: ConePoint) -> bool:
    # integer-only version of leq restricted to the cone
    if y.a % x.a:
        return False
    return y.m - (y.a // x.a) * x.m >= 0


def lub(x: AffinePoint) -> ConePoint:
    """Least upper bound of ``x`` in the cone.

    Writes ``a = d/c`` and ``r = k/c`` over the smallest common denominator
    ``c`` and returns ``(d, max(0, k))``.
    """
    c = lcm(x.a.denominator, x.r.denominator)
    d = x.a * c
    k = x.r * c
    return ConePoint(int(d), max(0, int(k)))


def join_cone(x: ConePoint, y: ConePoint) -> ConePoint:
    """Least common upper bound of two cone elements."""
    g = gcd(x.a, y.a)
    a1, b1 = x.a // g, y.a // g
    return ConePoint(x.a * b1, max(b1 * x.m, a1 * y.m))


def _coerce_affine(p: Union[AffinePoint, ConePoint]) -> AffinePoint:
    return p.to_affine() if isinstance(p, ConePoint) else p


def brute_common_lub(
    points: Sequence[Union[AffinePoint, ConePoint]], bound_a: int, bound_m: int
) -> Optional[ConePoint]:
    """Search the box ``a <= bound_a, m <= bound_m`` for a least common upper bound.

    Returns ``None`` when no cone point in the box bounds all ``points``.
    Raises :class:`BoundsTooSmall` when upper bounds exist in the box but none
    of them lies below all the others.
    """
    if bound_a < 1 or bound_m < 0:
        raise ValueError("bounds must be positive")
    points = [_coerce_affine(p) for p in points]
    biggest = max(
        [bound_a * p.a.denominator * (abs(p.r.numerator) + 1) + bound_m * p.r.denominator
         for p in points] + [bound_a, bound_m]
    )
    dtype = np.int64 if biggest < 2**62 else object
    b = np.arange(1, bound_a + 1).astype(dtype)[:, None]
    s = np.arange(0, bound_m + 1).astype(dtype)[None, :]
    ok = np.ones((bound_a, bound_m + 1), dtype=bool)
    for p in points:
        P, Q = p.a.numerator, p.a.denominator
        U, V = p.r.numerator, p.r.denominator
        # f = b/a = bQ/P must be a positive integer
        bq = b * Q
        f_ok = (bq % P == 0)
        f = bq // P
        # s - f*U/V must be a nonnegative integer
        num = s * V - f * U
        ok &= np.broadcast_to(f_ok, ok.shape) & (num % V == 0) & (num >= 0)
    if not ok.any():
        return None
    rows, cols = np.nonzero(ok)
    # anything below every candidate is coordinatewise minimal, hence the
    # lexicographic minimum; so only that one needs testing
    i = np.lexsort((cols, rows))[0]
    d, n = int(rows[i]) + 1, int(cols[i])
    cand_a = rows.astype(np.int64) + 1
    cand_m = cols.astype(np.int64)
    divides = cand_a % d == 0
    above = cand_m - (cand_a // d) * n >= 0
    if not np.all(divides & above):
        raise BoundsTooSmall(
            f"upper bounds exist within ({bound_a}, {bound_m}) but none is least"
        )
    return ConePoint(d, n)


def brute_lub(x: AffinePoint, bound_a: int, bound_m: int) -> Optional[ConePoint]:
    """Exhaustive least-upper-bound search; independent oracle for :func:`lub`."""
    return brute_common_lub([x], bound_a, bound_m)


def brute_join(x: ConePoint, y: ConePoint, bound_a: int, bound_m: int) -> Optional[ConePoint]:
    return brute_common_lub([x, y], bound_a, bound_m)


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


def enumerate_smooth(primes: Iterable[int], cutoff: int) -> list[int]:
    """All positive integers ``<= cutoff`` whose prime factors lie in ``primes``."""
    primes = sorted(set(primes))
    if not primes:
        raise ValueError("prime set must be nonempty")
    for p in primes:
        if not _is_prime(p):
            raise ValueError(f"{p} is not prime")
    out = [1]
    for p in primes:
        grown = []
        for n in out:
            while n <= cutoff:
                grown.append(n)
                n *= p
        out = grown
    return sorted(out)


def is_smooth(n: int, primes: Iterable[int]) -> bool:
    for p in primes:
        while n % p == 0:
            n //= p
    return n == 1
