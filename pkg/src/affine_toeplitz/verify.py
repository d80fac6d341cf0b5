"""Numerical checks of equilibrium identities on exact monomials."""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from math import gcd
from typing import List, Optional, Tuple

from .affine import enumerate_smooth
from .monomials import ONE, Monomial, full_mul
from .states import StateOracle

_SMOOTH_PRIMES = (2, 3, 5)


@dataclass
class Failure:
    description: str
    lhs: complex
    rhs: complex
    residual: float

    def to_json(self) -> dict:
        return {
            "input": self.description,
            "lhs": [self.lhs.real, self.lhs.imag],
            "rhs": [self.rhs.real, self.rhs.imag],
            "residual": self.residual,
        }


@dataclass
class VerificationReport:
    kind: str
    checked: int = 0
    max_residual: float = 0.0
    failures: List[Failure] = field(default_factory=list)
    seed: Optional[int] = None

    @property
    def passed(self) -> bool:
        return not self.failures

    def record(self, description: str, lhs: complex, rhs: complex, tol: float) -> None:
        residual = abs(lhs - rhs)
        self.checked += 1
        self.max_residual = max(self.max_residual, residual)
        if residual > tol:
            self.failures.append(Failure(description, lhs, rhs, residual))

    def merge(self, other: "VerificationReport") -> "VerificationReport":
        return VerificationReport(
            self.kind,
            self.checked + other.checked,
            max(self.max_residual, other.max_residual),
            self.failures + other.failures,
            self.seed,
        )

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "checked": self.checked,
            "max_residual": self.max_residual,
            "passed": self.passed,
            "seed": self.seed,
            "failures": [f.to_json() for f in self.failures],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)


def _char_sides(phi: StateOracle, beta: float, x: Monomial):
    lhs, e1 = phi.evaluate(x)
    if x.a != x.b:
        return lhs, 0j, e1
    k = x.m - x.n
    rhs, e2 = phi.evaluate(Monomial(1, max(k, 0), max(-k, 0), 1))
    scale = x.a ** (-beta)
    return lhs, scale * rhs, e1 + scale * e2


def _kms_sides(phi: StateOracle, beta: float, x: Monomial, y: Monomial):
    lhs, e1 = phi.evaluate(full_mul(x, y))
    rhs, e2 = phi.evaluate(full_mul(y, x))
    scale = (x.a / x.b) ** (-beta)
    return lhs, scale * rhs, e1 + scale * e2


def _ground_sides(omega: StateOracle, x: Monomial):
    lhs, e1 = omega.evaluate(x)
    if x.a != x.b or x.a != 1:
        return lhs, 0j, e1
    # the identity is a tautology on (1, m, n, 1)
    return lhs, lhs, e1


def check_char(phi: StateOracle, beta: float, x: Monomial, tol: float = 1e-9) -> float:
    """``|phi(x) - delta_ab a^{-beta} phi(S^((m-n)))|``."""
    lhs, rhs, _ = _char_sides(phi, beta, x)
    return abs(lhs - rhs)


def check_kms_identity(phi: StateOracle, beta: float, x: Monomial, y: Monomial, tol: float = 1e-8) -> float:
    """``|phi(xy) - (a_x / b_x)^{-beta} phi(yx)|``."""
    lhs, rhs, _ = _kms_sides(phi, beta, x, y)
    return abs(lhs - rhs)


def check_ground(omega: StateOracle, x: Monomial, tol: float = 1e-9) -> float:
    """``|omega(x) - delta_ab delta_a1 omega(S^m S^{*n})|``."""
    lhs, rhs, _ = _ground_sides(omega, x)
    return abs(lhs - rhs)


class LemmaViolation(AssertionError):
    pass


def gcd_split(a: int, c: int, b: int, d: int) -> Tuple[int, int, int, int]:
    """Reduced factors of ``ac = bd``: ``a/(a,d) = b/(b,c)`` and ``c/(b,c) = d/(a,d)``.

    Returns ``(a', b', c', d')``.
    """
    if min(a, b, c, d) < 1:
        raise ValueError("arguments must be positive")
    if a * c != b * d:
        raise ValueError(f"precondition ac≠bd: {a}*{c} != {b}*{d}")
    g, h = gcd(a, d), gcd(b, c)
    a1, d1 = a // g, d // g
    b1, c1 = b // h, c // h
    if a1 != b1 or c1 != d1:
        raise LemmaViolation(f"lemma violation at {(a, c, b, d)}: {(a1, b1, c1, d1)}")
    return a1, b1, c1, d1


# --- random sweeps --------------------------------------------------------


class InstanceSampler:
    """Seeded monomials mixing uniform draws with divisor-rich ones.

    Half of the multiplicative entries come from integers built from 2, 3
    and 5, which produce nontrivial gcd splits far more often than uniform
    draws.  A third of the monomials get ``a = b`` so the diagonal terms of
    the identities are exercised.
    """

    def __init__(self, bound_a: int, bound_m: int, seed: int):
        if bound_a < 1 or bound_m < 0:
            raise ValueError("bounds must be positive")
        self.bound_a, self.bound_m = bound_a, bound_m
        self.rng = random.Random(seed)
        self.smooth = enumerate_smooth(_SMOOTH_PRIMES, bound_a)

    def scale(self) -> int:
        if self.rng.random() < 0.5:
            return self.rng.randint(1, self.bound_a)
        return self.rng.choice(self.smooth)

    def monomial(self) -> Monomial:
        a = self.scale()
        b = a if self.rng.random() < 1 / 3 else self.scale()
        return Monomial(a, self.rng.randint(0, self.bound_m), self.rng.randint(0, self.bound_m), b)


def _tolerance(tol: Optional[float], err: float) -> float:
    # default: 100x the combined evaluation error, with a floor for exact oracles
    return tol if tol is not None else max(100 * err, 1e-12)


def sweep(
    kind: str,
    phi: StateOracle,
    beta: float,
    bounds: Tuple[int, int] = (30, 20),
    count: int = 1000,
    seed: int = 0,
    tol: Optional[float] = None,
) -> VerificationReport:
    """Run ``count`` seeded random instances of one identity against ``phi``.

    ``kind`` is ``"char"`` or ``"ground"`` (one monomial per instance) or
    ``"kms"`` (a pair).  Deterministic for fixed ``seed``.
    """
    if kind not in ("char", "kms", "ground"):
        raise ValueError(f"unknown sweep kind {kind!r}")
    one, e = phi.evaluate(ONE)
    if abs(one - 1) > _tolerance(tol, e):
        raise ValueError(f"{phi.label} is not normalised: phi(1) = {one}")
    sampler = InstanceSampler(bounds[0], bounds[1], seed)
    report = VerificationReport(kind, seed=seed)
    for _ in range(count):
        x = sampler.monomial()
        if kind == "char":
            lhs, rhs, err = _char_sides(phi, beta, x)
            desc = str(x)
        elif kind == "ground":
            lhs, rhs, err = _ground_sides(phi, x)
            desc = str(x)
        else:
            y = sampler.monomial()
            lhs, rhs, err = _kms_sides(phi, beta, x, y)
            desc = f"{x} * {y}"
        report.record(desc, lhs, rhs, _tolerance(tol, err))
    return report
