"""Ground states and KMS states of T(N^x |x N) under ``sigma_t(V_a) = a^{it} V_a``.

KMS_beta states (``beta > 1``) are indexed by probability measures ``mu`` on
the circle::

    psi(V_a S^m S^{*n} V_b^*) = delta_{a,b} a^{-beta} / zeta(beta)
                                * sum_c c^{-beta} int z^{c(m-n)} dmu

Measures are finite mixtures of Lebesgue measure and point masses at
rational angles (``turns``, in units of a full turn), so moments of atoms
are exact roots of unity.  Every evaluation returns ``(value, error_bound)``.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Dict, FrozenSet, Iterable, Optional, Tuple, Union

import numpy as np

from . import series
from .affine import is_smooth, _is_prime
from .monomials import AlgebraElement, Monomial
from .series import BetaTooCloseToOne  # noqa: F401  (re-exported)

Estimate = Tuple[complex, float]


class NotSmoothError(ValueError):
    """A monomial leg has a prime factor outside the allowed finite prime set."""


def unit_root(turns: Fraction) -> complex:
    """``exp(2 pi i turns)``, exact at multiples of a quarter turn."""
    t = turns - math.floor(turns)
    if t == 0:
        return 1 + 0j
    if t == Fraction(1, 2):
        return -1 + 0j
    if t == Fraction(1, 4):
        return 1j
    if t == Fraction(3, 4):
        return -1j
    return cmath.exp(2j * math.pi * float(t))


@dataclass(frozen=True)
class Measure:
    """Probability measure on the unit circle.

    ``kind`` is ``"atoms"`` (point masses at ``exp(2 pi i turns)``),
    ``"lebesgue"`` (normalised arc length) or ``"mixture"`` of other measures.
    Weights are rationals summing to one.
    """

    kind: str
    atoms: Tuple[Tuple[Fraction, Fraction], ...] = ()
    parts: Tuple[Tuple["Measure", Fraction], ...] = ()
    name: Optional[str] = field(default=None, compare=False)

    def __post_init__(self):
        if self.kind == "atoms":
            if not self.atoms:
                raise ValueError("an atomic measure needs at least one atom")
            atoms = tuple((Fraction(t), Fraction(w)) for t, w in self.atoms)
            for t, w in atoms:
                if not 0 <= t < 1:
                    raise ValueError(f"atom position {t} must lie in [0, 1) turns")
                if w <= 0:
                    raise ValueError(f"atom weight {w} must be positive")
            if sum(w for _, w in atoms) != 1:
                raise ValueError("atom weights must sum to 1")
            object.__setattr__(self, "atoms", atoms)
        elif self.kind == "mixture":
            if not self.parts:
                raise ValueError("a mixture needs at least one part")
            parts = tuple((m, Fraction(w)) for m, w in self.parts)
            if any(w <= 0 for _, w in parts):
                raise ValueError("mixture weights must be positive")
            if sum(w for _, w in parts) != 1:
                raise ValueError("mixture weights must sum to 1")
            object.__setattr__(self, "parts", parts)
        elif self.kind != "lebesgue":
            raise ValueError(f"unknown measure kind {self.kind!r}")

    @classmethod
    def lebesgue(cls) -> "Measure":
        return cls("lebesgue", name="lebesgue")

    @classmethod
    def point(cls, turns) -> "Measure":
        return cls("atoms", ((Fraction(turns), Fraction(1)),))

    @classmethod
    def from_atoms(cls, atoms: Iterable[Tuple[object, object]], name: Optional[str] = None) -> "Measure":
        return cls("atoms", tuple(atoms), name=name)

    @classmethod
    def mixture(cls, parts: Iterable[Tuple["Measure", object]], name: Optional[str] = None) -> "Measure":
        return cls("mixture", parts=tuple(parts), name=name)

    @classmethod
    def roots_of_unity(cls, q: int) -> "Measure":
        return cls.from_atoms([(Fraction(k, q), Fraction(1, q)) for k in range(q)], name=f"roots{q}")

    def flatten(self) -> Tuple[Fraction, Dict[Fraction, Fraction]]:
        """Return ``(lebesgue_weight, {turns: weight})``."""
        if self.kind == "lebesgue":
            return Fraction(1), {}
        if self.kind == "atoms":
            out: Dict[Fraction, Fraction] = {}
            for t, w in self.atoms:
                out[t] = out.get(t, Fraction(0)) + w
            return Fraction(0), out
        leb, atoms = Fraction(0), {}
        for part, w in self.parts:
            l2, a2 = part.flatten()
            leb += w * l2
            for t, v in a2.items():
                atoms[t] = atoms.get(t, Fraction(0)) + w * v
        return leb, atoms

    @property
    def is_atomic(self) -> bool:
        return self.flatten()[0] == 0

    @property
    def label(self) -> str:
        if self.name:
            return self.name
        leb, atoms = self.flatten()
        if leb == 1:
            return "lebesgue"
        if leb == 0 and atoms == {Fraction(0): 1}:
            return "delta1"
        if leb == 0 and atoms == {Fraction(1, 2): 1}:
            return "delta-1"
        bits = [f"{leb}*lebesgue"] if leb else []
        bits += [f"{w}*delta[{t}]" for t, w in sorted(atoms.items())]
        return "+".join(bits)


DELTA_PLUS1 = Measure("atoms", ((Fraction(0), Fraction(1)),), name="delta1")
DELTA_MINUS1 = Measure("atoms", ((Fraction(1, 2), Fraction(1)),), name="delta-1")
LEBESGUE = Measure.lebesgue()

NAMED_MEASURES = {
    "delta1": DELTA_PLUS1,
    "delta_plus1": DELTA_PLUS1,
    "delta-1": DELTA_MINUS1,
    "delta_minus1": DELTA_MINUS1,
    "lebesgue": LEBESGUE,
}


def moment(mu: Measure, k: int) -> complex:
    """``int z^k dmu``."""
    leb, atoms = mu.flatten()
    out = complex(leb) if k == 0 else 0j
    for t, w in atoms.items():
        out += float(w) * unit_root(t * k)
    return out


def _moment_array(mu: Measure, j: int) -> Callable[[np.ndarray], np.ndarray]:
    # vectorised c -> moment(mu, c*j), for the direct-series paths
    leb, atoms = mu.flatten()

    def coefficient(c):
        c = np.asarray(c)
        out = np.zeros(c.shape, dtype=complex)
        if j == 0:
            return out + 1.0
        for t, w in atoms.items():
            q = t.denominator
            step = (t.numerator * j) % q
            phase = (c % q) * step % q
            out += float(w) * np.exp(2j * np.pi * phase.astype(float) / q)
        return out

    return coefficient


@dataclass(frozen=True)
class KmsParams:
    """Inverse temperature and accuracy for KMS evaluations.

    Without a prime set ``beta`` must exceed 1; with a finite prime set any
    ``beta > 0`` is allowed.  ``max_terms`` caps the direct series and
    ``max_period`` caps the root-of-unity order handled by the periodic
    (Hurwitz) decomposition.
    """

    beta: float
    tol: float = 1e-10
    prime_set: Optional[FrozenSet[int]] = None
    max_terms: int = 10**7
    max_period: int = 4096
    min_series_beta: float = 1.001

    def __post_init__(self):
        if self.tol <= 0:
            raise ValueError("tol must be positive")
        if self.prime_set is not None:
            primes = frozenset(int(p) for p in self.prime_set)
            if not primes:
                raise ValueError("prime set must be nonempty")
            for p in primes:
                if not _is_prime(p):
                    raise ValueError(f"{p} is not prime")
            object.__setattr__(self, "prime_set", primes)
            if not self.beta > 0:
                raise ValueError("beta must be positive")
        elif not self.beta > 1:
            raise ValueError(f"KMS states need beta > 1, got {self.beta}")


class StateOracle:
    """A functional on monomials, evaluated with an error bound."""

    def __init__(self, evaluator: Callable[[Monomial], Union[complex, Estimate]], label: str = "state"):
        self._evaluator = evaluator
        self.label = label

    def evaluate(self, x: Monomial) -> Estimate:
        out = self._evaluator(x)
        if isinstance(out, tuple):
            return complex(out[0]), float(out[1])
        return complex(out), 0.0

    def __call__(self, x: Union[Monomial, AlgebraElement]) -> complex:
        if isinstance(x, AlgebraElement):
            return x.apply(lambda m: self.evaluate(m)[0])
        return self.evaluate(x)[0]

    def __repr__(self):
        return f"StateOracle({self.label!r})"


@dataclass(frozen=True)
class ToeplitzStateSpec:
    """A state on C*(S), given by its values ``phi(S^m S^{*n})``."""

    oracle: Callable[[int, int], complex]
    label: str = "phi"

    def __post_init__(self):
        if abs(complex(self.oracle(0, 0)) - 1) > 1e-12:
            raise ValueError("a state must take the value 1 at the identity")

    def __call__(self, m: int, n: int) -> complex:
        return complex(self.oracle(m, n))

    @classmethod
    def from_measure(cls, mu: Measure) -> "ToeplitzStateSpec":
        """The trace ``S^m S^{*n} -> int z^{m-n} dmu``."""
        return cls(lambda m, n: moment(mu, m - n), label=f"tau[{mu.label}]")

    @classmethod
    def vacuum(cls) -> "ToeplitzStateSpec":
        """The vector state at the first basis vector of l^2(N)."""
        return cls(lambda m, n: 1.0 if m == 0 and n == 0 else 0.0, label="vacuum")


# --- Dirichlet sums -------------------------------------------------------


@lru_cache(maxsize=4096)
def _periodic_ratio(beta: float, r: int, q: int, tol: float) -> Estimate:
    """``sum_c c^{-beta} e(c r/q) / zeta(beta)`` for ``gcd(r, q) = 1``.

    Splits ``c`` by residue mod ``q``:
    ``sum_rho e(rho r/q) q^{-beta} zeta(beta, rho/q)``.
    """
    if q == 1:
        return 1.0 + 0j, 0.0
    if q == 2:
        return complex(2.0 ** (1 - beta) - 1), 4 * series._EPS
    z, ez = series.zeta(beta, tol / 4)
    num = 0j
    err = 0.0
    scale = q ** (-beta)
    for rho in range(1, q + 1):
        h, eh = series.hurwitz_zeta(beta, rho / q, tol / (4 * q))
        num += unit_root(Fraction(rho * r, q)) * h
        err += eh
    num *= scale
    err *= scale
    value = num / z
    bound = (err + abs(value) * ez) / (z - ez) + 4 * q * series._EPS * abs(value)
    return value, bound


def _zeta_ratio_estimate(params: KmsParams, j: int, mu: Measure) -> Estimate:
    """``sum_c c^{-beta} moment(mu, c j) / zeta(beta)`` over all of N^x."""
    leb, atoms = mu.flatten()
    beta, tol = params.beta, params.tol
    value = complex(leb) if j == 0 else 0j
    err = 0.0
    fallback: Dict[Fraction, Fraction] = {}
    for t, w in atoms.items():
        theta = (t * j) % 1
        if theta.denominator > params.max_period:
            fallback[t] = w
            continue
        v, e = _periodic_ratio(beta, theta.numerator, theta.denominator, tol)
        value += float(w) * v
        err += float(w) * e
    if fallback:
        wsum = sum(fallback.values())
        part = Measure.from_atoms([(t, w / wsum) for t, w in fallback.items()])
        s, es = series.direct_series(
            beta, _moment_array(part, j), tol / 2, params.max_terms, params.min_series_beta
        )
        z, ez = series.zeta(beta, tol / 4)
        r = s / z
        value += float(wsum) * r
        err += float(wsum) * (es + abs(r) * ez) / (z - ez)
    return value, err


def dirichlet_sum_estimate(params: KmsParams, j: int, mu: Measure, method: str = "auto") -> Estimate:
    """``sum_c c^{-beta} moment(mu, c j)`` with an error bound.

    ``method="auto"`` uses closed forms and the periodic decomposition;
    ``method="series"`` forces the direct partial sum with adaptive cutoff.
    Over a finite prime set the sum runs over E-smooth ``c``.
    """
    beta, tol = params.beta, params.tol
    if params.prime_set is not None:
        return _smooth_dirichlet(params, j, mu)
    if method == "series":
        if j == 0:
            coefficient = lambda c: np.ones(np.shape(c), dtype=complex)  # noqa: E731
        else:
            coefficient = _moment_array(mu, j)
        return series.direct_series(beta, coefficient, tol, params.max_terms, params.min_series_beta)
    if method != "auto":
        raise ValueError(f"unknown method {method!r}")
    z, ez = series.zeta(beta, tol / 2)
    ratio, er = _zeta_ratio_estimate(params, j, mu)
    return ratio * z, er * z + abs(ratio) * ez


def dirichlet_sum(params: KmsParams, j: int, mu: Measure, method: str = "auto") -> complex:
    return dirichlet_sum_estimate(params, j, mu, method)[0]


def _smooth_zeta(primes: FrozenSet[int], beta: float) -> float:
    return series.euler_product(primes, beta)


def _smooth_dirichlet(params: KmsParams, j: int, mu: Measure) -> Estimate:
    primes = params.prime_set
    beta = params.beta
    Z = _smooth_zeta(primes, beta)
    leb, atoms = mu.flatten()
    value = complex(leb) * Z if j == 0 else 0j
    err = 0.0
    rest: Dict[Fraction, Fraction] = {}
    for t, w in atoms.items():
        theta = (t * j) % 1
        if theta == 0:
            value += float(w) * Z
        elif theta == Fraction(1, 2):
            # (-1)^c: subtract twice the odd part, i.e. the sum over E minus {2}
            odd = _smooth_zeta(primes - {2}, beta) if primes - {2} else 1.0
            value += float(w) * (Z - 2 * odd if 2 in primes else -Z)
        else:
            rest[t] = w
        err += 8 * series._EPS * Z
    if rest:
        wsum = sum(rest.values())
        part = Measure.from_atoms([(t, w / wsum) for t, w in rest.items()])
        s, es = series.smooth_series(sorted(primes), beta, _moment_array(part, j), params.tol / 2)
        value += float(wsum) * s
        err += float(wsum) * es
    return value, err


# --- states ---------------------------------------------------------------


def kms_state(params: KmsParams, mu: Measure) -> StateOracle:
    """The KMS_beta state attached to ``mu``."""
    if params.prime_set is not None:
        return finite_prime_kms_state(params, mu)
    beta = params.beta

    def evaluate(x: Monomial) -> Estimate:
        if x.a != x.b:
            return 0j, 0.0
        weight = float(x.a) ** (-beta)
        ratio, err = _zeta_ratio_estimate(params, x.m - x.n, mu)
        return weight * ratio, weight * err + 4 * series._EPS * abs(ratio)

    return StateOracle(evaluate, label=f"kms[beta={beta:g},{mu.label}]")


def finite_prime_kms_state(params: KmsParams, mu: Measure) -> StateOracle:
    """KMS_beta state of T(N_E^x |x N_E), normalised by the Euler product."""
    if params.prime_set is None:
        raise ValueError("finite_prime_kms_state needs a prime set")
    primes = params.prime_set
    beta = params.beta
    Z = _smooth_zeta(primes, beta)

    def evaluate(x: Monomial) -> Estimate:
        for leg in (x.a, x.b):
            if not is_smooth(leg, primes):
                raise NotSmoothError(f"{leg} has a prime factor outside {sorted(primes)}")
        if x.a != x.b:
            return 0j, 0.0
        weight = float(x.a) ** (-beta)
        j = x.m - x.n
        if j == 0:
            return complex(weight), 0.0
        s, e = _smooth_dirichlet(params, j, mu)
        return weight * s / Z, weight * e / Z

    return StateOracle(evaluate, label=f"kms[beta={beta:g},{mu.label},E={sorted(primes)}]")


def ground_state(spec: ToeplitzStateSpec) -> StateOracle:
    """The ground state ``omega_phi``: ``phi(S^m S^{*n})`` on the ``a = b = 1`` sector."""

    def evaluate(x: Monomial) -> Estimate:
        if x.a == 1 and x.b == 1:
            return spec(x.m, x.n), 0.0
        return 0j, 0.0

    return StateOracle(evaluate, label=f"ground[{spec.label}]")


KMS1_LABELS = ("lebesgue", "delta_plus1", "delta_minus1")


def kms1_limit(mu_label: str, x: Monomial) -> complex:
    """Limit of ``psi_{mu,beta}(x)`` as ``beta -> 1+`` for the three tabulated measures."""
    key = {"delta1": "delta_plus1", "delta-1": "delta_minus1"}.get(mu_label, mu_label)
    if key not in KMS1_LABELS:
        raise ValueError(f"no closed-form limit for {mu_label!r}")
    if x.a != x.b:
        return 0j
    if key == "lebesgue":
        return complex(1 / x.a) if x.m == x.n else 0j
    if key == "delta_plus1":
        return complex(1 / x.a)
    return complex(1 / x.a) if (x.m - x.n) % 2 == 0 else 0j


def broken_kms_state(params: KmsParams, mu: Measure) -> StateOracle:
    """Negative control: a KMS formula with the ``a^{-beta}`` factor dropped."""
    good = kms_state(params, mu)

    def evaluate(x: Monomial) -> Estimate:
        v, e = good.evaluate(x)
        w = float(x.a) ** params.beta
        return v * w, e * w

    return StateOracle(evaluate, label=f"broken[{good.label}]")
