"""Spanning monomials of T(N^x |x N) and of its three boundary quotients.

A :class:`Monomial` ``(a, m, n, b)`` stands for ``V_a S^m S^{*n} V_b^*``.  The
product of two such words is again a single word (never zero), so the
monoid structure is computed exactly on integer tuples.  The quotient
presentations are:

* ``AddMonomial (a, k, b)``  -- ``V_a S^((k)) V_b^*`` once ``S`` is unitary,
* ``MultMonomial (r, s, g)`` -- ``W_r W_s^* U_g`` once every ``V_a`` is unitary,
* ``ClMonomial (t, g)``      -- ``W~_t U~_g`` when both hold; a group element.

Complex linear combinations live in :class:`AlgebraElement`.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Callable, Dict, Iterable, Mapping, Union


def _pos_int(name, v):
    if isinstance(v, bool) or int(v) != v or v < 1:
        raise ValueError(f"{name} must be a positive integer, got {v!r}")
    return int(v)


def _nat(name, v):
    if isinstance(v, bool) or int(v) != v or v < 0:
        raise ValueError(f"{name} must be a nonnegative integer, got {v!r}")
    return int(v)


@dataclass(frozen=True, order=True)
class Monomial:
    a: int
    m: int
    n: int
    b: int

    def __post_init__(self):
        object.__setattr__(self, "a", _pos_int("a", self.a))
        object.__setattr__(self, "m", _nat("m", self.m))
        object.__setattr__(self, "n", _nat("n", self.n))
        object.__setattr__(self, "b", _pos_int("b", self.b))

    def __mul__(self, other):
        if isinstance(other, Monomial):
            return full_mul(self, other)
        return NotImplemented

    @property
    def star(self) -> "Monomial":
        return adjoint(self)

    def __str__(self):
        return f"V_{self.a} S^{self.m} S*^{self.n} V_{self.b}*"


@dataclass(frozen=True, order=True)
class AddMonomial:
    a: int
    k: int
    b: int

    def __post_init__(self):
        object.__setattr__(self, "a", _pos_int("a", self.a))
        object.__setattr__(self, "b", _pos_int("b", self.b))
        if isinstance(self.k, bool) or int(self.k) != self.k:
            raise ValueError(f"k must be an integer, got {self.k!r}")
        object.__setattr__(self, "k", int(self.k))

    def __mul__(self, other):
        if isinstance(other, AddMonomial):
            return add_mul(self, other)
        return NotImplemented

    @property
    def star(self) -> "AddMonomial":
        return AddMonomial(self.b, -self.k, self.a)


@dataclass(frozen=True)
class MultMonomial:
    r: Fraction
    s: Fraction
    g: Fraction

    def __post_init__(self):
        r, s, g = Fraction(self.r), Fraction(self.s), Fraction(self.g)
        if r < 0 or s < 0 or g <= 0:
            raise ValueError(f"need r, s >= 0 and g > 0, got ({r}, {s}, {g})")
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "g", g)

    def __mul__(self, other):
        if isinstance(other, MultMonomial):
            return mult_mul(self, other)
        return NotImplemented

    @property
    def star(self) -> "MultMonomial":
        # (W_r W_s^* U_g)^* = U_g^* W_s W_r^* = W_{s/g} W_{r/g}^* U_{1/g}
        return MultMonomial(self.s / self.g, self.r / self.g, 1 / self.g)

    def __lt__(self, other):
        return (self.r, self.s, self.g) < (other.r, other.s, other.g)


@dataclass(frozen=True)
class ClMonomial:
    t: Fraction
    g: Fraction

    def __post_init__(self):
        t, g = Fraction(self.t), Fraction(self.g)
        if g <= 0:
            raise ValueError(f"g must be positive, got {g}")
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "g", g)

    def __mul__(self, other):
        if isinstance(other, ClMonomial):
            return cl_mul(self, other)
        return NotImplemented

    def inverse(self) -> "ClMonomial":
        return ClMonomial(-self.t / self.g, 1 / self.g)

    @property
    def star(self) -> "ClMonomial":
        return self.inverse()

    def __lt__(self, other):
        return (self.t, self.g) < (other.t, other.g)


AnyMonomial = Union[Monomial, AddMonomial, MultMonomial, ClMonomial]

ONE = Monomial(1, 0, 0, 1)
ADD_ONE = AddMonomial(1, 0, 1)
MULT_ONE = MultMonomial(0, 0, 1)
CL_ONE = ClMonomial(0, 1)

IDENTITIES = {Monomial: ONE, AddMonomial: ADD_ONE, MultMonomial: MULT_ONE, ClMonomial: CL_ONE}
PRESENTATIONS = {"full": Monomial, "add": AddMonomial, "mult": MultMonomial, "cl": ClMonomial}


def S(k: int = 1) -> Monomial:
    return Monomial(1, k, 0, 1)


def S_star(k: int = 1) -> Monomial:
    return Monomial(1, 0, k, 1)


def V(a: int) -> Monomial:
    return Monomial(a, 0, 0, 1)


def V_star(a: int) -> Monomial:
    return Monomial(1, 0, 0, a)


def full_mul(x: Monomial, y: Monomial) -> Monomial:
    """Product of two spanning monomials.

    ``V_b^* V_c = V_{c'} V_{b'}^*`` after cancelling ``gcd(b, c)``, the legs
    are pushed outward with ``S V_a = V_a S^a`` and ``S^* V_a = V_a S^{*a}``,
    and the middle ``S^{*u} S^v`` telescopes because ``S`` is an isometry.
    """
    g = gcd(x.b, y.a)
    b1, c1 = x.b // g, y.a // g
    u, v = c1 * x.n, b1 * y.m
    if v >= u:
        return Monomial(x.a * c1, c1 * x.m + v - u, b1 * y.n, b1 * y.b)
    return Monomial(x.a * c1, c1 * x.m, u - v + b1 * y.n, b1 * y.b)


def adjoint(x: Monomial) -> Monomial:
    return Monomial(x.b, x.n, x.m, x.a)


def reduce_add(x: Monomial) -> AddMonomial:
    return AddMonomial(x.a, x.m - x.n, x.b)


def add_mul(x: AddMonomial, y: AddMonomial) -> AddMonomial:
    g = gcd(x.b, y.a)
    b1, c1 = x.b // g, y.a // g
    return AddMonomial(x.a * c1, c1 * x.k + b1 * y.k, b1 * y.b)


def reduce_mult(x: Monomial) -> MultMonomial:
    # V_a S^m S^{*n} V_b^* = (V_a S^m V_a^*)(V_a S^{*n} V_a^*)(V_a V_b^*)
    return MultMonomial(Fraction(x.m, x.a), Fraction(x.n, x.a), Fraction(x.b, x.a))


def mult_mul(x: MultMonomial, y: MultMonomial) -> MultMonomial:
    """Product in the multiplicative quotient.

    ``U_g`` is moved to the right through ``W_r W_s^*`` using
    ``U_g W_r U_g^* = W_{gr}``; the middle ``W_s^* W_rho`` collapses since
    Q_+ is totally ordered.
    """
    rho, sigma = x.g * y.r, x.g * y.s
    if rho >= x.s:
        return MultMonomial(x.r + rho - x.s, sigma, x.g * y.g)
    return MultMonomial(x.r, x.s - rho + sigma, x.g * y.g)


def mult_to_cl(x: MultMonomial) -> ClMonomial:
    return ClMonomial(x.r - x.s, x.g)


def reduce_cl(x: Monomial) -> ClMonomial:
    return ClMonomial(Fraction(x.m - x.n, x.a), Fraction(x.b, x.a))


def cl_mul(x: ClMonomial, y: ClMonomial) -> ClMonomial:
    return ClMonomial(x.t + x.g * y.t, x.g * y.g)


def cl_inv(x: ClMonomial) -> ClMonomial:
    return x.inverse()


def alpha_endo(a: int, x: Monomial) -> Monomial:
    """The endomorphism ``X -> V_a X V_a^*``."""
    return full_mul(full_mul(V(a), x), V_star(a))


_MULS: Dict[type, Callable] = {
    Monomial: full_mul,
    AddMonomial: add_mul,
    MultMonomial: mult_mul,
    ClMonomial: cl_mul,
}


def mono_mul(x: AnyMonomial, y: AnyMonomial) -> AnyMonomial:
    if type(x) is not type(y):
        raise MixedPresentationError(f"cannot multiply {type(x).__name__} by {type(y).__name__}")
    return _MULS[type(x)](x, y)


class MixedPresentationError(TypeError):
    """Terms from different quotient presentations were combined."""


class AlgebraElement:
    """Finite complex linear combination of monomials of one presentation.

    Coefficients whose modulus is ``<= eps`` are dropped (``eps = 0`` keeps
    every nonzero coefficient).
    """

    __slots__ = ("terms", "kind", "eps")

    def __init__(self, terms: Union[Mapping[AnyMonomial, complex], Iterable] = (), kind=None, eps: float = 0.0):
        self.eps = eps
        self.kind = kind
        self.terms: Dict[AnyMonomial, complex] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for mono, c in items:
            self._accumulate(mono, complex(c))
        self._prune()

    def _accumulate(self, mono, c):
        if self.kind is None:
            self.kind = type(mono)
        elif type(mono) is not self.kind:
            raise MixedPresentationError(
                f"mixed presentation: {type(mono).__name__} in a {self.kind.__name__} element"
            )
        self.terms[mono] = self.terms.get(mono, 0j) + c

    def _prune(self):
        self.terms = {k: v for k, v in self.terms.items() if abs(v) > self.eps}

    @classmethod
    def of(cls, mono: AnyMonomial, coeff: complex = 1.0, eps: float = 0.0) -> "AlgebraElement":
        return cls({mono: coeff}, eps=eps)

    @classmethod
    def one(cls, kind=Monomial) -> "AlgebraElement":
        return cls({IDENTITIES[kind]: 1.0}, kind=kind)

    @classmethod
    def zero(cls, kind=None) -> "AlgebraElement":
        return cls({}, kind=kind)

    def _check(self, other: "AlgebraElement"):
        if self.kind is not None and other.kind is not None and self.kind is not other.kind:
            raise MixedPresentationError(
                f"mixed presentation: {self.kind.__name__} and {other.kind.__name__}"
            )

    def _lift(self, other):
        if isinstance(other, AlgebraElement):
            return other
        if isinstance(other, (Monomial, AddMonomial, MultMonomial, ClMonomial)):
            return AlgebraElement.of(other)
        if isinstance(other, (int, float, complex)):
            kind = self.kind or Monomial
            return AlgebraElement({IDENTITIES[kind]: other}, kind=kind)
        return None

    def __add__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        self._check(other)
        out = AlgebraElement(self.terms, kind=self.kind or other.kind, eps=max(self.eps, other.eps))
        for mono, c in other.terms.items():
            out._accumulate(mono, c)
        out._prune()
        return out

    __radd__ = __add__

    def __neg__(self):
        return AlgebraElement({k: -v for k, v in self.terms.items()}, kind=self.kind, eps=self.eps)

    def __sub__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, float, complex)):
            return AlgebraElement({k: v * other for k, v in self.terms.items()}, kind=self.kind, eps=self.eps)
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return algebra_mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, float, complex)):
            return self * other
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return algebra_mul(other, self)

    def adjoint(self) -> "AlgebraElement":
        return AlgebraElement(
            {k.star: v.conjugate() for k, v in self.terms.items()}, kind=self.kind, eps=self.eps
        )

    def __eq__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms.items())

    def coefficient(self, mono: AnyMonomial) -> complex:
        return self.terms.get(mono, 0j)

    def isclose(self, other: "AlgebraElement", tol: float = 1e-12) -> bool:
        keys = set(self.terms) | set(other.terms)
        return all(abs(self.coefficient(k) - other.coefficient(k)) <= tol for k in keys)

    def map_terms(self, f: Callable[[AnyMonomial], AnyMonomial]) -> "AlgebraElement":
        """Apply a monomial-to-monomial map linearly (e.g. a quotient reduction)."""
        out = AlgebraElement(eps=self.eps)
        for mono, c in self.terms.items():
            out._accumulate(f(mono), c)
        out._prune()
        return out

    def apply(self, functional: Callable[[AnyMonomial], complex]) -> complex:
        """Evaluate a linear functional given on monomials."""
        return sum((c * functional(mono) for mono, c in self.terms.items()), 0j)

    def __repr__(self):
        if not self.terms:
            return "AlgebraElement(0)"
        body = " + ".join(f"({c:g})*{m}" for m, c in sorted(self.terms.items(), key=lambda t: repr(t[0])))
        return f"AlgebraElement({body})"


def algebra_mul(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    """Bilinear extension of the monomial product."""
    x._check(y)
    out = AlgebraElement(kind=x.kind or y.kind, eps=max(x.eps, y.eps))
    for mx, cx in x.terms.items():
        for my, cy in y.terms.items():
            out._accumulate(mono_mul(mx, my), cx * cy)
    out._prune()
    return out


def expectation_theta(x: Union[Monomial, AlgebraElement]) -> AlgebraElement:
    """Gauge expectation: keep the monomials with equal legs, drop the rest."""
    if isinstance(x, Monomial):
        return AlgebraElement.of(x) if x.a == x.b else AlgebraElement.zero(Monomial)
    if x.kind not in (None, Monomial):
        raise MixedPresentationError("the gauge expectation is defined on the full algebra")
    return AlgebraElement({m: c for m, c in x.terms.items() if m.a == m.b}, kind=Monomial, eps=x.eps)


def range_projection_complement(primes: Iterable[int]) -> AlgebraElement:
    """``prod_q (1 - V_q V_q^*)`` over the given integers."""
    out = AlgebraElement.one()
    for q in primes:
        out = out * (AlgebraElement.one() - AlgebraElement.of(Monomial(q, 0, 0, q)))
    return out
