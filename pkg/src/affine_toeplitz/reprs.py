"""Truncated models of concrete representations, used as independent oracles.

Each representation acts on basis labels by partial maps.  A generator
applied to a label returns another label, :data:`ZERO` when the true image is
the zero vector, or :data:`OUT` when the image exists but falls outside the
truncation.  Words in the generators are composed label by label; a column
is *interior* for a word when no step leaves the truncation, and only there
do truncated identities hold exactly.

Generators are ``"S"``, ``"S*"``, ``("V", a)`` and ``("V*", a)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Callable, Dict, Hashable, List, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np
import scipy.sparse as sp

from . import series
from .monomials import Monomial, full_mul
from .states import Measure, StateOracle, unit_root

ZERO = "zero"
OUT = "out"
_ZERO_IDX = -1
_OUT_IDX = -2

Generator = Union[str, Tuple[str, int]]
Word = Sequence[Generator]


class GridError(ValueError):
    """A requested generator does not preserve the rational grid."""


def monomial_word(x: Monomial) -> List[Generator]:
    """``V_a S^m S^{*n} V_b^*`` as a word, leftmost factor first."""
    word: List[Generator] = []
    if x.a != 1:
        word.append(("V", x.a))
    word += ["S"] * x.m + ["S*"] * x.n
    if x.b != 1:
        word.append(("V*", x.b))
    return word


class TruncatedRep:
    """A finite window onto a representation by partial isometries."""

    def __init__(self, name: str, basis: Sequence[Hashable], action: Callable[[Generator, Hashable], object]):
        self.name = name
        self.basis = list(basis)
        self.index: Dict[Hashable, int] = {label: i for i, label in enumerate(self.basis)}
        self._action = action
        self._maps: Dict[Generator, np.ndarray] = {}
        self._power_maps: Dict[Tuple[Generator, int], np.ndarray] = {}

    def __len__(self):
        return len(self.basis)

    def apply(self, gen: Generator, label: Hashable):
        """Image of one basis label: a label, ``ZERO`` or ``OUT``."""
        out = self._action(gen, label)
        if out is ZERO or out is OUT:
            return out
        return out if out in self.index else OUT

    def generator_map(self, gen: Generator) -> np.ndarray:
        gen = _normalise(gen)
        if gen not in self._maps:
            m = np.empty(len(self.basis), dtype=np.int64)
            for i, label in enumerate(self.basis):
                out = self.apply(gen, label)
                m[i] = _ZERO_IDX if out is ZERO else _OUT_IDX if out is OUT else self.index[out]
            self._maps[gen] = m
        return self._maps[gen]

    def _power(self, gen: Generator, k: int) -> np.ndarray:
        key = (_normalise(gen), k)
        if key not in self._power_maps:
            if k == 0:
                self._power_maps[key] = np.arange(len(self.basis))
            else:
                self._power_maps[key] = compose(self._power(gen, k - 1), self.generator_map(gen))
        return self._power_maps[key]

    def word_map(self, word: Word) -> np.ndarray:
        """Index map of a word; the rightmost generator acts first."""
        out = np.arange(len(self.basis))
        # collapse runs of equal generators to cached powers
        runs: List[Tuple[Generator, int]] = []
        for g in word:
            g = _normalise(g)
            if runs and runs[-1][0] == g:
                runs[-1] = (g, runs[-1][1] + 1)
            else:
                runs.append((g, 1))
        for g, k in reversed(runs):
            out = compose(self._power(g, k), out)
        return out

    def word_image(self, word: Word) -> "WordImage":
        m = self.word_map(word)
        return WordImage(to_matrix(m), m != _OUT_IDX, m)


class WordImage(NamedTuple):
    matrix: sp.csr_matrix
    interior: np.ndarray
    index_map: np.ndarray


def _normalise(gen: Generator) -> Generator:
    if isinstance(gen, list):
        gen = tuple(gen)
    if isinstance(gen, tuple) and gen[1] == 1:
        return "1"
    return gen


def compose(outer: np.ndarray, inner: np.ndarray) -> np.ndarray:
    """Index map of ``outer o inner``; ZERO and OUT are absorbing."""
    result = inner.copy()
    ok = inner >= 0
    result[ok] = outer[inner[ok]]
    return result


def to_matrix(index_map: np.ndarray) -> sp.csr_matrix:
    """0/1 partial-permutation matrix with entry (out, in) = 1."""
    n = len(index_map)
    cols = np.nonzero(index_map >= 0)[0]
    rows = index_map[cols]
    return sp.csr_matrix((np.ones(len(cols), dtype=np.int64), (rows, cols)), shape=(n, n))


def matrix_to_coo_text(matrix: sp.spmatrix) -> str:
    """Coordinate-list export, one ``row col value`` triple per line."""
    coo = matrix.tocoo()
    lines = [f"% {coo.shape[0]} {coo.shape[1]} {coo.nnz}"]
    lines += [f"{r} {c} {v}" for r, c, v in zip(coo.row, coo.col, coo.data)]
    return "\n".join(lines) + "\n"


# --- concrete representations ---------------------------------------------


def build_regular(bound_a: int, bound_m: int) -> TruncatedRep:
    """Left regular representation on l^2(N^x |x N), basis ``(b, n)``.

    ``T_(a,m) e_(b,n) = e_(ab, bm + n)``, so ``S = T_(1,1)`` sends
    ``(b, n)`` to ``(b, b + n)`` and ``V_a = T_(a,0)`` sends it to ``(ab, n)``.
    """
    if bound_a < 1 or bound_m < 1:
        raise ValueError("bounds must be >= 1")
    basis = [(b, n) for b in range(1, bound_a + 1) for n in range(bound_m + 1)]

    def action(gen, label):
        b, n = label
        if gen == "1":
            return label
        if gen == "S":
            return (b, b + n)
        if gen == "S*":
            return (b, n - b) if n >= b else ZERO
        kind, a = gen
        if kind == "V":
            return (a * b, n)
        if kind == "V*":
            return (b // a, n) if b % a == 0 else ZERO
        if kind == "T":
            # T_(a,m) for a cone point packed as ("T", (a, m))
            raise ValueError("use regular_translate for T_(a,m)")
        raise ValueError(f"unknown generator {gen!r}")

    return TruncatedRep(f"regular({bound_a},{bound_m})", basis, action)


def regular_translate(point: Tuple[int, int], label: Tuple[int, int]) -> Tuple[int, int]:
    """``T_(a,m) e_(b,n) = e_(ab, bm + n)`` on the untruncated basis."""
    a, m = point
    b, n = label
    return (a * b, b * m + n)


def build_qplus(denominator_lcm: int, height: int) -> TruncatedRep:
    """The multiplicative-quotient representation on l^2(Q_+).

    Basis ``e_x`` for ``x = k / denominator_lcm`` with ``0 <= x <= height``;
    ``S e_x = e_{x+1}`` and ``V_a e_x = e_{x/a}``.  Requesting ``V_a`` with
    ``a`` not dividing the grid denominator raises :class:`GridError`.
    """
    L = int(denominator_lcm)
    if L < 1:
        raise ValueError("denominator_lcm must be >= 1")
    basis = [Fraction(k, L) for k in range(height * L + 1)]

    def action(gen, x):
        if gen == "1":
            return x
        if gen == "S":
            return x + 1
        if gen == "S*":
            return x - 1 if x >= 1 else ZERO
        kind, a = gen
        if L % a:
            raise GridError(f"{a} does not divide the grid denominator {L}")
        if kind == "V":
            y = x / a
            return y if (y * L).denominator == 1 else OUT
        if kind == "V*":
            return a * x
        raise ValueError(f"unknown generator {gen!r}")

    return TruncatedRep(f"qplus({L},{height})", basis, action)


def build_nxz(bound_b: int, bound_m: int) -> TruncatedRep:
    """The additive-quotient representation on l^2(N^x x Z).

    ``S e_{b,m} = e_{b, b+m}`` and ``V_a e_{b,m} = e_{ab, m}``; ``S`` is a
    bijection of the full basis, hence unitary.
    """
    basis = [(b, m) for b in range(1, bound_b + 1) for m in range(-bound_m, bound_m + 1)]

    def action(gen, label):
        b, m = label
        if gen == "1":
            return label
        if gen == "S":
            return (b, b + m)
        if gen == "S*":
            return (b, m - b)
        kind, a = gen
        if kind == "V":
            return (a * b, m)
        if kind == "V*":
            return (b // a, m) if b % a == 0 else ZERO
        raise ValueError(f"unknown generator {gen!r}")

    return TruncatedRep(f"nxz({bound_b},{bound_m})", basis, action)


def monomial_matrix(rep: TruncatedRep, x: Monomial) -> WordImage:
    """Matrix of ``x`` on the truncation, with its interior columns."""
    return rep.word_image(monomial_word(x))


def product_agrees(rep: TruncatedRep, x: Monomial, y: Monomial) -> Tuple[bool, int]:
    """Check ``matrix(x) @ matrix(y) == matrix(full_mul(x, y))`` on interior columns.

    A column is used when the words for ``y``, then ``x``, and for the
    product all stay inside the truncation.  Returns ``(agrees, n_columns)``.
    """
    mx = monomial_matrix(rep, x)
    my = monomial_matrix(rep, y)
    mxy = monomial_matrix(rep, full_mul(x, y))
    chained = rep.word_map(monomial_word(x) + monomial_word(y))
    cols = np.nonzero((chained != _OUT_IDX) & mxy.interior)[0]
    lhs = (mx.matrix @ my.matrix)[:, cols]
    rhs = mxy.matrix[:, cols]
    return (lhs != rhs).nnz == 0, len(cols)


# --- relation residuals ---------------------------------------------------


@dataclass
class RelationResult:
    relation: str
    instance: str
    residual: int
    interior: int

    def to_json(self) -> dict:
        return {"relation": self.relation, "instance": self.instance,
                "residual": self.residual, "interior": self.interior}


def word_residual(rep: TruncatedRep, lhs: Word, rhs: Word) -> Tuple[int, int]:
    """Max sup-norm deviation of two words over jointly interior basis vectors."""
    ml, mr = rep.word_map(lhs), rep.word_map(rhs)
    interior = (ml != _OUT_IDX) & (mr != _OUT_IDX)
    bad = interior & (ml != mr)
    return int(bad.any()), int(interior.sum())


def _relation_instances(kind: str, bound_a: int):
    rng = range(1, bound_a + 1)
    if kind == "T0":
        yield "S*S=1", ["S*", "S"], []
        for a in rng:
            yield f"V{a}*V{a}=1", [("V*", a), ("V", a)], []
    elif kind in ("T1", "A1"):
        for a in rng:
            yield f"SV{a}=V{a}S^{a}", ["S", ("V", a)], [("V", a)] + ["S"] * a
    elif kind == "T2":
        for a in rng:
            for b in rng:
                yield f"V{a}V{b}=V{a*b}", [("V", a), ("V", b)], [("V", a * b)]
    elif kind == "T3":
        for a in rng:
            for b in rng:
                if gcd(a, b) == 1:
                    yield f"V{a}*V{b}=V{b}V{a}*", [("V*", a), ("V", b)], [("V", b), ("V*", a)]
    elif kind == "T4":
        for a in rng:
            yield f"S*V{a}=V{a}S*^{a}", ["S*", ("V", a)], [("V", a)] + ["S*"] * a
    elif kind == "T5":
        for a in rng:
            yield f"V{a}V{a}*=1", [("V", a), ("V*", a)], []
    elif kind in ("T6", "A3"):
        yield "SS*=1", ["S", "S*"], []
    elif kind == "A2":
        for a in rng:
            yield f"V{a}*V{a}=1", [("V*", a), ("V", a)], []
            for b in rng:
                l = lcm(a, b)
                yield (f"V{a}V{a}*V{b}V{b}*=V{l}V{l}*",
                       [("V", a), ("V*", a), ("V", b), ("V*", b)], [("V", l), ("V*", l)])
                yield f"V{a}V{b}=V{a*b}", [("V", a), ("V", b)], [("V", a * b)]
    else:
        raise ValueError(f"unknown relation {kind!r}")


RELATIONS_FOR = {
    "regular": ("T0", "T1", "T2", "T3", "T4"),
    "qplus": ("T0", "T1", "T2", "T3", "T4", "T5"),
    "nxz": ("T0", "T1", "T2", "T3", "T4", "T6", "A1", "A2", "A3"),
}


def relation_residuals(rep: TruncatedRep, bound_a: int, relations: Optional[Sequence[str]] = None) -> List[RelationResult]:
    """Residual of every relation instance with parameters up to ``bound_a``.

    Instances using a generator the truncation cannot express (``V_a`` off
    the rational grid) are skipped.
    """
    if relations is None:
        relations = RELATIONS_FOR[rep.name.split("(")[0]]
    out = []
    for kind in relations:
        for label, lhs, rhs in _relation_instances(kind, bound_a):
            try:
                res, n = word_residual(rep, lhs, rhs)
            except GridError:
                continue
            out.append(RelationResult(kind, label, res, n))
    return out


# --- spatial KMS representation -------------------------------------------


def spatial_kms(beta: float, mu: Measure, depth: int) -> StateOracle:
    """KMS state from the representation on l^2(N^x, L^2(T, mu)) for atomic ``mu``.

    ``S (f e_d) = (M^d f) e_d`` with ``M`` multiplication by ``z``, and
    ``V_a (f e_d) = f e_{ad}``.  Evaluates
    ``zeta(beta)^{-1} sum_{d <= depth} d^{-beta} <pi(x) 1e_d, 1e_d>``; the
    reported error bound is the tail ``depth^{1-beta} / (beta - 1) / zeta(beta)``.
    """
    leb, atoms = mu.flatten()
    if leb != 0 or not atoms:
        raise ValueError("non-atomic measure: spatial model needs finitely many atoms")
    if not beta > 1:
        raise ValueError("beta must exceed 1")
    turns = list(atoms)
    weights = np.array([float(atoms[t]) for t in turns])
    z, ez = series.zeta(beta)
    tail = series.zeta_tail_bound(depth, beta) / (z - ez)
    d0 = np.arange(1, depth + 1, dtype=np.int64)

    def phase_power(k: np.ndarray, sign: int) -> np.ndarray:
        # rows: basis index, columns: atoms; exact roots of unity
        out = np.empty((len(k), len(turns)), dtype=complex)
        for j, t in enumerate(turns):
            q = t.denominator
            ph = (k % q) * (t.numerator % q) % q
            vals = np.array([unit_root(Fraction(sign * int(p), q)) for p in range(q)])
            out[:, j] = vals[ph]
        return out

    def apply_word(word: Word):
        # state: index d (0 = zero vector) and coefficient f in C^atoms
        d = d0.copy()
        f = np.ones((depth, len(turns)), dtype=complex)
        for gen in reversed(list(word)):
            live = d > 0
            if gen == "S":
                f[live] *= phase_power(d[live], +1)
            elif gen == "S*":
                f[live] *= phase_power(d[live], -1)
            else:
                kind, a = gen
                if kind == "V":
                    d[live] = d[live] * a
                else:
                    divisible = live & (d % a == 0)
                    d[live & ~divisible] = 0
                    d[divisible] = d[divisible] // a
        return d, f

    def evaluate(x: Monomial):
        d, f = apply_word(monomial_word(x))
        hit = d == d0
        inner = (f[hit] * weights).sum(axis=1)
        value = complex(np.sum(d0[hit].astype(float) ** (-beta) * inner)) / z
        return value, tail + 1e-12

    return StateOracle(evaluate, label=f"spatial[beta={beta:g},{mu.label},depth={depth}]")
