import random
from fractions import Fraction as F
from math import gcd, lcm

import pytest
from hypothesis import given, strategies as st

from affine_toeplitz.monomials import (
    ADD_ONE,
    CL_ONE,
    MULT_ONE,
    ONE,
    AddMonomial,
    AlgebraElement,
    ClMonomial,
    MixedPresentationError,
    Monomial,
    MultMonomial,
    add_mul,
    adjoint,
    algebra_mul,
    alpha_endo,
    cl_mul,
    expectation_theta,
    full_mul,
    mono_mul,
    mult_mul,
    range_projection_complement,
    reduce_add,
    reduce_cl,
    reduce_mult,
)

from conftest import add_monomials, cl_monomials, monomials, mult_monomials


def M(*t):
    return Monomial(*t)


class TestFullProduct:
    @pytest.mark.parametrize(
        "x, y, xy",
        [
            ((1, 0, 1, 2), (3, 1, 0, 1), (3, 0, 1, 2)),
            ((1, 0, 0, 1), (4, 2, 3, 5), (4, 2, 3, 5)),
            ((2, 1, 0, 3), (3, 0, 2, 5), (2, 1, 2, 5)),
        ],
    )
    def test_examples(self, x, y, xy):
        assert full_mul(M(*x), M(*y)) == M(*xy)

    def test_associative_on_random_triples(self):
        rng = random.Random(11)
        for _ in range(10_000):
            x, y, z = (M(rng.randint(1, 30), rng.randint(0, 20), rng.randint(0, 20), rng.randint(1, 30))
                       for _ in range(3))
            assert full_mul(full_mul(x, y), z) == full_mul(x, full_mul(y, z))

    @given(monomials, monomials)
    def test_adjoint_reverses_products(self, x, y):
        assert adjoint(x * y) == adjoint(y) * adjoint(x)

    @given(monomials)
    def test_isometry_identity(self, x):
        assert adjoint(x) * x == M(x.b, x.n, x.n, x.b)

    @given(monomials)
    def test_adjoint_involution(self, x):
        assert adjoint(adjoint(x)) == x == x.star.star

    def test_adjoint_examples(self):
        assert adjoint(M(2, 1, 0, 3)) == M(3, 0, 1, 2)
        assert adjoint(ONE) == ONE

    @given(st.integers(1, 60), st.integers(1, 60))
    def test_range_projections_multiply_to_lcm(self, a, b):
        l = lcm(a, b)
        assert M(a, 0, 0, a) * M(b, 0, 0, b) == M(l, 0, 0, l)

    @given(st.integers(1, 40), st.integers(1, 40), st.integers(0, 20), st.integers(0, 20))
    def test_range_projections_are_central_on_diagonal(self, a, b, m, n):
        p, x = M(a, 0, 0, a), M(b, m, n, b)
        a1 = a // gcd(a, b)
        expected = M(lcm(a, b), a1 * m, a1 * n, lcm(a, b))
        assert p * x == x * p == expected

    @given(st.integers(1, 40))
    def test_defining_relations(self, a):
        S, Sst, Va = M(1, 1, 0, 1), M(1, 0, 1, 1), M(a, 0, 0, 1)
        assert S * Va == Va * M(1, a, 0, 1)
        assert Sst * Va == Va * M(1, 0, a, 1)
        assert Sst * S == ONE
        assert M(1, 0, 0, a) * Va == ONE

    @given(st.integers(1, 40), st.integers(1, 40))
    def test_coprime_legs_commute(self, a, b):
        if gcd(a, b) == 1:
            assert M(1, 0, 0, a) * M(b, 0, 0, 1) == M(b, 0, 0, 1) * M(1, 0, 0, a)


class TestAdditiveQuotient:
    @pytest.mark.parametrize(
        "x, image",
        [((3, 0, 1, 2), (3, -1, 2)), ((1, 5, 5, 1), (1, 0, 1)), ((2, 4, 1, 2), (2, 3, 2))],
    )
    def test_reduce_examples(self, x, image):
        assert reduce_add(M(*x)) == AddMonomial(*image)

    def test_product_examples(self):
        assert add_mul(AddMonomial(1, -1, 2), AddMonomial(3, 1, 1)) == AddMonomial(3, -1, 2)
        assert add_mul(ADD_ONE, AddMonomial(5, -2, 3)) == AddMonomial(5, -2, 3)
        assert add_mul(AddMonomial(2, 1, 1), AddMonomial(2, 1, 1)) == AddMonomial(4, 3, 1)

    def test_product_matches_full_product(self):
        assert add_mul(AddMonomial(1, -1, 2), AddMonomial(3, 1, 1)) == reduce_add(full_mul(M(1, 0, 1, 2), M(3, 1, 0, 1)))

    @given(monomials, monomials)
    def test_homomorphism(self, x, y):
        assert reduce_add(x * y) == reduce_add(x) * reduce_add(y)

    @given(add_monomials, add_monomials, add_monomials)
    def test_associative(self, x, y, z):
        assert (x * y) * z == x * (y * z)

    @given(add_monomials)
    def test_adjoint(self, x):
        assert x.star == AddMonomial(x.b, -x.k, x.a)
        assert x.star.star == x


class TestMultiplicativeQuotient:
    @pytest.mark.parametrize(
        "x, image",
        [((2, 1, 0, 3), (F(1, 2), 0, F(3, 2))), ((1, 4, 7, 1), (4, 7, 1)), ((4, 0, 0, 2), (0, 0, F(1, 2)))],
    )
    def test_reduce_examples(self, x, image):
        assert reduce_mult(M(*x)) == MultMonomial(*image)

    def test_product_examples(self):
        assert mult_mul(MultMonomial(1, 0, 2), MultMonomial(0, 1, 1)) == MultMonomial(1, 2, 2)
        y = MultMonomial(F(2, 3), F(5, 7), F(3, 2))
        assert mult_mul(MULT_ONE, y) == y

    @given(monomials, monomials)
    def test_homomorphism(self, x, y):
        assert reduce_mult(x * y) == reduce_mult(x) * reduce_mult(y)

    @given(mult_monomials, mult_monomials, mult_monomials)
    def test_associative(self, x, y, z):
        assert (x * y) * z == x * (y * z)

    @given(monomials)
    def test_adjoint_commutes_with_reduction(self, x):
        assert reduce_mult(adjoint(x)) == reduce_mult(x).star


class TestCrispLacaQuotient:
    @pytest.mark.parametrize(
        "x, image",
        [((2, 1, 0, 3), (F(1, 2), F(3, 2))), ((1, 0, 0, 1), (0, 1)), ((3, 5, 1, 3), (F(4, 3), 1))],
    )
    def test_reduce_examples(self, x, image):
        assert reduce_cl(M(*x)) == ClMonomial(*image)

    def test_product_examples(self):
        assert cl_mul(ClMonomial(1, 2), ClMonomial(3, F(1, 2))) == ClMonomial(7, 1)
        x = ClMonomial(F(-2, 5), F(7, 3))
        assert cl_mul(CL_ONE, x) == x
        assert cl_mul(x, x.inverse()) == CL_ONE

    @given(monomials, monomials)
    def test_homomorphism(self, x, y):
        assert reduce_cl(x * y) == reduce_cl(x) * reduce_cl(y)

    @given(cl_monomials, cl_monomials, cl_monomials)
    def test_group_law(self, x, y, z):
        assert (x * y) * z == x * (y * z)
        assert x * x.inverse() == CL_ONE == x.inverse() * x
        assert CL_ONE * x == x == x * CL_ONE


class TestGaugeAndEndomorphisms:
    def test_expectation_examples(self):
        assert expectation_theta(M(2, 1, 0, 2)) == AlgebraElement.of(M(2, 1, 0, 2))
        assert not expectation_theta(M(2, 1, 0, 3))

    @given(st.lists(st.tuples(monomials, st.complex_numbers(max_magnitude=10)), max_size=6))
    def test_expectation_idempotent(self, terms):
        x = AlgebraElement(terms, kind=Monomial)
        once = expectation_theta(x)
        assert expectation_theta(once) == once

    def test_alpha_examples(self):
        # V_2 S V_2^*; the product chain keeps exactly one S
        assert alpha_endo(2, M(1, 1, 0, 1)) == M(2, 1, 0, 2)
        x = M(3, 2, 5, 7)
        assert alpha_endo(1, x) == x
        for a in range(1, 10):
            assert alpha_endo(a, ONE) == M(a, 0, 0, a)

    @given(st.integers(1, 30), monomials, monomials)
    def test_alpha_multiplicative(self, a, x, y):
        # V_a^* V_a = 1 makes alpha a homomorphism
        assert alpha_endo(a, x * y) == alpha_endo(a, x) * alpha_endo(a, y)

    @given(st.integers(1, 30), st.integers(1, 30), st.integers(0, 20), st.integers(0, 20))
    def test_alpha_on_diagonal(self, a, b, m, n):
        assert alpha_endo(a, M(b, m, n, b)) == M(a * b, m, n, a * b)


class TestAlgebraElement:
    def test_projection_complement(self):
        one = AlgebraElement.one()
        p2 = AlgebraElement.of(M(2, 0, 0, 2))
        q2 = one - p2
        assert algebra_mul(q2, p2) == AlgebraElement.zero(Monomial)
        assert algebra_mul(q2, q2) == q2

    def test_range_projection_complement_idempotent(self):
        q = range_projection_complement([2, 3])
        assert (q * q).isclose(q)
        assert q.adjoint().isclose(q)

    @given(monomials, monomials, monomials)
    def test_bilinear(self, x, y, z):
        X, Y, Z = (AlgebraElement.of(t) for t in (x, y, z))
        assert (X + Y) * Z == X * Z + Y * Z
        assert Z * (X + Y) == Z * X + Z * Y

    def test_mixed_presentations_rejected(self):
        with pytest.raises(MixedPresentationError):
            AlgebraElement.of(ONE) * AlgebraElement.of(ADD_ONE)
        with pytest.raises(MixedPresentationError):
            mono_mul(ONE, CL_ONE)
        with pytest.raises(MixedPresentationError):
            AlgebraElement([(ONE, 1), (ADD_ONE, 1)])

    def test_zero_coefficients_dropped(self):
        x = AlgebraElement.of(ONE) - AlgebraElement.of(ONE)
        assert len(x) == 0
        small = AlgebraElement({ONE: 1e-15, M(2, 0, 0, 2): 1.0}, eps=1e-12)
        assert len(small) == 1

    def test_adjoint_conjugates(self):
        x = AlgebraElement({M(2, 1, 0, 3): 1 + 2j})
        assert x.adjoint() == AlgebraElement({M(3, 0, 1, 2): 1 - 2j})

    @pytest.mark.parametrize("kind", [MultMonomial, ClMonomial, AddMonomial])
    def test_quotient_elements_multiply(self, kind):
        one = AlgebraElement.one(kind)
        assert one * one == one
