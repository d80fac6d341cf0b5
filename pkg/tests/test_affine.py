from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from affine_toeplitz.affine import (
    IDENTITY,
    AffinePoint,
    ConePoint,
    brute_join,
    brute_lub,
    cone_leq,
    enumerate_smooth,
    group_inv,
    group_mul,
    is_smooth,
    join_cone,
    leq,
    lub,
)

from conftest import affine_points, cone_points


small_cone_points = st.builds(ConePoint, st.integers(1, 12), st.integers(0, 12))


def P(a, r=0):
    return AffinePoint(F(a), F(r))


class TestGroup:
    def test_product(self):
        assert group_mul(P(2, 1), P(3, 2)) == P(6, 5)

    def test_identity_and_inverse(self):
        x = P(2, 3)
        assert group_mul(IDENTITY, x) == x
        assert group_mul(x, group_inv(x)) == IDENTITY

    @pytest.mark.parametrize(
        "x, inv",
        [((2, 3), (F(1, 2), F(-3, 2))), ((1, 0), (1, 0)), ((F(1, 3), F(5, 6)), (3, F(-5, 2)))],
    )
    def test_inverse_values(self, x, inv):
        assert group_inv(P(*x)) == P(*inv)

    def test_rejects_floats_and_nonpositive_scale(self):
        with pytest.raises(TypeError):
            AffinePoint(0.5, 0)
        with pytest.raises(ValueError):
            AffinePoint(0, 1)
        with pytest.raises(ValueError):
            ConePoint(0, 1)

    @given(affine_points, affine_points, affine_points)
    def test_associative(self, x, y, z):
        assert (x * y) * z == x * (y * z)

    @given(affine_points)
    def test_two_sided_inverse(self, x):
        assert x * x.inverse() == IDENTITY == x.inverse() * x
        assert IDENTITY * x == x == x * IDENTITY

    @given(cone_points, cone_points)
    def test_cone_embeds(self, x, y):
        assert (x * y).to_affine() == x.to_affine() * y.to_affine()


class TestOrder:
    @pytest.mark.parametrize(
        "x, y, expected",
        [((F(1, 2), F(-3, 2)), (1, 0), True), ((1, 0), (1, 0), True), ((2, 0), (1, 0), False)],
    )
    def test_examples(self, x, y, expected):
        assert leq(P(*x), P(*y)) is expected

    @given(affine_points, affine_points)
    def test_matches_cone_membership(self, x, y):
        assert leq(x, y) == (x.inverse() * y).in_cone()

    @given(affine_points)
    def test_reflexive(self, x):
        assert leq(x, x)

    @given(affine_points, affine_points)
    def test_antisymmetric(self, x, y):
        if leq(x, y) and leq(y, x):
            assert x == y

    @given(affine_points, cone_points, cone_points)
    def test_transitive_along_cone(self, x, p, q):
        y = x * p.to_affine()
        z = y * q.to_affine()
        assert leq(x, y) and leq(y, z) and leq(x, z)

    @given(affine_points, affine_points, affine_points)
    def test_left_invariant(self, g, x, y):
        assert leq(x, y) == leq(g * x, g * y)

    @given(cone_points, cone_points)
    def test_cone_leq_agrees(self, x, y):
        assert cone_leq(x, y) == leq(x.to_affine(), y.to_affine())


class TestLub:
    @pytest.mark.parametrize(
        "x, expected",
        [((F(1, 2), F(-3, 2)), (1, 0)), ((3, 2), (3, 2)), ((F(1, 3), F(5, 6)), (2, 5))],
    )
    def test_examples(self, x, expected):
        assert lub(P(*x)) == ConePoint(*expected)

    def test_brute_examples(self):
        assert brute_lub(P(F(1, 2), F(-3, 2)), 16, 16) == ConePoint(1, 0)
        assert brute_lub(P(3, 2), 4, 4) == ConePoint(3, 2)
        assert brute_lub(P(F(1, 3), F(5, 6)), 12, 12) == ConePoint(2, 5)

    def test_brute_absent_when_box_too_small(self):
        assert brute_lub(P(7, 0), 4, 4) is None

    @given(affine_points)
    def test_is_upper_bound(self, x):
        assert leq(x, lub(x).to_affine())

    @given(affine_points, cone_points)
    def test_is_least(self, x, w):
        # lub(x * w) dominates x * w, which dominates x
        v = lub(x * w.to_affine()).to_affine()
        assert leq(x, v)
        assert leq(lub(x).to_affine(), v)


class TestJoin:
    @pytest.mark.parametrize(
        "x, y, expected",
        [((2, 3), (3, 1), (6, 9)), ((1, 0), (5, 4), (5, 4)), ((2, 0), (4, 0), (4, 0))],
    )
    def test_examples(self, x, y, expected):
        assert join_cone(ConePoint(*x), ConePoint(*y)) == ConePoint(*expected)

    def test_brute_example(self):
        assert brute_join(ConePoint(2, 3), ConePoint(3, 1), 36, 36) == ConePoint(6, 9)

    @given(cone_points, cone_points)
    def test_commutative_and_bounds(self, x, y):
        j = join_cone(x, y)
        assert j == join_cone(y, x)
        assert cone_leq(x, j) and cone_leq(y, j)

    @given(cone_points)
    def test_idempotent(self, x):
        assert join_cone(x, x) == x

    @given(small_cone_points, small_cone_points)
    def test_matches_brute_force(self, x, y):
        assert brute_join(x, y, 144, 144) == join_cone(x, y)


class TestSmooth:
    def test_examples(self):
        assert enumerate_smooth({2, 3}, 10) == [1, 2, 3, 4, 6, 8, 9]
        assert enumerate_smooth({2}, 8) == [1, 2, 4, 8]
        assert enumerate_smooth({5}, 4) == [1]

    def test_matches_trial_division(self):
        primes = {2, 3, 7}
        assert enumerate_smooth(primes, 2000) == [n for n in range(1, 2001) if is_smooth(n, primes)]

    def test_rejects_non_primes(self):
        with pytest.raises(ValueError):
            enumerate_smooth({4}, 10)
        with pytest.raises(ValueError):
            enumerate_smooth(set(), 10)
