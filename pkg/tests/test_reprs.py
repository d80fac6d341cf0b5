import itertools
import random
from fractions import Fraction as F

import numpy as np
import pytest
import scipy.sparse as sp

from affine_toeplitz.monomials import ONE, Monomial, adjoint
from affine_toeplitz.reprs import (
    OUT,
    ZERO,
    GridError,
    build_nxz,
    build_qplus,
    build_regular,
    matrix_to_coo_text,
    monomial_matrix,
    product_agrees,
    regular_translate,
    relation_residuals,
    spatial_kms,
    word_residual,
)
from affine_toeplitz.states import DELTA_MINUS1, DELTA_PLUS1, LEBESGUE, KmsParams, Measure, kms_state


@pytest.fixture(scope="module")
def regular():
    return build_regular(64, 200)


class TestRegular:
    def test_translation_example(self):
        assert regular_translate((2, 1), (3, 2)) == (6, 5)
        assert regular_translate((1, 0), (7, 4)) == (7, 4)

    def test_generator_examples(self, regular):
        assert regular.apply("S*", (3, 2)) is ZERO
        assert regular.apply("S", (3, 2)) == (3, 5)
        assert regular.apply(("V", 2), (3, 2)) == (6, 2)
        assert regular.apply(("V", 50), (3, 2)) is OUT

    def test_identity_matrix(self, regular):
        m = monomial_matrix(regular, ONE).matrix
        assert (m != sp.identity(len(regular), dtype=np.int64, format="csr")).nnz == 0

    def test_full_product_examples(self, regular):
        for x, y in [((1, 0, 1, 2), (3, 1, 0, 1)), ((2, 1, 0, 3), (3, 0, 2, 5))]:
            ok, cols = product_agrees(regular, Monomial(*x), Monomial(*y))
            assert ok and cols > 100

    def test_random_products(self, regular):
        rng = random.Random(5)
        for _ in range(200):
            x, y = (Monomial(rng.randint(1, 8), rng.randint(0, 6), rng.randint(0, 6), rng.randint(1, 8))
                    for _ in range(2))
            ok, cols = product_agrees(regular, x, y)
            assert ok and cols > 0

    def test_adjoint_is_transpose_on_interior(self, regular):
        rng = random.Random(8)
        for _ in range(50):
            x = Monomial(rng.randint(1, 6), rng.randint(0, 6), rng.randint(0, 6), rng.randint(1, 6))
            fwd = monomial_matrix(regular, x)
            back = monomial_matrix(regular, adjoint(x))
            # entries are compared where both partial maps stay in the window
            for j in np.nonzero(fwd.index_map >= 0)[0]:
                i = fwd.index_map[j]
                if back.interior[i]:
                    assert back.index_map[i] == j
            for i in np.nonzero(back.index_map >= 0)[0]:
                j = back.index_map[i]
                if fwd.interior[j]:
                    assert fwd.index_map[j] == i

    def test_distinct_monomials_act_differently(self):
        rep = build_regular(36, 100)
        seen = {}
        for t in itertools.product(range(1, 7), range(7), range(7), range(1, 7)):
            m = monomial_matrix(rep, Monomial(*t))
            key = m.index_map.tobytes()
            assert key not in seen, (t, seen.get(key))
            seen[key] = t

    def test_relations(self, regular):
        results = relation_residuals(regular, 5)
        assert {r.relation for r in results} == {"T0", "T1", "T2", "T3", "T4"}
        assert all(r.residual == 0 and r.interior > 0 for r in results)

    def test_residual_detects_false_relation(self, regular):
        # S S^* = 1 fails in the Toeplitz algebra
        res, n = word_residual(regular, ["S", "S*"], [])
        assert res == 1 and n > 0

    def test_coordinate_export(self):
        rep = build_regular(2, 2)
        text = matrix_to_coo_text(monomial_matrix(rep, Monomial(1, 1, 0, 1)).matrix)
        lines = text.strip().splitlines()
        assert lines[0].startswith("% 6 6")
        assert all(len(line.split()) == 3 for line in lines[1:])


class TestQplus:
    def test_examples(self):
        rep = build_qplus(4, 3)
        assert rep.apply(("V", 2), F(3, 2)) == F(3, 4)
        assert rep.apply("S*", F(1, 2)) is ZERO
        assert rep.apply(("V", 4), F(1, 4)) is OUT

    def test_grid_must_admit_scale(self):
        rep = build_qplus(4, 3)
        with pytest.raises(GridError):
            rep.apply(("V", 3), F(1, 2))

    def test_relations(self):
        rep = build_qplus(3600, 8)
        results = relation_residuals(rep, 6)
        assert any(r.relation == "T5" for r in results)
        assert all(r.residual == 0 and r.interior > 0 for r in results)

    def test_covariance_example(self):
        rep = build_qplus(4, 6)
        res, n = word_residual(rep, ["S*", ("V", 2)], [("V", 2), "S*", "S*"])
        assert res == 0 and n > 0


class TestNxz:
    def test_examples(self):
        rep = build_nxz(8, 5)
        assert rep.apply("S", (3, -2)) == (3, 1)
        assert rep.apply(("V", 2), (3, 1)) == (6, 1)
        assert rep.apply("S*", (3, 1)) == (3, -2)

    def test_relations(self):
        results = relation_residuals(build_nxz(40, 60), 6)
        assert {"T6", "A1", "A2", "A3"} <= {r.relation for r in results}
        assert all(r.residual == 0 and r.interior > 0 for r in results)


class TestSpatial:
    @pytest.mark.parametrize(
        "mu, x, expected",
        [(DELTA_PLUS1, Monomial(3, 5, 1, 3), 1 / 9), (DELTA_MINUS1, Monomial(1, 1, 0, 1), -0.5)],
    )
    def test_examples(self, mu, x, expected):
        value, bound = spatial_kms(2.0, mu, 2000).evaluate(x)
        assert abs(value - expected) <= bound + 1e-9

    def test_off_diagonal_vanishes(self):
        assert spatial_kms(2.0, Measure.roots_of_unity(3), 500)(Monomial(2, 1, 0, 3)) == 0

    def test_agrees_with_closed_forms(self):
        mu = Measure.from_atoms([(F(1, 7), F(1, 3)), (F(2, 5), F(2, 3))])
        spatial = spatial_kms(2.0, mu, 2000)
        psi = kms_state(KmsParams(2.0), mu)
        for x in [Monomial(1, 1, 0, 1), Monomial(2, 3, 1, 2), Monomial(3, 0, 4, 3)]:
            v, bound = spatial.evaluate(x)
            assert abs(v - psi(x)) <= bound + 1e-9

    def test_rejects_lebesgue(self):
        with pytest.raises(ValueError, match="non-atomic"):
            spatial_kms(2.0, LEBESGUE, 100)

