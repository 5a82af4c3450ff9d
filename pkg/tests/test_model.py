import json
from fractions import Fraction

import pytest

from qpharm import errors
from qpharm.algebra import BiPoly, QuadExt, TruncSeries1
from qpharm.model import (
    Grid,
    branch_series,
    builtin_model,
    discrete_laplacian,
    discriminant_roots,
    kernel,
    load_model,
    make_model,
    theta_info,
)

F = Fraction


class TestLoadModel:
    def test_simple_valid(self, simple):
        assert sum(simple.weights.values()) == 1

    def test_json_roundtrip(self, tandem):
        doc = tandem.to_json()
        m = load_model(doc)
        assert m.weights == tandem.weights

    def test_nonzero_drift(self):
        with pytest.raises(errors.NonzeroDrift):
            make_model({(1, 0): "1/2", (-1, 0): "1/4", (0, 1): "1/8", (0, -1): "1/8"})

    def test_not_probability(self):
        with pytest.raises(errors.NotProbability):
            make_model({(1, 0): "1/2", (-1, 0): "1/4"})

    def test_degenerate(self):
        with pytest.raises(errors.Degenerate):
            make_model({(1, 1): "1/2", (-1, -1): "1/2"})

    def test_bad_weight(self):
        with pytest.raises(errors.BadWeight):
            load_model(json.dumps({"weights": {"2,0": "1"}}))
        with pytest.raises(errors.BadWeight):
            load_model(json.dumps({"weights": {"1,0": "nope"}}))


class TestKernel:
    def test_tandem_printed(self, tandem):
        K = kernel(tandem).K
        x, y = BiPoly.x(), BiPoly.y()
        assert K == (x * x + y + x * y * y) * F(1, 3) - x * y

    def test_king_printed(self, king):
        K = kernel(king).K
        x, y = BiPoly.x(), BiPoly.y()
        one = BiPoly.const(1)
        expected = (
            one + x + y + x**2 + y**2 + x**2 * y + x * y**2 + x**2 * y**2
        ) * F(1, 8) - x * y
        assert K == expected

    def test_infinite_pi2_printed(self, infinite_pi2):
        K = kernel(infinite_pi2).K
        x, y = BiPoly.x(), BiPoly.y()
        one = BiPoly.const(1)
        expected = (
            one + 2 * x + 2 * y + 2 * x**2 + 2 * y**2 + 3 * x**2 * y**2
        ) * F(1, 12) - x * y
        assert K == expected

    def test_sections_recompose(self, tandem, king):
        for m in (tandem, king):
            kd = kernel(m)
            x, y = BiPoly.x(), BiPoly.y()

            def ux(p):
                return BiPoly({(i, 0): c for i, c in enumerate(p.coeffs)})

            def uy(p):
                return BiPoly({(0, j): c for j, c in enumerate(p.coeffs)})

            assert kd.K == ux(kd.a) * y**2 + ux(kd.b) * y + ux(kd.c)
            assert kd.K == uy(kd.at) * x**2 + uy(kd.bt) * x + uy(kd.ct)
            assert kd.K.total_degree <= 4


class TestTheta:
    def test_simple(self, simple):
        ti = theta_info(simple)
        assert (ti.sigma11, ti.sigma12, ti.sigma22) == (F(1, 2), F(0), F(1, 2))
        assert ti.pi_over_theta == 2

    def test_tandem(self, tandem):
        ti = theta_info(tandem)
        assert (ti.sigma11, ti.sigma12, ti.sigma22) == (F(2, 3), F(-1, 3), F(2, 3))
        assert ti.cos_theta_squared == F(1, 4)
        assert ti.cos_theta_sign == 1  # cos(theta) = 1/2
        assert ti.pi_over_theta == 3

    def test_infinite_pi2(self, infinite_pi2):
        assert theta_info(infinite_pi2).pi_over_theta == 2

    def test_pi2_iff_diagonal_balance(self):
        from tests.conftest import random_pi2_models

        for m in random_pi2_models(10, seed=7):
            ti = theta_info(m)
            lhs = m.w(1, 1) + m.w(-1, -1)
            rhs = m.w(1, -1) + m.w(-1, 1)
            assert (ti.pi_over_theta == 2) == (lhs == rhs) == (ti.sigma12 == 0)


class TestDiscriminants:
    def test_simple_roots(self, simple):
        dr = discriminant_roots(simple)
        assert dr.x1 == QuadExt(3, -2, 2)
        assert dr.x4 == QuadExt(3, 2, 2)

    def test_tandem_roots(self, tandem):
        dr = discriminant_roots(tandem)
        # branch data of the two sections: {0, 4} on the y side,
        # {1/4, infinity} on the x side (the worked example swaps axes)
        assert (dr.y1, dr.y4) == (F(0), F(4))
        assert dr.x1 == F(1, 4) and dr.x4 is None

    def test_infinite_pi2_roots(self, infinite_pi2):
        dr = discriminant_roots(infinite_pi2)
        assert dr.x1 == QuadExt(F(-3, 2), F(5, 6), 3)
        assert dr.x4 == QuadExt(F(-3, 2), F(-5, 6), 3)

    def test_double_root_factored(self, simple, tandem, king, infinite_pi2):
        from qpharm.algebra import UniPoly, ONE

        for m in (simple, tandem, king, infinite_pi2):
            dr = discriminant_roots(m)
            sq = UniPoly([ONE, -2 * ONE, ONE])
            assert (dr.D % sq).is_zero()
            assert (dr.Dt % sq).is_zero()


class TestBranchSeries:
    def test_tandem_y_plus(self, tandem):
        ys = branch_series(tandem, "Y_plus", 5)
        assert ys.coeffs == [F(0), F(0), F(-1), F(-3), F(-9), F(-28)]

    def test_simple_x_plus_residual(self, simple):
        kd = kernel(simple)
        X = branch_series(simple, "X_plus", 8)
        at = TruncSeries1(list(kd.at.coeffs), 8)
        bt = TruncSeries1(list(kd.bt.coeffs), 8)
        ct = TruncSeries1(list(kd.ct.coeffs), 8)
        assert (at * X * X + bt * X + ct).is_zero()

    def test_tandem_x_plus_double_root(self, tandem):
        with pytest.raises(errors.DoubleRoot):
            branch_series(tandem, "X_plus", 4)


class TestLaplacian:
    def test_simple_bilinear_harmonic(self, simple):
        g = Grid.from_function(lambda i, j: (i + 1) * (j + 1), 10, 10)
        assert discrete_laplacian(g, simple).max_abs() == 0

    def test_tandem_printed_harmonic(self, tandem):
        g = Grid.from_function(lambda i, j: (i + 1) * (j + 1) * (i + j + 2), 10, 10)
        assert discrete_laplacian(g, tandem).max_abs() == 0

    def test_zero_grid(self, king):
        g = Grid.from_function(lambda i, j: 0, 6, 6)
        assert discrete_laplacian(g, king).max_abs() == 0

    def test_window_shrinks(self, simple):
        g = Grid.from_function(lambda i, j: i * j, 6, 6)
        out = discrete_laplacian(g, simple)
        assert (out.ni, out.nj) == (5, 5)
