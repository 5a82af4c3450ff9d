from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from qpharm import errors
from qpharm.algebra import BiPoly, RatFunc1, RatFunc2, TruncSeries2
from qpharm.conformal import harmonic_basis
from qpharm.curve import group_orbit
from qpharm.model import Grid, builtin_model, discrete_laplacian, kernel
from qpharm.pipelines import (
    PHF,
    chain_verifies,
    closed_form_pi2,
    decompose_in_basis,
    expand_ratfunc2,
    extract_grid,
    lift_chain_rational,
    lift_chain_series,
    lift_rational,
    lift_series,
    poly_to_gf,
    verify_polyharmonic,
)

F = Fraction
X, Y = RatFunc2.x(), RatFunc2.y()
x1 = RatFunc1.x()


def fe_residual(m, H_next: RatFunc2, H_prev: RatFunc2) -> RatFunc2:
    """K H - K(x,0)H(x,0) - K(0,y)H(0,y) + K(0,0)H(0,0) - xy H_prev.

    Zero exactly when Delta H_next = H_prev (the sign of the xy term is
    the one this kernel convention satisfies; see the ledgered analysis).
    """
    kd = kernel(m)
    K = RatFunc2.from_poly(kd.K)
    bx = H_next.section_y0()
    by = H_next.section_x0()
    kx0 = RatFunc1(kd.c, __import__("qpharm.algebra", fromlist=["UniPoly"]).UniPoly.const(1))
    ky0 = RatFunc1(kd.ct, __import__("qpharm.algebra", fromlist=["UniPoly"]).UniPoly.const(1))
    from qpharm.pipelines import _rf1_in_x, _rf1_in_y

    term_x = _rf1_in_x(kx0 * bx)
    term_y = _rf1_in_y(ky0 * by)
    k00h00 = RatFunc2.const(kd.K.coeff(0, 0) * bx.eval(F(0)))
    return K * H_next - term_x - term_y + k00h00 - X * Y * H_prev


class TestTandemChain:
    def test_full_chain(self, tandem):
        chain = lift_chain_rational(tandem, k=1, n=3)
        H1, H2, H3 = (c.rep for c in chain)
        # printed F_1 and (as the y-slot) printed "F_2"
        assert chain[1].pair.F == F(-81, 4) * x1**3 / (1 - x1) ** 5
        assert chain[2].pair.G == F(81, 4) * x1**2 * (x1 + 2) / (x1 - 1) ** 7
        # H_2^1: the printed function carries the chain-inconsistent scalar -4
        printed_H2 = (
            (X * Y - 1) * (X + Y + X * Y * (X + Y - 4)) * F(-243)
            / ((X - 1) ** 5 * (Y - 1) ** 5)
        )
        assert H2 == printed_H2 * F(-1, 4)
        # H_3^1 shape: p/((x-1)^7 (y-1)^7), deg p <= 9
        assert H3.den == ((X - 1) ** 7 * (Y - 1) ** 7).num
        assert H3.num.total_degree <= 9

    def test_fe_residuals_zero(self, tandem):
        chain = lift_chain_rational(tandem, k=1, n=3)
        assert fe_residual(tandem, chain[1].rep, chain[0].rep).is_zero()
        assert fe_residual(tandem, chain[2].rep, chain[1].rep).is_zero()

    def test_delta_chain_grids(self, tandem):
        chain = lift_chain_rational(tandem, k=1, n=3)
        assert chain_verifies(chain, tandem, window=10)

    def test_decoupling_pair_property(self, tandem):
        from qpharm.curve import reduce_mod_kernel_x
        from qpharm.pipelines import _rf1_in_x, _rf1_in_y

        chain = lift_chain_rational(tandem, k=1, n=2)
        pair = chain[1].pair
        M = X * Y * chain[0].rep
        comb = M + _rf1_in_x(pair.F) + _rf1_in_y(pair.G)
        q = comb * RatFunc2.const(1) / RatFunc2.from_poly(kernel(tandem).K)
        # exact kernel division: the product q*K reproduces comb
        assert q * RatFunc2.from_poly(kernel(tandem).K) == comb


class TestKingChain:
    def test_rational_lift_printed_exactly(self, king):
        # the printed hat-H_2^1 is chain-consistent with the workbench
        # normalization (scalar 1), not with the printed H_1^1 scale
        chain = lift_chain_rational(king, k=1, n=2)
        printed = F(-128, 3) * Y / ((X - 1) ** 2 * (Y - 1) ** 4)
        assert chain[1].rep == printed
        assert chain[1].pair.F.is_zero()

    def test_series_lift_equals_def2(self, king):
        # K(0,0) != 0: the series lift is xy H / K, which reproduces the
        # printed function exactly (with the workbench H_1^1 scale)
        H1 = harmonic_basis(king, 1)
        order = 12
        H1s = expand_ratfunc2(H1, order)
        H2s = lift_series(king, H1s, order)
        K8 = kernel(king).K * 8
        printed = (
            F(-128) * X * Y
            / ((X - 1) ** 2 * (Y - 1) ** 2 * RatFunc2.from_poly(K8))
        )
        assert H2s == expand_ratfunc2(printed, order)

    def test_two_lifts_differ_by_harmonic(self, king):
        chain = lift_chain_rational(king, k=1, n=2)
        H1 = harmonic_basis(king, 1)
        H2s = lift_series(king, expand_ratfunc2(H1, 20), 20)
        rational_grid = extract_grid(chain[1], 10)
        series_grid = Grid(
            [[H2s.terms.get((i, j), F(0)) for j in range(10)] for i in range(10)]
        )
        diff = rational_grid.sub(series_grid)
        assert discrete_laplacian(diff, king).max_abs() == 0


class TestSeriesPipeline:
    def test_tandem_series_prefix(self, tandem):
        # Axis-swapped lift.  The printed prefix (243/4)x + (729/4)xy +
        # (729/2)xy^2 + 972 x^2 y + (5103/4)x^3 + ... carries the
        # sign-flipped lift; the Delta-consistent solution is its negative,
        # which the independent grid recurrence below confirms:
        # v(1,0) = 3 h1(0,0) = 3(-81/4) = -243/4 from
        # Delta v = h1, v(0,.) = 0.
        chain = lift_chain_series(tandem, k=1, n=2, order=6)
        H2 = chain[1].rep
        assert H2.coeff(1, 0) == -F(243, 4)
        assert H2.coeff(1, 1) == -F(729, 4)
        assert H2.coeff(1, 2) == -F(729, 2)
        assert H2.coeff(2, 1) == -972
        assert H2.coeff(3, 0) == -F(5103, 4)
        # the boundary section killed by the swapped lift
        assert all(H2.coeff(0, j) == 0 for j in range(H2.order + 1))
        # independent oracle: row-by-row solve of Delta v = h1 with the
        # v(0, .) = 0 boundary, using the (i+1, j) stencil entry
        h1 = extract_grid(harmonic_basis(tandem, 1), 7)
        v = [[F(0)] * 8 for _ in range(8)]
        for i in range(0, 6):
            for j in range(0, 6):
                acc = 3 * (h1.rows[i][j] + v[i][j])
                if i >= 1:
                    acc -= v[i - 1][j + 1]
                if j >= 1:
                    acc -= v[i][j - 1]
                v[i + 1][j] = acc
        for i in range(5):
            for j in range(5):
                if i + j <= H2.order:
                    assert H2.coeff(i, j) == v[i][j]

    def test_series_delta_chain(self, tandem, simple):
        for m in (tandem, simple):
            chain = lift_chain_series(m, k=1, n=3, order=20)
            assert chain_verifies(chain, m, window=9)

    def test_infinite_group_series_chain(self, infinite_pi2):
        chain = lift_chain_series(infinite_pi2, k=1, n=3, order=18)
        assert chain_verifies(chain, infinite_pi2, window=8)

    def test_zero_input(self, tandem):
        z = TruncSeries2({}, 8)
        assert lift_series(tandem, z, 8).is_zero()


class TestPi2ClosedForm:
    def test_simple_printed_family(self, simple):
        H21 = closed_form_pi2(simple, 2, 1)
        H31 = closed_form_pi2(simple, 3, 1)
        assert H21 == F(-32) * Y / ((X - 1) ** 2 * (Y - 1) ** 4)
        assert H31 == F(-128) * Y**2 / ((X - 1) ** 2 * (Y - 1) ** 6)

    def test_n1_equals_harmonic_basis(self, simple, king):
        for m in (simple, king):
            for k in (1, 2):
                assert closed_form_pi2(m, 1, k) == harmonic_basis(m, k)

    def test_king_pi2_equals_rational_lift(self, king):
        chain = lift_chain_rational(king, k=1, n=2)
        assert closed_form_pi2(king, 2, 1) == chain[1].rep

    def test_not_pi2(self, tandem):
        with pytest.raises(errors.NotPi2):
            closed_form_pi2(tandem, 2, 1)

    def test_infinite_group_rejected(self, infinite_pi2):
        with pytest.raises(errors.GroupInfinite):
            closed_form_pi2(infinite_pi2, 2, 1)

    def test_shape_bound(self, simple, king):
        for m in (simple, king):
            for n, k in ((2, 1), (2, 2), (3, 1)):
                H = closed_form_pi2(m, n, k)
                assert H.den.degree_x() <= 2 * k + 2 * (n - 1) + 2
                assert H.den.degree_y() <= 2 * (n + k - 1) + 2


class TestGridsAndVerify:
    def test_extract_grid_examples(self, tandem, simple):
        g = extract_grid(harmonic_basis(tandem, 1), 8)
        # v proportional to (i+1)(j+1)(i+j+2): scalar from v(0,0)
        scale = g.rows[0][0] / 2
        for i in range(8):
            for j in range(8):
                assert g.rows[i][j] == scale * (i + 1) * (j + 1) * (i + j + 2)
        gs = extract_grid(harmonic_basis(simple, 1) * 64, 6)
        assert gs.rows[2][3] == -512 * 3 * 4

    def test_extract_xy_monomial(self):
        H = RatFunc2.x() * RatFunc2.y()
        g = extract_grid(H, 4)
        assert g.rows[1][1] == 1
        assert sum(abs(v) for row in g.rows for v in row) == 1

    def test_order_too_low(self, tandem):
        s = TruncSeries2({(0, 0): F(1)}, 3)
        with pytest.raises(errors.OrderTooLow):
            extract_grid(s, 10)

    def test_verify_polyharmonic_chain(self, tandem):
        chain = lift_chain_rational(tandem, k=1, n=2)
        g2 = extract_grid(chain[1], 12)
        rep = verify_polyharmonic(g2, tandem, degree=2)
        assert rep.passed
        lap = discrete_laplacian(g2, tandem)
        g1 = extract_grid(chain[0], 12)
        assert all(
            lap.rows[i][j] == g1.rows[i][j] for i in range(11) for j in range(11)
        )

    def test_verify_reports_violations(self, simple):
        g = Grid.from_function(lambda i, j: i * i * j, 6, 6)
        rep = verify_polyharmonic(g, simple, degree=1)
        assert not rep.passed and rep.violations


class TestDecompose:
    def test_trivial_multiple(self, simple):
        H1 = harmonic_basis(simple, 1)
        assert decompose_in_basis(H1 * 2, [H1], order=6) == [F(2)]

    def test_printed_v2(self):
        from qpharm.tables import V2_COEFFS, simple_walk_v_decomposition

        coeffs, labels = simple_walk_v_decomposition("V2")
        assert tuple(coeffs) == V2_COEFFS

    def test_printed_v3(self):
        from qpharm.tables import V3_COEFFS, simple_walk_v_decomposition

        coeffs, labels = simple_walk_v_decomposition("V3")
        assert tuple(coeffs) == V3_COEFFS

    @given(
        a=st.fractions(min_value=-5, max_value=5, max_denominator=4),
        b=st.fractions(min_value=-5, max_value=5, max_denominator=4),
        c=st.fractions(min_value=-5, max_value=5, max_denominator=4),
    )
    @settings(max_examples=10, deadline=None)
    def test_roundtrip_random_combination(self, a, b, c):
        m = builtin_model("simple")
        basis = [harmonic_basis(m, 1), harmonic_basis(m, 2), closed_form_pi2(m, 2, 1)]
        V = basis[0] * a + basis[1] * b + basis[2] * c
        got = decompose_in_basis(V, basis, order=10)
        assert got == [a, b, c]

    def test_singular_system(self, simple):
        H1 = harmonic_basis(simple, 1)
        with pytest.raises(errors.SingularSystem):
            decompose_in_basis(H1, [H1, H1 * 2], order=6)


class TestPolyToGF:
    def test_constant(self):
        gf = poly_to_gf({(0, 0): 1})
        assert gf == 1 / ((1 - X) * (1 - Y))

    def test_bilinear(self):
        gf = poly_to_gf({(1, 1): 1, (1, 0): 1, (0, 1): 1, (0, 0): 1})
        assert gf == 1 / ((1 - X) ** 2 * (1 - Y) ** 2)

    def test_tandem_harmonic_gf(self):
        # (i+1)(j+1)(i+j+2) -> -2(xy-1)/((1-x)^3 (1-y)^3)
        d = {
            (2, 1): 1, (1, 2): 1, (1, 1): 4, (2, 0): 1, (0, 2): 1,
            (1, 0): 3, (0, 1): 3, (0, 0): 2,
        }
        assert poly_to_gf(d) == -2 * (X * Y - 1) / ((1 - X) ** 3 * (1 - Y) ** 3)

    def test_matches_grid_oracle(self):
        # expansion agrees with direct polynomial evaluation
        d = {(2, 0): F(1, 3), (0, 1): F(-2), (1, 1): F(5)}
        gf = poly_to_gf(d)
        g = extract_grid(gf, 6)
        for i in range(6):
            for j in range(6):
                val = F(1, 3) * i * i - 2 * j + 5 * i * j
                assert g.rows[i][j] == val
