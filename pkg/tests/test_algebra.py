from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from qpharm import errors
from qpharm.algebra import (
    BiPoly,
    QuadExt,
    RatFunc1,
    RatFunc2,
    TruncSeries1,
    TruncSeries2,
    UniPoly,
    divide_by_kernel,
    quadratic_series_root,
    rat,
    rational_reconstruct,
    series_invert,
)
from qpharm.model import builtin_model, kernel

F = Fraction


def series_sqrt(f: TruncSeries1) -> TruncSeries1:
    """Independent oracle: sqrt of a series with f(0)=1, via Newton."""
    x = TruncSeries1.const(F(1), f.order)
    for _ in range(f.order.bit_length() + 2):
        x = (x + f * x.invert()) * F(1, 2)
    return x


class TestSeriesInvert:
    def test_geometric(self):
        f = TruncSeries2({(0, 0): F(1), (1, 0): F(-1), (0, 1): F(-1)}, 2)
        g = series_invert(f)
        assert g.terms == {
            (0, 0): F(1), (1, 0): F(1), (0, 1): F(1),
            (2, 0): F(1), (1, 1): F(2), (0, 2): F(1),
        }

    def test_identity(self):
        f = TruncSeries2({(0, 0): F(1)}, 5)
        assert series_invert(f).terms == {(0, 0): F(1)}

    def test_king_kernel(self, king):
        # the multiply-back oracle fixes the xy coefficient at 10:
        # (1+x+y+x^2+y^2-8xy+..)(1-x-y+a*xy+..) has xy coefficient a-10
        K8 = kernel(king).K * 8
        f = TruncSeries2.from_bipoly(K8, 2)
        g = series_invert(f)
        assert g.coeff(1, 1) == 10
        assert (f * g).terms == {(0, 0): F(1)}

    def test_zero_constant_term(self):
        with pytest.raises(errors.ZeroConstantTerm):
            series_invert(TruncSeries2({(1, 0): F(1)}, 3))


class TestQuadraticSeriesRoot:
    def test_tandem_y_branch_against_closed_form(self):
        # oracle: series expansion of (3x - 1 + (1-x) sqrt(1-4x)) / (2x)
        N = 9
        sq = series_sqrt(TruncSeries1([F(1), F(-4)], N + 1))
        one_minus_x = TruncSeries1([F(1), F(-1)], N + 1)
        num = TruncSeries1([F(-1), F(3)], N + 1) + one_minus_x * sq
        # divide by 2x: shift down one
        expected = TruncSeries1(
            [c / 2 for c in num.coeffs[1:]], N
        )
        a = TruncSeries1([F(0), F(1, 3)], N)
        b = TruncSeries1([F(1, 3), F(-1)], N)
        c = TruncSeries1([F(0), F(0), F(1, 3)], N)
        root = quadratic_series_root(a, b, c, F(0), N)
        assert root.coeffs == expected.coeffs

    def test_linear_case(self):
        a = TruncSeries1.const(F(0), 5)
        b = TruncSeries1.const(F(1), 5)
        c = TruncSeries1([F(0), F(-1)], 5)
        root = quadratic_series_root(a, b, c, F(0), 5)
        assert root.coeffs == [F(0), F(1)] + [F(0)] * 4

    def test_tandem_x_branch_double_root(self, tandem):
        kd = kernel(tandem)
        with pytest.raises(errors.DoubleRoot):
            quadratic_series_root(
                TruncSeries1(list(kd.at.coeffs), 4),
                TruncSeries1(list(kd.bt.coeffs), 4),
                TruncSeries1(list(kd.ct.coeffs), 4),
                F(0), 4,
            )


class TestDivideByKernel:
    def test_trivial_multiple(self, simple):
        K = kernel(simple).K
        assert divide_by_kernel(K * 4, K) == BiPoly.const(4)

    def test_simple_walk_boundary_combination(self, simple):
        # N = -2[x(1-y)^2 + y(1-x)^2]; oracle: -8 K == N by expansion
        x, y = BiPoly.x(), BiPoly.y()
        one = BiPoly.const(1)
        N = (x * (one - y) ** 2 + y * (one - x) ** 2) * F(-2)
        K = kernel(simple).K
        assert N == K * F(-8)
        assert divide_by_kernel(N, K) == BiPoly.const(-8)

    def test_not_divisible_reports_remainder(self, simple):
        K = kernel(simple).K
        with pytest.raises(errors.NotDivisible) as exc:
            divide_by_kernel(BiPoly.x(), K)
        assert exc.value.remainder is not None


class TestRationalReconstruct:
    def test_one_third(self):
        import mpmath

        with mpmath.workprec(256):
            v = mpmath.mpf(1) / 3
            assert rational_reconstruct(v, 1000) == F(1, 3)

    def test_three_eighths(self):
        import mpmath

        with mpmath.workprec(128):
            assert rational_reconstruct(mpmath.mpf("0.375"), 100) == F(3, 8)

    def test_pi_unreliable(self):
        import mpmath

        with mpmath.workprec(256):
            with pytest.raises(errors.NoReliableReconstruction):
                rational_reconstruct(mpmath.pi, 10)


small_rats = st.fractions(
    min_value=-4, max_value=4, max_denominator=6
)


def bipolys(max_deg=2):
    return st.dictionaries(
        st.tuples(st.integers(0, max_deg), st.integers(0, max_deg)),
        small_rats,
        max_size=5,
    ).map(BiPoly)


class TestProperties:
    @given(f=bipolys(), g=bipolys())
    @settings(max_examples=60, deadline=None)
    def test_product_quotient_roundtrip(self, f, g):
        if g.is_zero():
            return
        r = RatFunc2(f * g, g)
        assert r == RatFunc2(f, BiPoly.const(1))

    @given(f=bipolys(), g=bipolys(), h=bipolys())
    @settings(max_examples=40, deadline=None)
    def test_canonical_form_idempotent(self, f, g, h):
        if g.is_zero() or h.is_zero():
            return
        a = RatFunc2(f * h, g * h)
        b = RatFunc2(a.num, a.den)
        assert a.num == b.num and a.den == b.den

    @given(terms=st.dictionaries(
        st.tuples(st.integers(0, 2), st.integers(0, 2)), small_rats, max_size=4
    ))
    @settings(max_examples=40, deadline=None)
    def test_series_invert_inverse(self, terms):
        t = dict(terms)
        t[(0, 0)] = t.get((0, 0), F(0)) + 1
        if t[(0, 0)] == 0:
            t[(0, 0)] = F(1)
        f = TruncSeries2(t, 5)
        g = series_invert(f)
        prod = f * g
        assert prod.terms == {(0, 0): F(1)}

    @given(q=bipolys(max_deg=2))
    @settings(max_examples=30, deadline=None)
    def test_divide_by_kernel_roundtrip(self, q):
        K = kernel(builtin_model("simple")).K
        if q.is_zero():
            return
        assert divide_by_kernel(q * K, K) == q


def test_branch_root_residual_random_models():
    # quadratic_series_root solves the section equation on random models
    from tests.conftest import random_pi2_models
    from qpharm.model import branch_series

    for m in random_pi2_models(12, seed=3):
        kd = kernel(m)
        if kd.bt.eval(F(0)) == 0:
            continue
        try:
            X = branch_series(m, "X_plus", 8)
        except errors.NotARoot:
            continue  # models with a north-east step have no vanishing branch
        at = TruncSeries1(list(kd.at.coeffs), 8)
        bt = TruncSeries1(list(kd.bt.coeffs), 8)
        ct = TruncSeries1(list(kd.ct.coeffs), 8)
        assert (at * X * X + bt * X + ct).is_zero()


def test_quadext_normalization():
    v = QuadExt.of(3, -8, F(1, 8))
    assert v == QuadExt(3, -2, 2)
    assert QuadExt.of(1, 2, 9) == 7  # square discriminant collapses
    with pytest.raises(ValueError):
        QuadExt(1, 1, 4)
