"""The conformal invariant omega and the harmonic basis.

For integer pi/theta = k the invariant is rational and can be written
down exactly from the branch points of the kernel: with

    w(x) = (A1 - A0 x)/(1 - x),   A0 = s0 + 1/s0,  A1 = s1 + 1/s1,

one has w(x(s)) = s + 1/s on the uniformized curve, so C_k(w) with the
Chebyshev-style basis C_k(s + 1/s) = s^k + s^{-k} is invariant under both
deck transformations.  We normalize

    omega(x) = -(1/4) [C_k(w(x)) - C_k(w(0))],

which pins omega(0) = 0 and reproduces the worked constants of the
source text (simple walk: -2x/(1-x)^2, tandem: -(27/4) x^2/(1-x)^3 ...).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import errors
from .algebra import (
    ONE,
    ZERO,
    BiPoly,
    QuadExt,
    RatFunc1,
    RatFunc2,
    UniPoly,
    collapse,
    divide_by_kernel,
    rat,
)
from .curve import CurveField, _mobius_data
from .model import KernelData, StepModel, discriminant_roots, kernel, theta_info


def chebyshev_like(k: int) -> UniPoly:
    """C_k with C_k(s + 1/s) = s^k + s^{-k}: C_0 = 2, C_1 = w, recurrence
    C_{k+1} = w C_k - C_{k-1}."""
    c0 = UniPoly.const(2)
    c1 = UniPoly.x()
    if k == 0:
        return c0
    for _ in range(k - 1):
        c0, c1 = c1, UniPoly.x() * c1 - c0
    return c1


@dataclass
class ConformalMap:
    model: StepModel
    pi_over_theta: int
    omega: RatFunc1             # rational invariant, omega(0) = 0
    omega_of_xplus: RatFunc1    # omega(X_+(y)) as a rational function of y
    d0: Fraction                # omega(X_+(0)), from the symmetric form
    k00_zero: bool              # K(0,0) == 0 (no north-east step)


def _omega_from_branch_points(x1, x4, k: int) -> RatFunc1:
    A0, A1 = _mobius_data(x1, x4)
    exact_rational = isinstance(A0, (int, Fraction)) and isinstance(A1, (int, Fraction))
    if not exact_rational and k % 2 == 1:
        raise errors.ReconstructionFailed(
            "odd pi/theta with irrational branch points: omega not rational here"
        )
    C = chebyshev_like(k)
    one = UniPoly.const(1)
    xx = UniPoly.x()
    # w = (A1 - A0 x)/(1 - x); evaluate C_k(w) as a rational function
    if exact_rational:
        wn = UniPoly([A1, -A0])  # numerator of w
        wd = one - xx
        num = UniPoly([])
        for j, c in enumerate(C.coeffs):
            num = num + UniPoly.const(c) * wn**j * wd ** (C.degree - j)
        val = RatFunc1(num, wd ** C.degree)
        w0 = rat(A1)
        const = C.eval(w0)
    else:
        # even k: C_k is a polynomial in w^2, whose numerator data is rational
        coeffs2 = [collapse(A1 * A1), collapse(-2 * A0 * A1), collapse(A0 * A0)]
        if any(isinstance(c, QuadExt) for c in coeffs2):
            raise errors.ReconstructionFailed("branch points outside a real quadratic field")
        w2n = UniPoly(coeffs2)
        w2d = (one - xx) ** 2
        num = UniPoly([])
        deg2 = C.degree // 2
        for j in range(deg2 + 1):
            c = C[2 * j]
            num = num + UniPoly.const(c) * w2n**j * w2d ** (deg2 - j)
        val = RatFunc1(num, w2d**deg2)
        w0sq = coeffs2[0]
        const = ZERO
        for j in range(deg2 + 1):
            const = const + C[2 * j] * w0sq**j
    return (val - const) * Fraction(-1, 4)


def omega_rational(m: StepModel) -> ConformalMap:
    """Rational conformal invariant for models with pi/theta in {1,2,3,4,6}.

    omega(X_+) is obtained by reducing omega modulo the kernel in the
    mirrored curve field; the vanishing of the x-linear part there is
    exactly the invariance omega(X_+) = omega(X_-).
    """
    ti = theta_info(m)
    if ti.pi_over_theta is None:
        raise errors.NotIntegerAngle(
            f"pi/theta is not one of 1,2,3,4,6 (cos^2 = {ti.cos_theta_squared})"
        )
    dr = discriminant_roots(m)
    omega = _omega_from_branch_points(dr.x1, dr.x4, ti.pi_over_theta)
    kd = kernel(m)
    mirror = CurveField(
        KernelData(K=kd.K.swap_xy(), a=kd.at, b=kd.bt, c=kd.ct, at=kd.a, bt=kd.b, ct=kd.c)
    )
    reduced = mirror.reduce_ratfunc2(
        RatFunc2(
            BiPoly({(i, 0): c for i, c in enumerate(omega.num.coeffs)}),
            BiPoly({(i, 0): c for i, c in enumerate(omega.den.coeffs)}),
        ).swap_xy()
    )
    if not reduced.beta.is_zero():
        raise errors.ResidualYPart("omega(X_+) != omega(X_-): invariance fails")
    om_xp = reduced.alpha
    if om_xp.den.eval(ZERO) == 0:
        raise errors.PoleAtZero("omega(X_+) has a pole at y = 0; d0 undefined")
    d0 = om_xp.eval(ZERO)
    return ConformalMap(
        model=m,
        pi_over_theta=ti.pi_over_theta,
        omega=omega,
        omega_of_xplus=om_xp,
        d0=d0,
        k00_zero=(kd.K.coeff(0, 0) == 0),
    )


def harmonic_scheme(cm: ConformalMap, k: int):
    """P_k of the all-harmonics theorem: z^k when K(0,0)=0, else the
    z^m (z-d0)^m ladder."""
    z = UniPoly.x()
    if cm.k00_zero:
        return z**k
    m, r = divmod(k, 2)
    if r == 0:
        return z**m * (z - UniPoly.const(cm.d0)) ** m
    return z ** (m + 1) * (z - UniPoly.const(cm.d0)) ** m


def _rf1_in_x(r: RatFunc1) -> RatFunc2:
    return RatFunc2(
        BiPoly({(i, 0): c for i, c in enumerate(r.num.coeffs)}),
        BiPoly({(i, 0): c for i, c in enumerate(r.den.coeffs)}),
    )


def _rf1_in_y(r: RatFunc1) -> RatFunc2:
    return RatFunc2(
        BiPoly({(0, j): c for j, c in enumerate(r.num.coeffs)}),
        BiPoly({(0, j): c for j, c in enumerate(r.den.coeffs)}),
    )


def _apply_upoly(P: UniPoly, arg: RatFunc1) -> RatFunc1:
    out = RatFunc1.const(0)
    for c in reversed(P.coeffs):
        out = out * arg + c
    return out


def harmonic_basis(m: StepModel, k: int, cm: ConformalMap | None = None) -> RatFunc2:
    """H_1^k = (P_k(omega(x)) - P_k(omega(X_+)))/K, exactly.

    The numerator is cleared to a bivariate polynomial and divided by the
    kernel through the structured quadratic division; failure there would
    signal an internal inconsistency.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if cm is None:
        cm = omega_rational(m)
    P = harmonic_scheme(cm, k)
    px = _apply_upoly(P, cm.omega)           # function of x
    py = _apply_upoly(P, cm.omega_of_xplus)  # function of y
    kd = kernel(m)
    diff = _rf1_in_x(px) - _rf1_in_y(py)
    num, den = diff.num, diff.den
    kpoly = kd.K * (ONE / kd.K.content())
    quot = divide_by_kernel(num, kpoly)
    return RatFunc2(quot, den) / (kd.K.content())


def harmonic_seed_series(m: StepModel, k: int, order: int, cm: ConformalMap | None = None):
    """Series expansion of H_1^k around the origin (rational-omega path)."""
    from .algebra import TruncSeries2, series_invert

    H = harmonic_basis(m, k, cm=cm)
    num = TruncSeries2.from_bipoly(H.num, order)
    den = TruncSeries2.from_bipoly(H.den, order)
    return num * series_invert(den)
