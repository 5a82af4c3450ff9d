"""Continuous analogues: Laplace transforms of polyharmonic functions.

A homogeneous transform q(x,y)/(x^a y^a) of degree m is stored as a map
(u, v) -> coefficient for sum c_uv x^{-u} y^{-v} with u + v = -m fixed.
Internally everything reduces to Laurent polynomials in t = x/y over the
quadratic extension containing c+- (the roots of gamma(t, 1) = 0), so
divisions by gamma and the decoupling obstruction are exact.
"""

from __future__ import annotations

import math
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
    TruncSeries1,
    UniPoly,
    collapse,
    scalar_is_zero,
)
from .model import StepModel, theta_info


@dataclass
class ContKernel:
    sigma11: Fraction
    sigma12: Fraction
    sigma22: Fraction
    gamma: BiPoly            # (s11 x^2 + 2 s12 xy + s22 y^2)/2
    c_plus: object           # QuadExt (or Fraction in degenerate cases)
    c_minus: object
    c_modulus_sq: Fraction   # |c+-|^2 = s22/s11
    pi_over_theta: int | None


def cont_kernel(m: StepModel) -> ContKernel:
    ti = theta_info(m)
    s11, s12, s22 = ti.sigma11, ti.sigma12, ti.sigma22
    gamma = BiPoly({(2, 0): s11 / 2, (1, 1): s12, (0, 2): s22 / 2})
    disc = s12 * s12 - s11 * s22
    cp = QuadExt.of(-s12 / s11, Fraction(1) / s11, disc)
    cm = QuadExt.of(-s12 / s11, Fraction(-1) / s11, disc)
    return ContKernel(
        sigma11=s11, sigma12=s12, sigma22=s22, gamma=gamma,
        c_plus=cp, c_minus=cm, c_modulus_sq=s22 / s11,
        pi_over_theta=ti.pi_over_theta,
    )


class LaplaceForm:
    """Homogeneous rational form sum c_uv x^{-u} y^{-v}."""

    __slots__ = ("terms", "degree")

    def __init__(self, terms: dict):
        t = {k: v for k, v in terms.items() if not scalar_is_zero(v)}
        degs = {-(u + v) for u, v in t}
        if len(degs) > 1:
            raise ValueError(f"inhomogeneous Laplace form: degrees {degs}")
        self.terms = t
        self.degree = degs.pop() if degs else None

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, LaplaceForm):
            return NotImplemented
        return self.terms == other.terms

    def __add__(self, other):
        t = dict(self.terms)
        for k, v in other.terms.items():
            s = t.get(k, ZERO) + v
            if scalar_is_zero(s):
                t.pop(k, None)
            else:
                t[k] = s
        return LaplaceForm(t)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        return LaplaceForm({k: v * c for k, v in self.terms.items()})

    def eval_ray(self, c):
        """Value coefficient of the restriction x = c*y: sum c_uv c^{-u},
        so that L(c y, y) = (that) * y^degree."""
        out = None
        for (u, v), coeff in self.terms.items():
            term = coeff * _qpow(c, -u)
            out = term if out is None else out + term
        return ZERO if out is None else out

    def proportional_scalar(self, other: "LaplaceForm"):
        """c with self = c*other, or None."""
        if self.is_zero() or other.is_zero():
            return None
        if set(self.terms) != set(other.terms):
            return None
        items = iter(self.terms.items())
        k0, v0 = next(items)
        c = collapse(v0 / other.terms[k0])
        for k, v in self.terms.items():
            if not scalar_is_zero(collapse(v - c * other.terms[k])):
                return None
        return c

    def render(self) -> str:
        """Single rational expression q(x,y)/(x^a y^a)."""
        if not self.terms:
            return "0"
        a = max(u for u, _ in self.terms)
        b = max(v for _, v in self.terms)
        parts = []
        for (u, v) in sorted(self.terms, key=lambda k: (k[0], k[1])):
            cv = self.terms[(u, v)]
            mono = []
            if a - u:
                mono.append(f"x^{a-u}" if a - u > 1 else "x")
            if b - v:
                mono.append(f"y^{b-v}" if b - v > 1 else "y")
            mstr = "*".join(mono) or "1"
            parts.append(f"({cv})*{mstr}")
        num = " + ".join(parts)
        return f"({num})/(x^{a}*y^{b})"

    def __repr__(self):
        return f"LaplaceForm({self.render()})"


@dataclass
class Monomial:
    """beta * x^exponent (exponent may be negative)."""

    beta: object
    exponent: int

    def is_zero(self):
        return scalar_is_zero(self.beta)


def _qpow(c, k: int):
    out = Fraction(1)
    base = c if k >= 0 else 1 / c
    for _ in range(abs(k)):
        out = out * base
    return out


# -- t = x/y Laurent helpers --------------------------------------------------


def _to_laurent(L: LaplaceForm):
    """(coeff dict exponent->scalar in t, y-degree), L = y^deg * f(t)."""
    f = {}
    for (u, v), c in L.terms.items():
        f[-u] = c  # x^{-u} y^{-v} = t^{-u} y^{-(u+v)}
    return f, L.degree


def _from_laurent(f: dict, degree: int) -> LaplaceForm:
    terms = {}
    for e, c in f.items():
        u = -e
        v = -degree - u
        terms[(u, v)] = c
    return LaplaceForm(terms)


def _laurent_div_quadratic(f: dict, q0, q1, q2):
    """Divide the Laurent polynomial f by q0 + q1 t + q2 t^2, exactly.

    Requires f to vanish at t = c+ and t = c-; raises otherwise.
    """
    if not f:
        return {}
    lo = min(f)
    hi = max(f)
    # shift to an ordinary polynomial p(t) = f(t) t^{-lo}
    coeffs = [f.get(e, ZERO) for e in range(lo, hi + 1)]
    # synthetic division by the quadratic, highest first
    n = len(coeffs) - 1
    if n < 2:
        raise errors.NotDivisibleByGamma("numerator too short for the gamma factor")
    out = [ZERO] * (n - 1)
    rem = list(coeffs)
    for k in range(n - 2, -1, -1):
        c = rem[k + 2] / q2
        out[k] = c
        rem[k + 2] = ZERO
        rem[k + 1] = rem[k + 1] - collapse(c * q1)
        rem[k] = rem[k] - collapse(c * q0)
    if not (scalar_is_zero(collapse(rem[0])) and scalar_is_zero(collapse(rem[1]))):
        raise errors.NotDivisibleByGamma(f"gamma does not divide: remainder {rem[:2]}")
    return {e + lo: collapse(c) for e, c in enumerate(out) if not scalar_is_zero(c)}


def cont_harmonic(m: StepModel, k: int, ck: ContKernel | None = None) -> LaplaceForm:
    """L(h_1^k) = (what(x)^k - what(c+ y)^k)/gamma with what(x) = x^{-pi/theta}."""
    if ck is None:
        ck = cont_kernel(m)
    if ck.pi_over_theta is None:
        raise errors.NonIntegerExponent("pi/theta is not an integer here")
    if k == 0:
        return LaplaceForm({})
    q = ck.pi_over_theta
    e = -k * q
    cp, cm = ck.c_plus, ck.c_minus
    # numerator y^{e}(t^{e} - c+^{e}) as a Laurent polynomial in t
    f = {e: ONE, 0: -_qpow(cp, e)}
    quot = _laurent_div_quadratic(f, ck.sigma22 / 2, ck.sigma12, ck.sigma11 / 2)
    out = _from_laurent(quot, e - 2)
    for c in out.terms.values():
        if isinstance(c, QuadExt):
            raise errors.InternalInvariantError("imaginary part failed to cancel in L(h_1^k)")
    return out


def cont_decouple(L: LaplaceForm, ck: ContKernel) -> Monomial:
    """Monomial decoupler of L: beta x^m with
    beta (c+^m - c-^m) = L(c+ y, y) - L(c- y, y); zero when c+^m = c-^m
    (the right side must then vanish -- anything else is an upstream bug).
    """
    if L.is_zero():
        return Monomial(beta=ZERO, exponent=0)
    mdeg = L.degree
    alpha = collapse(L.eval_ray(ck.c_plus) - L.eval_ray(ck.c_minus))
    cpm = collapse(_qpow(ck.c_plus, mdeg) - _qpow(ck.c_minus, mdeg))
    if scalar_is_zero(cpm):
        if not scalar_is_zero(alpha):
            raise errors.ObstructedDecoupling(
                f"c+^m = c-^m but the boundary difference is {alpha}"
            )
        return Monomial(beta=ZERO, exponent=mdeg)
    beta = collapse(alpha / cpm)
    if isinstance(beta, QuadExt):
        raise errors.ObstructedDecoupling(f"decoupling coefficient not real: {beta}")
    return Monomial(beta=beta, exponent=mdeg)


def cont_lift(L: LaplaceForm, f: Monomial, ck: ContKernel) -> LaplaceForm:
    """(L(x,y) - f(x) - [L(c+y, y) - f(c+ y)]) / gamma, exactly."""
    lf, deg = _to_laurent(L)
    lf = dict(lf)
    if not f.is_zero():
        if f.exponent != deg:
            raise errors.NonIntegerExponent("decoupler degree mismatch")
        lf[deg] = lf.get(deg, ZERO) - f.beta
    const = collapse(L.eval_ray(ck.c_plus)) - (
        _qpow(ck.c_plus, f.exponent) * f.beta if not f.is_zero() else ZERO
    )
    lf[0] = collapse(lf.get(0, ZERO) - const)
    lf = {e: c for e, c in lf.items() if not scalar_is_zero(c)}
    quot = _laurent_div_quadratic(lf, ck.sigma22 / 2, ck.sigma12, ck.sigma11 / 2)
    out = _from_laurent(quot, deg - 2)
    for c in out.terms.values():
        if isinstance(c, QuadExt):
            raise errors.InternalInvariantError("imaginary part failed to cancel in the lift")
    return out


def cont_chain(m: StepModel, k: int, n: int):
    """[(L(h_1^k), None), (L(h_2^k), f_1), ...] up to n."""
    ck = cont_kernel(m)
    L = cont_harmonic(m, k, ck)
    chain = [(L, None)]
    for _ in range(n - 1):
        f = cont_decouple(L, ck)
        L = cont_lift(L, f, ck)
        chain.append((L, f))
    return chain


def inverse_laplace(L: LaplaceForm) -> BiPoly:
    """Termwise x^{-u} y^{-v} -> s^{u-1} t^{v-1} / ((u-1)!(v-1)!)."""
    terms = {}
    for (u, v), c in L.terms.items():
        if u < 1 or v < 1 or not isinstance(u, int) or not isinstance(v, int):
            raise errors.NonIntegerExponent(f"term x^{-u} y^{-v} not inverse-transformable")
        c = collapse(c)
        if isinstance(c, QuadExt):
            raise errors.NonIntegerExponent("non-real coefficient")
        terms[(u - 1, v - 1)] = c / (math.factorial(u - 1) * math.factorial(v - 1))
    return BiPoly(terms)


def beltrami(p: BiPoly, ck: ContKernel) -> BiPoly:
    """The Laplace-Beltrami operator on polynomials."""
    pxx = p.derivative_x().derivative_x()
    pxy = p.derivative_x().derivative_y()
    pyy = p.derivative_y().derivative_y()
    return (pxx * ck.sigma11 + pxy * (2 * ck.sigma12) + pyy * ck.sigma22) * Fraction(1, 2)


def continuous_fe_boundary(L_n: LaplaceForm, L_prev: LaplaceForm | None, ck: ContKernel):
    """Check gamma L_n = (s11 L1(y) + s22 L2(x))/2 + L_prev.

    Returns (L1_coeff, L2_coeff) of the boundary transforms
    L2(x) = c2 x^{deg}, L1(y) = c1 y^{deg}; raises if the residual has
    any mixed term.
    """
    lf, deg = _to_laurent(L_n)
    g0, g1, g2 = ck.sigma22 / 2, ck.sigma12, ck.sigma11 / 2
    prod = {}
    for e, c in lf.items():
        for de, gc in ((0, g0), (1, g1), (2, g2)):
            k = e + de
            prod[k] = collapse(prod.get(k, ZERO) + c * gc)
    if L_prev is not None:
        pf, pdeg = _to_laurent(L_prev)
        if pdeg != deg + 2:
            raise errors.InternalInvariantError("chain degrees inconsistent")
        for e, c in pf.items():
            prod[e] = collapse(prod.get(e, ZERO) - c)
    prod = {e: c for e, c in prod.items() if not scalar_is_zero(c)}
    # gamma L_n is homogeneous of degree deg + 2 = -(a) => t-exponents:
    # pure-x boundary term ~ t^{deg+2}, pure-y term ~ t^0
    top = deg + 2
    extra = [e for e in prod if e not in (0, top)]
    if extra:
        raise errors.InternalInvariantError(f"functional equation residual at t-powers {extra}")
    c2 = prod.get(top, ZERO) * 2 / ck.sigma22
    c1 = prod.get(0, ZERO) * 2 / ck.sigma11
    return c1, c2


# -- scaling limits ------------------------------------------------------------


def _exp_series(scale: BiPoly, order: int) -> TruncSeries1:
    """exp(mu * scale) as a series in mu with BiPoly coefficients."""
    coeffs = [BiPoly.const(1)]
    cur = BiPoly.const(1)
    for k in range(1, order + 1):
        cur = cur * scale * Fraction(1, k)
        coeffs.append(cur)
    return TruncSeries1(coeffs, order)


def _subst_exp(p: BiPoly, order: int) -> TruncSeries1:
    """p(e^{-mu X}, e^{-mu Y}) as a mu-series with BiPoly(X, Y) coefficients."""
    X = BiPoly.x()
    Y = BiPoly.y()
    out = TruncSeries1([BiPoly.const(0)], order)
    for (i, j), c in p.terms.items():
        out = out + _exp_series((X * (-i) + Y * (-j)), order) * BiPoly.const(c)
    return out


def _leading(series: TruncSeries1):
    for k, c in enumerate(series.coeffs):
        if isinstance(c, BiPoly):
            if not c.is_zero():
                return k, c
        elif c != 0:
            return k, c
    return None, None


def scaling_limit(H: RatFunc2, extra_order: int = 4):
    """Leading Laurent data of H(e^{-mu x}, e^{-mu y}).

    Returns (order, LaplaceForm): mu^{order} H(e^{-mu x}, e^{-mu y}) has a
    finite nonzero limit equal to the form.  The denominator's leading
    mu-coefficient must be a monomial (poles confined to x=1, y=1), else
    NotLaurent is raised.
    """
    order = H.num.total_degree + H.den.total_degree + extra_order
    while True:
        ns = _subst_exp(H.num, order)
        ds = _subst_exp(H.den, order)
        kn, cn = _leading(ns)
        kd, cd = _leading(ds)
        if kn is not None and kd is not None:
            break
        order *= 2
        if order > 512:
            raise errors.NotLaurent("no leading coefficient found")
    if len(cd.terms) != 1:
        raise errors.NotLaurent(f"denominator leading coefficient is not a monomial: {cd}")
    ((du, dv),) = cd.terms
    dc = cd.terms[(du, dv)]
    terms = {}
    for (i, j), c in cn.terms.items():
        terms[(du - i, dv - j)] = c / dc
    return kd - kn, LaplaceForm(terms)


def scaling_limit_decoupling(F: RatFunc1, extra_order: int = 4):
    """(order, Monomial): leading behaviour of F(e^{-mu x})."""
    if F.is_zero():
        return 0, Monomial(beta=ZERO, exponent=0)
    bx_num = BiPoly({(i, 0): c for i, c in enumerate(F.num.coeffs)})
    bx_den = BiPoly({(i, 0): c for i, c in enumerate(F.den.coeffs)})
    order = F.num.degree + F.den.degree + extra_order
    ns = _subst_exp(bx_num, order)
    ds = _subst_exp(bx_den, order)
    kn, cn = _leading(ns)
    kd, cd = _leading(ds)
    if len(cd.terms) != 1 or len(cn.terms) != 1:
        raise errors.NotLaurent("leading coefficients are not monomials")
    ((nu, _),) = cn.terms
    ((du, _),) = cd.terms
    beta = cn.terms[(nu, 0)] / cd.terms[(du, 0)]
    return kd - kn, Monomial(beta=beta, exponent=nu - du)