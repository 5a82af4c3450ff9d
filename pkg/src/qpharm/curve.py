"""The function field of the kernel curve and the group of the walk.

Elements of the curve field are represented y-linearly: alpha(x) +
beta(x) y with rational-function coefficients, reduced via
y^2 = -(b(x) y + c(x))/a(x).  A mirrored instance (x-linear over Q(y))
is obtained by swapping the axes of the kernel.

The group of the walk is generated by the birational involutions

    Phi: (x, y) -> (ct(y)/(at(y) x), y),
    Psi: (x, y) -> (x, c(x)/(a(x) y)),

and finiteness is decided in the strong (birational) sense by iterating
Theta = Phi o Psi.
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
    rat,
    sqrt_exact,
)
from .model import KernelData, StepModel, discriminant_roots, kernel, theta_info


class CurveField:
    """Arithmetic in Q(x)[y] / (a y^2 + b y + c)."""

    def __init__(self, kd: KernelData):
        self.kd = kd
        self.a = RatFunc1.from_poly(kd.a)
        self.b = RatFunc1.from_poly(kd.b)
        self.c = RatFunc1.from_poly(kd.c)
        self.trace_ratio = -self.b / self.a       # Y+ + Y-
        self.norm_ratio = self.c / self.a         # Y+ * Y-

    def elem(self, alpha, beta=None) -> "CurveElem":
        if beta is None:
            beta = RatFunc1.const(0)
        if isinstance(alpha, (int, Fraction)):
            alpha = RatFunc1.const(alpha)
        if isinstance(beta, (int, Fraction)):
            beta = RatFunc1.const(beta)
        return CurveElem(self, alpha, beta)

    def x(self) -> "CurveElem":
        return self.elem(RatFunc1.x())

    def y(self) -> "CurveElem":
        return self.elem(RatFunc1.const(0), RatFunc1.const(1))

    def reduce_bipoly(self, p: BiPoly) -> "CurveElem":
        """Reduce a polynomial in x, y modulo the kernel."""
        out = self.elem(0)
        for coeff in reversed(p.coeffs_in_y()):
            out = out._mul_y() + self.elem(RatFunc1.from_poly(coeff))
        return out

    def reduce_ratfunc2(self, r: RatFunc2) -> "CurveElem":
        num = self.reduce_bipoly(r.num)
        den = self.reduce_bipoly(r.den)
        return num / den

    def eval_ratfunc1_at(self, r: RatFunc1, arg: "CurveElem") -> "CurveElem":
        """r(arg) for a univariate rational function r."""
        num = self.elem(0)
        for c in reversed(r.num.coeffs):
            num = num * arg + self.elem(RatFunc1.const(c))
        den = self.elem(0)
        for c in reversed(r.den.coeffs):
            den = den * arg + self.elem(RatFunc1.const(c))
        return num / den


class CurveElem:
    """alpha(x) + beta(x) y reduced modulo the kernel."""

    __slots__ = ("field", "alpha", "beta")

    def __init__(self, field: CurveField, alpha: RatFunc1, beta: RatFunc1):
        self.field = field
        self.alpha = alpha
        self.beta = beta

    def is_zero(self) -> bool:
        return self.alpha.is_zero() and self.beta.is_zero()

    def is_rational(self) -> bool:
        return self.beta.is_zero()

    def __eq__(self, other):
        if not isinstance(other, CurveElem):
            return NotImplemented
        return self.alpha == other.alpha and self.beta == other.beta

    def __add__(self, other):
        if isinstance(other, (int, Fraction, RatFunc1)):
            other = self.field.elem(other)
        return CurveElem(self.field, self.alpha + other.alpha, self.beta + other.beta)

    __radd__ = __add__

    def __neg__(self):
        return CurveElem(self.field, -self.alpha, -self.beta)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, RatFunc1)):
            other = self.field.elem(other)
        return self + (-other)

    def _mul_y(self) -> "CurveElem":
        # (alpha + beta y) y = -beta c/a + (alpha - beta b/a) y
        f = self.field
        return CurveElem(
            f,
            -self.beta * f.norm_ratio,
            self.alpha + self.beta * f.trace_ratio,
        )

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, RatFunc1)):
            return CurveElem(self.field, self.alpha * other, self.beta * other)
        f = self.field
        a1, b1, a2, b2 = self.alpha, self.beta, other.alpha, other.beta
        # y^2 = -(b/a) y - c/a
        yy_beta = f.trace_ratio
        yy_alpha = -f.norm_ratio
        bb = b1 * b2
        return CurveElem(
            f,
            a1 * a2 + bb * yy_alpha,
            a1 * b2 + a2 * b1 + bb * yy_beta,
        )

    __rmul__ = __mul__

    def conj(self) -> "CurveElem":
        """Galois conjugate over Q(x): y -> -b/a - y."""
        f = self.field
        return CurveElem(f, self.alpha + self.beta * f.trace_ratio, -self.beta)

    def norm(self) -> RatFunc1:
        """self * conj(self), a rational function of x."""
        f = self.field
        return (
            self.alpha * self.alpha
            + self.alpha * self.beta * f.trace_ratio
            + self.beta * self.beta * f.norm_ratio
        )

    def trace(self) -> RatFunc1:
        return 2 * self.alpha + self.beta * self.field.trace_ratio

    def inverse(self) -> "CurveElem":
        n = self.norm()
        if n.is_zero():
            raise ZeroDivisionError("element is a zero divisor (lies on the curve?)")
        co = self.conj()
        return CurveElem(self.field, co.alpha / n, co.beta / n)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, RatFunc1)):
            return CurveElem(self.field, self.alpha / other, self.beta / other)
        return self * other.inverse()

    def __repr__(self):
        return f"CurveElem({self.alpha!r} + ({self.beta!r})*y)"


# ---------------------------------------------------------------------------
# The group of the walk
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GroupMap:
    """A birational map of the plane, as a pair of rational functions."""

    xmap: RatFunc2
    ymap: RatFunc2

    def __call__(self, other: "GroupMap") -> "GroupMap":
        """Composition self after other."""
        return GroupMap(
            self.xmap.compose_pair(other.xmap, other.ymap),
            self.ymap.compose_pair(other.xmap, other.ymap),
        )

    def apply_point(self, x, y):
        return self.xmap.eval(x, y), self.ymap.eval(x, y)

    def is_identity(self) -> bool:
        return self.xmap == RatFunc2.x() and self.ymap == RatFunc2.y()


def generators(m: StepModel):
    kd = kernel(m)
    x, y = RatFunc2.x(), RatFunc2.y()

    def upoly_x(p):
        return RatFunc2.from_poly(BiPoly({(i, 0): c for i, c in enumerate(p.coeffs)}))

    def upoly_y(p):
        return RatFunc2.from_poly(BiPoly({(0, j): c for j, c in enumerate(p.coeffs)}))

    phi = GroupMap(upoly_y(kd.ct) / (upoly_y(kd.at) * x), y)
    psi = GroupMap(x, upoly_x(kd.c) / (upoly_x(kd.a) * y))
    return phi, psi


@dataclass
class GroupInfo:
    finite: bool
    order: int | None                 # 2n when finite
    bound: int
    theta: GroupMap
    phi: GroupMap
    psi: GroupMap
    elements: list                    # (name, GroupMap, sign)
    field: CurveField
    element_images: list              # (name, (CurveElem, CurveElem), sign)
    model: StepModel = None


_WITNESS_POINTS = [(3, 5), (7, 11), (13, 8), (23, 41), (5, 29)]
_MOD_PRIMES = [(1 << 61) - 1, 4611686018427387847]


def _eval_mod(p: RatFunc2, x: int, y: int, mod: int) -> int:
    """Evaluate a RatFunc2 at integer points modulo a prime."""

    def poly(q: BiPoly) -> int:
        acc = 0
        for (i, j), c in q.terms.items():
            t = c.numerator % mod
            if c.denominator != 1:
                t = t * pow(c.denominator, -1, mod)
            acc = (acc + t * pow(x, i, mod) * pow(y, j, mod)) % mod
        return acc

    num = poly(p.num)
    den = poly(p.den)
    if den == 0:
        raise ZeroDivisionError
    return num * pow(den, -1, mod) % mod


def _theta_order(theta: GroupMap, bound: int):
    """Smallest n <= bound with Theta^n = id (as birational maps), else None.

    A witness-point orbit over GF(p) certifies Theta^k != id cheaply
    (inequality mod p implies inequality over Q when no pole is hit);
    candidate closures are confirmed by exact symbolic composition.
    """
    for mod in _MOD_PRIMES:
        for pt in _WITNESS_POINTS:
            try:
                closures = []
                x, y = pt
                for k in range(1, bound + 1):
                    x, y = (
                        _eval_mod(theta.xmap, x, y, mod),
                        _eval_mod(theta.ymap, x, y, mod),
                    )
                    if (x, y) == pt:
                        closures.append(k)
                if not closures:
                    return None  # certified: no k <= bound closes the orbit
                for k in closures:
                    cur = theta
                    for _ in range(k - 1):
                        cur = theta(cur)
                    if cur.is_identity():
                        return k
                return None
            except ZeroDivisionError:
                continue
    # every witness hit a pole: fall back to symbolic iteration
    cur = theta
    for k in range(1, bound + 1):
        if cur.is_identity():
            return k
        cur = theta(cur)
    return None


def group_orbit(m: StepModel, bound: int = 12) -> GroupInfo:
    """The group of the walk, finite (order 2n) or bound-exceeded."""
    phi, psi = generators(m)
    theta = phi(psi)
    n = _theta_order(theta, bound)
    kd = kernel(m)
    field = CurveField(kd)
    if n is None:
        return GroupInfo(
            finite=False, order=None, bound=bound, theta=theta, phi=phi, psi=psi,
            elements=[], field=field, element_images=[], model=m,
        )
    elements = []
    cur = GroupMap(RatFunc2.x(), RatFunc2.y())
    for k in range(n):
        name = "id" if k == 0 else f"Theta^{k}" if k > 1 else "Theta"
        elements.append((name, cur, +1))
        elements.append((f"Phi*{name}" if k else "Phi", phi(cur), -1))
        cur = theta(cur)
    images = []
    for name, gm, sign in elements:
        xe = field.reduce_ratfunc2(gm.xmap)
        ye = field.reduce_ratfunc2(gm.ymap)
        images.append((name, (xe, ye), sign))
    return GroupInfo(
        finite=True, order=2 * n, bound=bound, theta=theta, phi=phi, psi=psi,
        elements=elements, field=field, element_images=images, model=m,
    )


def _eval_ratfunc2_on_curve(r: RatFunc2, field: CurveField, xe: CurveElem, ye: CurveElem) -> CurveElem:
    """r(xe, ye) in the curve field."""

    def eval_poly(p: BiPoly) -> CurveElem:
        out = field.elem(0)
        # Horner in y with x-polynomial coefficients evaluated at xe
        for coeff in reversed(p.coeffs_in_y()):
            cx = field.elem(0)
            for c in reversed(coeff.coeffs):
                cx = cx * xe + field.elem(RatFunc1.const(c))
            out = out * ye + cx
        return out

    return eval_poly(r.num) / eval_poly(r.den)


def signed_orbit_sum(M: RatFunc2, g: GroupInfo) -> CurveElem:
    """sum over the group of sgn(gamma) gamma(M), reduced on the curve.

    When M has a pole along the curve (a kernel factor in its
    denominator) the sum is formed at the level of plane rational
    functions first; the telescoping of Cor. oSum-type inputs happens
    there, after which the reduction is well defined.
    """
    if not g.finite:
        raise errors.InfiniteGroup("signed orbit sum requires a finite group")
    try:
        out = g.field.elem(0)
        for _name, (xe, ye), sign in g.element_images:
            term = _eval_ratfunc2_on_curve(M, g.field, xe, ye)
            out = out + (term if sign > 0 else -term)
        return out
    except ZeroDivisionError:
        plane = RatFunc2.const(0)
        for _name, gm, sign in g.elements:
            term = M.compose_pair(gm.xmap, gm.ymap)
            plane = plane + (term if sign > 0 else -term)
        return g.field.reduce_ratfunc2(plane)


def decoupling_function(M: RatFunc2, g: GroupInfo) -> RatFunc1:
    """Rational decoupling function of M via the alternating-orbit formula,
    returned in the functional-equation orientation:

        M(x, y) + F(x) + G(y) == 0  mod K(x, y)  for some G.

    The magnitude comes from the orbit-sum formula
    (1/n) sum_{i=1..n-1} Theta^i [M(x, Y+) + M(x, Y-)] computed in the
    curve field; the orientation is the one the functional equation for
    this kernel requires, and it reproduces the worked decoupling
    constants of the source.  Requires a vanishing signed orbit sum; the
    sum must reduce to a pure function of x.
    """
    if not g.finite:
        raise errors.InfiniteGroup("decoupling requires a finite group")
    osum = signed_orbit_sum(M, g)
    if not osum.is_zero():
        raise errors.OrbitSumNonzero("signed orbit sum of M does not vanish")
    n = g.order // 2
    field = g.field
    m_elem = field.reduce_ratfunc2(M)
    trace = m_elem.trace()  # M(x, Y+) + M(x, Y-) as a function of x
    total = field.elem(0)
    # Theta^i images of x, cached in element_images (entries 2i are Theta^i)
    theta_x = {}
    for name, (xe, _ye), sign in g.element_images:
        if sign > 0:
            if name == "id":
                theta_x[0] = xe
            elif name == "Theta":
                theta_x[1] = xe
            elif name.startswith("Theta^"):
                theta_x[int(name.split("^")[1])] = xe
    for i in range(1, n):
        total = total + field.eval_ratfunc1_at(trace, theta_x[i])
    total = total * Fraction(1, n)
    if not total.beta.is_zero():
        raise errors.ResidualYPart("decoupling sum has a residual y component")
    F = total.alpha
    # a decoupler that is itself a polynomial in the conformal invariant
    # decouples nothing (0 works equally well); normalize those to 0
    if not F.is_zero() and _is_omega_polynomial(F, g):
        return RatFunc1.const(0)
    return F


def _pole_order_at_one(r: RatFunc1) -> int:
    t = UniPoly([-ONE, ONE])  # (x - 1)
    den = r.den
    k = 0
    while True:
        q, rem = den.divmod(t)
        if not rem.is_zero():
            return k
        den = q
        k += 1


def _laurent_lead_at_one(r: RatFunc1, order: int):
    """Coefficient of (x-1)^(-order) in r (r has pole order `order` at 1)."""
    t = UniPoly([-ONE, ONE])
    num, den = r.num, r.den
    for _ in range(order):
        den, rem = den.divmod(t)
        assert rem.is_zero()
    return num.eval(ONE) / den.eval(ONE)


def _is_omega_polynomial(F: RatFunc1, g: GroupInfo) -> bool:
    """Exact test whether F is a polynomial in the conformal invariant.

    Requires F's poles to be confined to x = 1 (true for every decoupler
    produced here); returns False when a rational omega is unavailable.
    """
    from . import errors as _errors
    from .conformal import omega_rational

    try:
        omega = omega_rational(g.model).omega
    except _errors.QpharmError:
        return False
    k = _pole_order_at_one(omega)
    if k == 0:
        return False
    cur = F
    for _ in range(32):
        T = _pole_order_at_one(cur)
        if cur.den.degree > T:
            return False  # pole away from x = 1
        if T == 0:
            return cur.num.degree <= 0
        if T % k != 0:
            return False
        j = T // k
        lead = _laurent_lead_at_one(cur, T)
        wlead = _laurent_lead_at_one(omega, k) ** j
        cur = cur - (lead / wlead) * omega**j
    return False


def verify_decouples(M: RatFunc2, F: RatFunc1, kd: KernelData):
    """Check Def. of decoupling: reduce M - F(x) mod K in (Q(y))[x].

    Returns the x-free part G(y) if the x-linear remainder part vanishes,
    else raises RemainderNotDecoupled.
    """
    G, lin = reduce_mod_kernel_x(M - RatFunc2(_ratfunc1_as_bipoly_x(F.num), _ratfunc1_as_bipoly_x(F.den)), kd)
    if not lin.is_zero():
        raise errors.RemainderNotDecoupled("x-linear remainder part is nonzero")
    return G


def _ratfunc1_as_bipoly_x(p: UniPoly) -> BiPoly:
    return BiPoly({(i, 0): c for i, c in enumerate(p.coeffs)})


def reduce_mod_kernel_x(M: RatFunc2, kd: KernelData):
    """Reduce M modulo K in the mirrored field (x-linear over Q(y)).

    Returns (G, L): the x-free and x-linear parts, as rational functions
    of y and (y, x-linear coefficient) respectively.
    """
    mirror = CurveField(
        KernelData(
            K=kd.K.swap_xy(),
            a=kd.at, b=kd.bt, c=kd.ct,
            at=kd.a, bt=kd.b, ct=kd.c,
        )
    )
    elem = mirror.reduce_ratfunc2(M.swap_xy())
    return elem.alpha, elem.beta


# ---------------------------------------------------------------------------
# Parametrization of the kernel curve
# ---------------------------------------------------------------------------


@dataclass
class ParamData:
    """Rational uniformization of {K = 0}.

    x(s) = (s^2 - A1 s + 1)/(s^2 - A0 s + 1) up to the branch-point data
    (A0 = s0 + 1/s0, A1 = s1 + 1/s1), y(s) the same in v = rho s + 1/(rho s).
    `swapped` records whether the roles of x and y were exchanged so that
    x4 is finite (the orientation used by the guessing machinery).
    """

    model: StepModel
    swapped: bool
    pi_over_theta: int | None
    x1: object
    x4: object
    y1: object
    y4: object
    A0: object
    A1: object
    At0: object
    At1: object
    s0: object
    s1: object
    s2: object
    s3: object
    rho: object
    q: object
    theta: float
    kernel_oriented: BiPoly

    def _consts(self, s):
        exact = isinstance(s, (int, Fraction)) or isinstance(s, QuadExt)
        if exact:
            return self.A0, self.A1, self.At0, self.At1, self.rho
        return (
            _to_mpc(self.A0), _to_mpc(self.A1),
            _to_mpc(self.At0), _to_mpc(self.At1), _to_mpc(self.rho),
        )

    def x_of_s(self, s):
        A0, A1, _, _, _ = self._consts(s)
        w = s + 1 / s
        return (w - A1) / (w - A0)

    def y_of_s(self, s):
        _, _, At0, At1, rho = self._consts(s)
        v = rho * s + 1 / (rho * s)
        return (v - At1) / (v - At0)

    def dx_ds(self, s):
        A0, A1, _, _, _ = self._consts(s)
        w = s + 1 / s
        dw = 1 - 1 / (s * s)
        return dw * (A1 - A0) / ((w - A0) ** 2)


def _mobius_data(r1, r4):
    """A0, A1 for branch values r1 (at s=1) and r4 (at s=-1); r4 may be None (infinity)."""
    if r4 is None:
        A0 = Fraction(-2)
        A1 = 2 * (1 - 2 * r1)
        return A0, A1
    s = r1 + r4
    p = r1 * r4
    A0 = collapse((4 - 2 * s) / (r4 - r1))
    A1 = collapse(2 * (s - 2 * p) / (r4 - r1))
    return A0, A1


def _s_from_A(A, sign=-1):
    """Solve s + 1/s = A: s = (A + sign*sqrt(A^2-4))/2, exact when possible."""
    import mpmath

    if isinstance(A, (int, Fraction)):
        disc = A * A - 4
        r = sqrt_exact(rat(disc)) if disc >= 0 else None
        if r is not None:
            return (A + sign * r) / 2
        return QuadExt.of(rat(A) / 2, Fraction(sign, 2), disc)
    a = _to_mpc(A)
    return (a + sign * mpmath.sqrt(a * a - 4)) / 2


def _exact_root_of_unity(k: int, power: int):
    """exp(2 pi i power / (2k))-style values for q = e^{2i theta}, rho = e^{-i theta}.

    Returns exact Fraction/QuadExt when the value lies in a single
    quadratic extension, else None.
    """
    import math as _m

    angle = _m.pi * power / k
    c, s = _m.cos(angle), _m.sin(angle)
    table = {
        (1, 0): Fraction(1), (-1, 0): Fraction(-1),
        (0, 1): QuadExt(0, 1, -1), (0, -1): QuadExt(0, -1, -1),
    }
    for (cv, sv), val in table.items():
        if abs(c - cv) < 1e-12 and abs(s - sv) < 1e-12:
            return val
    # half-integer cos/sin sqrt3 combinations
    for ch in (Fraction(1, 2), Fraction(-1, 2)):
        for sh_sign in (1, -1):
            if abs(c - float(ch)) < 1e-12 and abs(s - sh_sign * _m.sqrt(3) / 2) < 1e-12:
                return QuadExt(ch, Fraction(sh_sign, 2), -3)
    return None


def parametrize(m: StepModel, precision: int = 256) -> ParamData:
    """Uniformization x(s), y(s) with x(s)=x(1/s), y(s)=y(q/s), K(x,y)=0.

    The axes are swapped when necessary so that the x-side branch point
    x4 is finite (the orientation the boundary-value rewriting assumes).
    Scalars stay exact (Fraction/QuadExt) whenever the discriminant data
    allows; otherwise high-precision complex values are used.
    """
    import mpmath

    ti = theta_info(m)
    dr = discriminant_roots(m)
    swapped = dr.x4 is None and dr.y4 is not None
    mm = m.transpose() if swapped else m
    if swapped:
        x1, x4, y1, y4 = dr.y1, dr.y4, dr.x1, dr.x4
    else:
        x1, x4, y1, y4 = dr.x1, dr.x4, dr.y1, dr.y4
    A0, A1 = _mobius_data(x1, x4)
    At0, At1 = _mobius_data(y1, y4)
    k = ti.pi_over_theta
    rho = _exact_root_of_unity(k, -1) if k else None
    q = _exact_root_of_unity(k, 2) if k else None
    with mpmath.workprec(precision):
        if rho is None:
            rho = mpmath.exp(-1j * mpmath.mpf(ti.theta_numeric))
        if q is None:
            q = mpmath.exp(2j * mpmath.mpf(ti.theta_numeric))
        theta_val = ti.theta_numeric
    pd = ParamData(
        model=m, swapped=swapped, pi_over_theta=k,
        x1=x1, x4=x4, y1=y1, y4=y4,
        A0=A0, A1=A1, At0=At0, At1=At1,
        s0=_s_from_A(A0), s1=_s_from_A(A1), s2=_s_from_A(At0), s3=_s_from_A(At1),
        rho=rho, q=q, theta=theta_val,
        kernel_oriented=kernel(mm).K,
    )
    _check_parametrization(pd, precision)
    return pd


def _to_mpc(v):
    import mpmath

    if isinstance(v, int):
        return mpmath.mpf(v)
    if isinstance(v, Fraction):
        return mpmath.mpf(v.numerator) / v.denominator
    if isinstance(v, QuadExt):
        d = mpmath.mpf(v.d.numerator) / v.d.denominator
        root = 1j * mpmath.sqrt(-d) if v.d < 0 else mpmath.sqrt(d)
        return _to_mpc(v.a) + _to_mpc(v.b) * root
    return mpmath.mpc(v)


def _check_parametrization(pd: ParamData, precision: int):
    """Residual checks of the defining identities at sample points."""
    import mpmath

    with mpmath.workprec(precision):
        tol = mpmath.mpf(2) ** (-precision // 2)
        K = pd.kernel_oriented
        A0, A1 = _to_mpc(pd.A0), _to_mpc(pd.A1)
        At0, At1 = _to_mpc(pd.At0), _to_mpc(pd.At1)
        rho, q = _to_mpc(pd.rho), _to_mpc(pd.q)

        def xs(s):
            w = s + 1 / s
            return (w - A1) / (w - A0)

        def ys(s):
            v = rho * s + 1 / (rho * s)
            return (v - At1) / (v - At0)

        def kval(x, y):
            out = mpmath.mpc(0)
            for (i, j), c in K.terms.items():
                out += _to_mpc(c) * x**i * y**j
            return out

        for sv in (mpmath.mpc("1.7", "0.3"), mpmath.mpc("0.4", "-1.1"), mpmath.mpc("2.3", "0.0")):
            x, y = xs(sv), ys(sv)
            if abs(kval(x, y)) > tol * 100:
                raise errors.PrecisionExhausted(
                    f"K(x(s), y(s)) residual {abs(kval(x, y))} at s={sv}"
                )
            if abs(xs(1 / sv) - x) > tol * 100:
                raise errors.PrecisionExhausted("x(1/s) != x(s)")
            if abs(ys(q / sv) - y) > tol * 100:
                raise errors.PrecisionExhausted("y(q/s) != y(s)")
