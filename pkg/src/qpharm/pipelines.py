"""The three discrete constructions of polyharmonic functions.

All lifts are normalized so that Delta H_{n+1} = H_n holds exactly on
grids (with the zero-extension convention).  For the reversed kernel and
the interior-value generating functions used throughout, the functional
equation reads

    K H = K(x,0) H(x,0) + K(0,y) H(0,y) - K(0,0) H(0,0) + xy (Delta H),

with a PLUS on the Laplacian term.  Consequently the decoupling pair
(F, G) attached to a lift satisfies xy H + F(x) + G(y) == 0 mod K; this
orientation reproduces the worked decoupling functions of the source
text, whose displayed orbit-sum formula carries the opposite sign.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import errors
from .algebra import (
    ONE,
    ZERO,
    BiPoly,
    RatFunc1,
    RatFunc2,
    TruncSeries1,
    TruncSeries2,
    UniPoly,
    rat,
    series_invert,
)
from .curve import GroupInfo, decoupling_function, group_orbit, reduce_mod_kernel_x
from .conformal import harmonic_basis, omega_rational
from .model import Grid, StepModel, branch_series, discrete_laplacian, kernel, theta_info


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


@dataclass
class DecouplingPair:
    """F(x), G(y) with xy H + F(x) + G(y) == 0 modulo the kernel."""

    F: RatFunc1
    G: RatFunc1


@dataclass
class PHF:
    """A constructed polyharmonic function with its chain metadata."""

    rep: object              # RatFunc2 or TruncSeries2
    n: int
    k: int
    provenance: str
    model: StepModel
    pair: DecouplingPair | None = None

    @property
    def is_rational(self):
        return isinstance(self.rep, RatFunc2)


# ---------------------------------------------------------------------------
# Rational lift via decoupling
# ---------------------------------------------------------------------------


def lift_rational(m: StepModel, H: RatFunc2, g: GroupInfo | None = None):
    """One step of the finite-group rational lift.

    Returns (pair, H_next) with Delta H_next = H and H_next's boundary
    sections pinned by K(x,0)H_next(x,0) = F(x) - F(0)-type relations.
    """
    if g is None:
        g = group_orbit(m)
    if not g.finite:
        raise errors.GroupInfinite("rational lift needs a finite group")
    kd = kernel(m)
    M = RatFunc2.x() * RatFunc2.y() * H
    F = decoupling_function(M, g)  # FE orientation: M + F + G == 0 mod K
    g_neg, lin = reduce_mod_kernel_x(M + _rf1_in_x(F), kd)
    if not lin.is_zero():
        raise errors.RemainderNotDecoupled("x-linear remainder part is nonzero")
    G = -g_neg
    H_next = (M + _rf1_in_x(F) + _rf1_in_y(G)) / RatFunc2.from_poly(kd.K)
    return DecouplingPair(F=F, G=G), H_next


def lift_chain_rational(m: StepModel, k: int, n: int, g: GroupInfo | None = None):
    """H_1^k .. H_n^k with their decoupling pairs (rational pipeline)."""
    if g is None:
        g = group_orbit(m)
    H = harmonic_basis(m, k)
    chain = [PHF(rep=H, n=1, k=k, provenance="rational", model=m)]
    for step in range(2, n + 1):
        pair, H = lift_rational(m, H, g)
        chain.append(PHF(rep=H, n=step, k=k, provenance="rational", model=m, pair=pair))
    return chain


# ---------------------------------------------------------------------------
# Series lift (general models)
# ---------------------------------------------------------------------------


def _poly_as_series1(p: UniPoly, order: int) -> TruncSeries1:
    return TruncSeries1(list(p.coeffs), order)


def _series2_coeffs_in_x(H: TruncSeries2):
    by_i = {}
    for (i, j), c in H.terms.items():
        by_i.setdefault(i, {})[j] = c
    out = []
    for i in range(0, max(by_i, default=0) + 1):
        row = by_i.get(i, {})
        out.append(TruncSeries1([row.get(j, ZERO) for j in range(H.order + 1)], H.order))
    return out

def _series2_from_coeffs_in_x(cols, order) -> TruncSeries2:
    terms = {}
    for i, s in enumerate(cols):
        for j, c in enumerate(s.coeffs):
            if not c == 0:
                terms[(i, j)] = c
    return TruncSeries2(terms, order)


def divide_series_by_kernel(N: TruncSeries2, m: StepModel) -> TruncSeries2:
    """N/K as a power series when K(0,0) = 0 and dK/dx(0,0) != 0.

    Uses the unit factorization K = (x - X_+(y)) E(x, y) with
    E = at(y) x + bt(y) + at(y) X_+(y); validity of the division is the
    vanishing of N on the branch, which is asserted to the working order.
    """
    order = N.order
    kd = kernel(m)
    xplus = branch_series(m, "X_plus", order)
    at = _poly_as_series1(kd.at, order)
    bt = _poly_as_series1(kd.bt, order)
    e0 = bt + at * xplus                      # x^0 coefficient of E
    e1 = at                                   # x^1 coefficient of E
    # synthetic division of N by (x - X_+)
    cols = _series2_coeffs_in_x(N)
    d = len(cols) - 1
    q = [TruncSeries1.const(ZERO, order) for _ in range(max(d, 1))]
    if d >= 1:
        q[d - 1] = cols[d]
        for i in range(d - 1, 0, -1):
            q[i - 1] = cols[i] + xplus * q[i]
    rem = cols[0] + xplus * q[0] if d >= 1 else cols[0]
    if not rem.is_zero():
        raise errors.NotDivisible(
            "numerator does not vanish on the kernel branch", remainder=rem
        )
    # division by the non-unit (x - X_+) loses one order of validity
    out_order = order - 1
    Q1 = _series2_from_coeffs_in_x(q, order).truncate(out_order)
    # divide by the unit E = e0 + e1 x, column by column in x
    inv_e0 = e0.invert()
    qc = _series2_coeffs_in_x(Q1)
    res_cols = []
    for i in range(len(qc)):
        s = qc[i]
        if i >= 1:
            s = s - e1 * res_cols[i - 1]
        res_cols.append(s * inv_e0)
    return _series2_from_coeffs_in_x(res_cols, out_order)


def lift_series(m: StepModel, H: TruncSeries2, order: int | None = None) -> TruncSeries2:
    """Series lift: H' with Delta H' = H and one boundary section zero.

    Axis selection per the kernel at the origin: K(0,0) != 0 divides
    directly; otherwise x is used when dK/dx(0,0) != 0, else the roles of
    x and y are swapped.
    """
    if order is None:
        order = H.order
    H = H.truncate(order)
    kd = kernel(m)
    xy = TruncSeries2({(1, 1): ONE}, order)
    if kd.K.coeff(0, 0) != 0:
        kinv = series_invert(TruncSeries2.from_bipoly(kd.K, order))
        return xy * H * kinv
    if kd.bt.eval(ZERO) != 0:
        xplus = branch_series(m, "X_plus", order)
        hx = H.subs_x_series_of_y(xplus)            # H(X_+, y)
        boundary = hx * xplus                        # X_+ H(X_+, y), series in y
        byy = TruncSeries2({(0, j + 1): c for j, c in enumerate(boundary.coeffs)}, order)
        N = xy * H - byy
        return divide_series_by_kernel(N, m)
    if kd.b.eval(ZERO) != 0:
        sw = lift_series(m.transpose(), H.swap_xy(), order)
        return sw.swap_xy()
    raise errors.DoubleRootBothAxes(
        "kernel has double roots on both axes at the origin (singular model?)"
    )


def lift_chain_series(m: StepModel, k: int, n: int, order: int) -> list:
    H = harmonic_basis(m, k)
    Hs = expand_ratfunc2(H, order)
    chain = [PHF(rep=Hs, n=1, k=k, provenance="series", model=m)]
    cur = Hs
    for step in range(2, n + 1):
        cur = lift_series(m, cur, order)
        chain.append(PHF(rep=cur, n=step, k=k, provenance="series", model=m))
    return chain


# ---------------------------------------------------------------------------
# pi/theta = 2 closed form
# ---------------------------------------------------------------------------


def closed_form_pi2(m: StepModel, n: int, k: int) -> RatFunc2:
    """Explicit rational basis for pi/theta = 2 with a finite group.

    Obtained by iterating the lift with the zero decoupling function
    (the x-linear remainder must vanish on its own, which is the
    finite-group pi/theta = 2 phenomenon); the pole-shape statement is
    verified on the result.
    """
    ti = theta_info(m)
    if ti.pi_over_theta != 2:
        raise errors.NotPi2("closed form needs pi/theta = 2")
    from .pitheta2 import finite_criterion_pi2

    verdict = finite_criterion_pi2(m)
    if verdict == "infinite":
        raise errors.GroupInfinite("closed form needs a finite group")
    kd = kernel(m)
    H = harmonic_basis(m, k)
    for _ in range(n - 1):
        M = RatFunc2.x() * RatFunc2.y() * H
        g_raw, lin = reduce_mod_kernel_x(M, kd)
        if not lin.is_zero():
            raise errors.RemainderNotDecoupled(
                "zero decoupling fails; model outside the pi/theta=2 finite case"
            )
        H = (M - _rf1_in_y(g_raw)) / RatFunc2.from_poly(kd.K)
    _check_pi2_shape(H, n, k, verdict)
    return H


def _check_pi2_shape(H: RatFunc2, n: int, k: int, verdict: str):
    """Poles confined to x=1, y=1 with the orders of the closed-form claim."""
    den = H.den
    x_ord, y_ord = _pole_orders_at_one(den)
    limit = 2 * (n + k - 1)
    if max(x_ord, y_ord) > limit or x_ord + y_ord > den.total_degree:
        raise errors.InternalInvariantError("unexpected pole structure in pi/theta=2 closed form")


def _pole_orders_at_one(den: BiPoly):
    one_x = BiPoly({(0, 0): ONE, (1, 0): -ONE})
    one_y = BiPoly({(0, 0): ONE, (0, 1): -ONE})
    from .algebra import exact_bipoly_div

    cx = 0
    cur = den
    while True:
        try:
            cur = exact_bipoly_div(cur, one_x)
            cx += 1
        except errors.NotDivisible:
            break
    cy = 0
    while True:
        try:
            cur = exact_bipoly_div(cur, one_y)
            cy += 1
        except errors.NotDivisible:
            break
    return cx, cy


# ---------------------------------------------------------------------------
# Grids, verification, decomposition
# ---------------------------------------------------------------------------


def expand_ratfunc2(H: RatFunc2, order: int) -> TruncSeries2:
    """Series expansion around the origin; fast path for separable
    denominators (products of a polynomial in x and one in y)."""
    den = H.den
    d00 = den.coeff(0, 0)
    if d00 == 0:
        raise errors.OrderTooLow("denominator vanishes at the origin")
    dx = den.subs_y0()
    dy = den.subs_x0()
    sep = BiPoly({(i, 0): c for i, c in enumerate(dx.coeffs)}) * BiPoly(
        {(0, j): c for j, c in enumerate(dy.coeffs)}
    )
    if sep == den * d00:
        ix = TruncSeries1(list(dx.coeffs), order).invert()
        iy = TruncSeries1(list(dy.coeffs), order).invert()
        inv_terms = {}
        for i, ci in enumerate(ix.coeffs):
            if ci == 0:
                continue
            for j in range(0, order + 1 - i):
                cj = iy.coeffs[j]
                if cj == 0:
                    continue
                inv_terms[(i, j)] = ci * cj * d00
        inv = TruncSeries2(inv_terms, order)
    else:
        inv = series_invert(TruncSeries2.from_bipoly(den, order))
    return TruncSeries2.from_bipoly(H.num, order) * inv


def extract_grid(H, window: int) -> Grid:
    """Grid of coefficients v(i,j) = [x^i y^j] H for 0 <= i,j <= window-1."""
    need = 2 * (window - 1)
    if isinstance(H, PHF):
        H = H.rep
    if isinstance(H, RatFunc2):
        s = expand_ratfunc2(H, need)
    elif isinstance(H, TruncSeries2):
        if H.order < need:
            raise errors.OrderTooLow(
                f"series order {H.order} < {need} required for a {window}x{window} grid"
            )
        s = H
    else:
        raise TypeError("expected PHF, RatFunc2 or TruncSeries2")
    return Grid([[s.terms.get((i, j), ZERO) for j in range(window)] for i in range(window)])


@dataclass
class PolyharmonicReport:
    degree: int
    window: int
    passed: bool
    violations: list
    iterates_max: list  # max |entry| of Delta^p for p = 1..degree


def verify_polyharmonic(grid: Grid, m: StepModel, degree: int, window: int | None = None) -> PolyharmonicReport:
    """Check Delta^degree(grid) = 0 with zero extension, listing violations."""
    g = grid
    maxes = []
    for _ in range(degree):
        g = discrete_laplacian(g, m)
        maxes.append(g.max_abs())
    violations = []
    for i in range(g.ni if window is None else min(window, g.ni)):
        for j in range(g.nj if window is None else min(window, g.nj)):
            if g.rows[i][j] != 0:
                violations.append((i, j, g.rows[i][j]))
    return PolyharmonicReport(
        degree=degree,
        window=g.ni,
        passed=not violations,
        violations=violations[:16],
        iterates_max=maxes,
    )


def chain_verifies(chain: list, m: StepModel, window: int = 12) -> bool:
    """Delta(grid of H_{p+1}) == grid of H_p on the common valid window,
    plus Delta-nilpotency of the first chain element."""
    grids = [extract_grid(p, window) for p in chain]
    for p in range(len(chain) - 1):
        lap = discrete_laplacian(grids[p + 1], m)
        for i in range(window - 1):
            for j in range(window - 1):
                if lap.rows[i][j] != grids[p].rows[i][j]:
                    return False
    return verify_polyharmonic(grids[0], m, chain[0].n, window).passed


def decompose_in_basis(V, basis: list, order: int) -> list:
    """Exact coefficients writing V as a combination of the basis.

    V and basis entries may be RatFunc2/TruncSeries2/PHF; everything is
    expanded to `order` and the coefficient system solved exactly.  The
    residual must vanish identically at the working order.
    """

    def as_series(obj):
        if isinstance(obj, PHF):
            obj = obj.rep
        if isinstance(obj, RatFunc2):
            return expand_ratfunc2(obj, order)
        if isinstance(obj, TruncSeries2):
            if obj.order < order:
                raise errors.OrderTooLow("basis element order too low")
            return obj.truncate(order)
        raise TypeError(f"cannot expand {type(obj)}")

    vs = as_series(V)
    bs = [as_series(b) for b in basis]
    keys = sorted(
        {k for s in bs for k in s.terms} | set(vs.terms),
        key=lambda ij: (ij[0] + ij[1], ij[0]),
    )
    rows = [[s.terms.get(kk, ZERO) for s in bs] + [vs.terms.get(kk, ZERO)] for kk in keys]
    ncols = len(bs)
    # exact Gaussian elimination
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        pv = rows[r][c]
        rows[r] = [v / pv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    if len(pivots) < ncols:
        raise errors.SingularSystem(
            f"basis is rank-deficient at order {order} ({len(pivots)}/{ncols})"
        )
    for i in range(r, len(rows)):
        if rows[i][ncols] != 0:
            raise errors.SingularSystem("V is not in the span of the basis at this order")
    coeffs = [ZERO] * ncols
    for i, c in enumerate(pivots):
        coeffs[c] = rows[i][ncols]
    # exact residual check
    res = vs
    for cf, s in zip(coeffs, bs):
        res = res - s * cf
    if not res.is_zero():
        raise errors.SingularSystem("nonzero residual after decomposition")
    return coeffs


def _split_pole_factors(den: BiPoly):
    """Write den = rest * (1-x)^a (1-y)^b with maximal a, b."""
    from .algebra import exact_bipoly_div

    one_x = BiPoly({(0, 0): ONE, (1, 0): -ONE})
    one_y = BiPoly({(0, 0): ONE, (0, 1): -ONE})
    a = b = 0
    cur = den
    while True:
        try:
            cur = exact_bipoly_div(cur, one_x)
            a += 1
        except errors.NotDivisible:
            break
    while True:
        try:
            cur = exact_bipoly_div(cur, one_y)
            b += 1
        except errors.NotDivisible:
            break
    return a, b, cur


def fe_residual_zero(m: StepModel, H_next: RatFunc2, H_prev: RatFunc2) -> bool:
    """Exact check of the functional equation

        K H = K(x,0)H(x,0) + K(0,y)H(0,y) - K(0,0)H(0,0) + xy H_prev

    (the +xy orientation this kernel convention satisfies; H_prev is
    Delta H_next).  Assembled over the least common denominator without
    rational-function reduction, so it stays cheap for chain elements
    whose poles sit at x = 1, y = 1.
    """
    kd = kernel(m)
    bx = H_next.section_y0()
    by = H_next.section_x0()
    terms = []  # (numerator BiPoly, a, b, scalar-denominator)

    def add(num: BiPoly, den: BiPoly, negate=False):
        a, b, rest = _split_pole_factors(den)
        if rest.total_degree != 0:
            return None  # fall back outside
        terms.append((-num if negate else num, a, b, rest.coeff(0, 0)))
        return True

    ok = True
    ok = ok and add(kd.K * H_next.num, H_next.den)
    ok = ok and add(
        _uni_to_bi_x(kd.c * bx.num), _uni_to_bi_x(bx.den), negate=True
    )
    ok = ok and add(
        _uni_to_bi_y(kd.ct * by.num), _uni_to_bi_y(by.den), negate=True
    )
    k00 = kd.K.coeff(0, 0)
    if k00 != 0:
        h00 = bx.eval(ZERO)
        terms.append((BiPoly.const(k00 * h00), 0, 0, ONE))
    ok = ok and add(BiPoly({(1, 1): ONE}) * H_prev.num, H_prev.den, negate=True)
    if not ok:
        res = (
            RatFunc2.from_poly(kd.K) * H_next
            - _rf1_in_x(RatFunc1(kd.c, UniPoly.const(1)) * bx)
            - _rf1_in_y(RatFunc1(kd.ct, UniPoly.const(1)) * by)
            + RatFunc2.const(kd.K.coeff(0, 0) * bx.eval(ZERO))
            - RatFunc2.x() * RatFunc2.y() * H_prev
        )
        return res.is_zero()
    A = max(t[1] for t in terms)
    B = max(t[2] for t in terms)
    one_x = BiPoly({(0, 0): ONE, (1, 0): -ONE})
    one_y = BiPoly({(0, 0): ONE, (0, 1): -ONE})
    total = BiPoly({})
    for num, a, b, scal in terms:
        factor = one_x ** (A - a) * one_y ** (B - b)
        total = total + num * factor * (ONE / scal)
    return total.is_zero()


def _uni_to_bi_x(p: UniPoly) -> BiPoly:
    return BiPoly({(i, 0): c for i, c in enumerate(p.coeffs)})


def _uni_to_bi_y(p: UniPoly) -> BiPoly:
    return BiPoly({(0, j): c for j, c in enumerate(p.coeffs)})


def poly_to_gf(p: dict) -> RatFunc2:
    """GF of a polynomial lattice function: sum p(i,j) x^i y^j.

    `p` maps (a, b) -> coefficient of i^a j^b.  The result is rational
    with denominator a product of powers of (1-x) and (1-y).
    """
    max_a = max((a for a, _ in p), default=0)
    max_b = max((b for _, b in p), default=0)
    gf_pow = {}

    def power_gf(a: int) -> RatFunc1:
        # sum_{i>=0} i^a x^i = (x d/dx)^a 1/(1-x)
        if a in gf_pow:
            return gf_pow[a]
        cur = RatFunc1(UniPoly.const(1), UniPoly([ONE, -ONE]))
        for _ in range(a):
            cur = RatFunc1.x() * cur.derivative()
        gf_pow[a] = cur
        return cur

    out = RatFunc2.const(0)
    for (a, b), c in p.items():
        if c == 0:
            continue
        out = out + _rf1_in_x(power_gf(a)) * _rf1_in_y(power_gf(b)) * rat(c)
    return out


def poly_func_to_dict(coeff_map) -> dict:
    """Helper turning {(a,b): c} with rat-parsable c into exact form."""
    return {k: rat(v) for k, v in coeff_map.items()}
