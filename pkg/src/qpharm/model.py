"""Walk-model ingestion and kernel analytics.

A step model is a map (di, dj) -> weight on the eight small steps.  The
kernel used throughout is the reversed one,

    K(x, y) = xy (sum_s p_s x^{-i} y^{-j} - 1) = sum_s p_s x^{1-i} y^{1-j} - xy,

which is quadratic in each variable: K = a(x) y^2 + b(x) y + c(x)
= at(y) x^2 + bt(y) x + ct(y).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

from . import errors
from .algebra import (
    ONE,
    ZERO,
    BiPoly,
    QuadExt,
    Rat,
    TruncSeries1,
    UniPoly,
    quadratic_series_root,
    rat,
    sqrt_exact,
)

STEPS = [(1, 1), (1, 0), (1, -1), (0, -1), (-1, -1), (-1, 0), (-1, 1), (0, 1)]


@dataclass(frozen=True)
class StepModel:
    """Validated zero-drift small-step model."""

    weights: dict
    name: str = ""

    def w(self, di: int, dj: int) -> Fraction:
        return self.weights.get((di, dj), ZERO)

    def transpose(self) -> "StepModel":
        return StepModel(
            weights={(dj, di): c for (di, dj), c in self.weights.items()},
            name=self.name + "^T" if self.name else "",
        )

    def to_json(self) -> str:
        w = {f"{di},{dj}": str(c) for (di, dj), c in sorted(self.weights.items())}
        return json.dumps({"weights": w}, indent=2, sort_keys=True)


def _validate(weights: dict, name: str = "") -> StepModel:
    for (di, dj), c in weights.items():
        if (di, dj) not in STEPS:
            raise errors.BadWeight(f"step ({di},{dj}) is not a small step")
        if c < 0:
            raise errors.BadWeight(f"negative weight for step ({di},{dj})")
    total = sum(weights.values(), ZERO)
    if total != 1:
        raise errors.NotProbability(f"weights sum to {total}, expected 1")
    cyc = [weights.get(s, ZERO) for s in STEPS]
    for k in range(8):
        if cyc[k] == 0 and cyc[(k + 1) % 8] == 0 and cyc[(k + 2) % 8] == 0:
            raise errors.Degenerate("three consecutive zero weights (singular model)")
    dx = sum(di * c for (di, dj), c in weights.items())
    dy = sum(dj * c for (di, dj), c in weights.items())
    if dx != 0 or dy != 0:
        raise errors.NonzeroDrift(f"drift is ({dx}, {dy}), expected (0, 0)")
    return StepModel(weights={k: v for k, v in weights.items() if v != 0}, name=name)


def make_model(weights, name: str = "") -> StepModel:
    """Validate a {(di, dj): weight} mapping (weights parsed via rat())."""
    return _validate({k: rat(v) for k, v in weights.items()}, name)


def load_model(document) -> StepModel:
    """Parse and validate a model from a JSON string / dict / file path."""
    if isinstance(document, str):
        s = document.strip()
        if s.startswith("{"):
            doc = json.loads(s)
        else:
            with open(document) as fh:
                doc = json.load(fh)
    elif isinstance(document, dict):
        doc = document
    else:
        doc = json.load(document)
    if "weights" not in doc:
        raise errors.BadWeight("model document lacks a 'weights' object")
    weights = {}
    for key, val in doc["weights"].items():
        try:
            di_s, dj_s = key.split(",")
            di, dj = int(di_s), int(dj_s)
        except ValueError as exc:
            raise errors.BadWeight(f"bad step key {key!r}") from exc
        try:
            weights[(di, dj)] = rat(val)
        except (ValueError, ZeroDivisionError, TypeError) as exc:
            raise errors.BadWeight(f"bad weight {val!r} for step {key!r}") from exc
    return _validate(weights, name=doc.get("name", ""))


# -- built-in models ---------------------------------------------------------

_BUILTIN = {
    "simple": {(1, 0): "1/4", (-1, 0): "1/4", (0, 1): "1/4", (0, -1): "1/4"},
    "tandem": {(-1, 1): "1/3", (1, 0): "1/3", (0, -1): "1/3"},
    "king": {
        (1, 0): "1/8", (-1, 0): "1/8", (0, 1): "1/8", (0, -1): "1/8",
        (1, 1): "1/8", (1, -1): "1/8", (-1, 1): "1/8", (-1, -1): "1/8",
    },
    "diagonal": {(1, 1): "1/4", (1, -1): "1/4", (-1, 1): "1/4", (-1, -1): "1/4"},
    # The infinite-group pi/theta = 2 example.  The step list is the
    # reversal of the one displayed in the source text; with the reversed
    # kernel convention used here this reproduces the kernel
    # (1 + 2x + 2y + 2x^2 + 2y^2 + 3x^2y^2)/12 - xy that all the circle
    # and boundary-value data refer to.
    "infinite_pi2": {
        (1, 1): "1/12", (1, 0): "1/6", (0, 1): "1/6",
        (-1, 1): "1/6", (1, -1): "1/6", (-1, -1): "1/4",
    },
}


def builtin_model(name: str) -> StepModel:
    if name not in _BUILTIN:
        raise KeyError(f"unknown builtin model {name!r}; have {sorted(_BUILTIN)}")
    return make_model(_BUILTIN[name], name=name)


def builtin_names():
    return sorted(_BUILTIN)


# -- kernel -------------------------------------------------------------------


@dataclass(frozen=True)
class KernelData:
    K: BiPoly
    a: UniPoly   # y^2 coefficient, in x
    b: UniPoly   # y coefficient, in x
    c: UniPoly   # y^0 coefficient, in x
    at: UniPoly  # x^2 coefficient, in y
    bt: UniPoly  # x coefficient, in y
    ct: UniPoly  # x^0 coefficient, in y


def kernel(m: StepModel) -> KernelData:
    terms = {}
    for (di, dj), c in m.weights.items():
        key = (1 - di, 1 - dj)
        terms[key] = terms.get(key, ZERO) + c
    terms[(1, 1)] = terms.get((1, 1), ZERO) - 1
    K = BiPoly(terms)
    ys = K.coeffs_in_y()
    xs = K.coeffs_in_x()

    def pick(lst, k):
        return lst[k] if k < len(lst) else UniPoly([])

    return KernelData(
        K=K,
        a=pick(ys, 2), b=pick(ys, 1), c=pick(ys, 0),
        at=pick(xs, 2), bt=pick(xs, 1), ct=pick(xs, 0),
    )


# -- covariance and the angle -------------------------------------------------


@dataclass(frozen=True)
class ThetaInfo:
    sigma11: Fraction
    sigma12: Fraction
    sigma22: Fraction
    cos_theta_squared: Fraction
    cos_theta_sign: int
    pi_over_theta: int | None
    theta_numeric: float


_EXACT_COS2 = {
    Fraction(1): (-1, 1),   # cos = -1  -> pi/theta = 1
    Fraction(0): (0, 2),    # cos = 0   -> pi/theta = 2
    Fraction(1, 4): (1, 3),
    Fraction(1, 2): (1, 4),
    Fraction(3, 4): (1, 6),
}


def theta_info(m: StepModel) -> ThetaInfo:
    s11 = sum(di * di * c for (di, dj), c in m.weights.items())
    s12 = sum(di * dj * c for (di, dj), c in m.weights.items())
    s22 = sum(dj * dj * c for (di, dj), c in m.weights.items())
    cos2 = s12 * s12 / (s11 * s22)
    sign = 0 if s12 == 0 else (1 if -s12 > 0 else -1)
    k = None
    if cos2 in _EXACT_COS2:
        want_sign, cand = _EXACT_COS2[cos2]
        if sign == want_sign:
            k = cand
    cos_num = -float(s12) / math.sqrt(float(s11) * float(s22))
    theta = math.acos(cos_num)
    return ThetaInfo(
        sigma11=s11, sigma12=s12, sigma22=s22,
        cos_theta_squared=cos2, cos_theta_sign=sign,
        pi_over_theta=k, theta_numeric=theta,
    )


# -- discriminants -------------------------------------------------------------


@dataclass(frozen=True)
class DiscriminantData:
    D: UniPoly        # b^2 - 4ac, vanishes to second order at 1
    Dt: UniPoly       # bt^2 - 4 at ct
    x1: object        # Rat | QuadExt
    x4: object        # Rat | QuadExt | None (None = infinity)
    y1: object
    y4: object
    x_residual: UniPoly  # D / (x-1)^2
    y_residual: UniPoly


def _roots_after_double_one(D: UniPoly):
    """Factor (t-1)^2 out of D and solve the residual (degree <= 2)."""
    one_sq = UniPoly([ONE, -2 * ONE, ONE])  # (t-1)^2
    q, r = D.divmod(one_sq)
    if not r.is_zero():
        raise errors.InternalInvariantError("discriminant lacks the double root at 1")
    if q.degree == 2:
        a2, a1, a0 = q[2], q[1], q[0]
        disc = a1 * a1 - 4 * a2 * a0
        s = sqrt_exact(disc)
        if s is not None:
            r1 = (-a1 - s) / (2 * a2)
            r2 = (-a1 + s) / (2 * a2)
            roots = sorted([r1, r2], key=float)
        else:
            e1 = QuadExt.of(-a1 / (2 * a2), -1 / (2 * a2), disc)
            e2 = QuadExt.of(-a1 / (2 * a2), 1 / (2 * a2), disc)
            roots = sorted([e1, e2], key=float)
    elif q.degree == 1:
        roots = [-q[0] / q[1], None]  # second root at infinity
    else:
        raise errors.InternalInvariantError("unexpected discriminant degree")
    # the small root lies in [-1, 1); the other one outside
    def in_unit(r):
        if r is None:
            return False
        v = float(r)
        return -1 <= v < 1

    if in_unit(roots[0]) and not in_unit(roots[1]):
        small, big = roots
    elif in_unit(roots[1]) and not in_unit(roots[0]):
        small, big = roots[1], roots[0]
    else:
        raise errors.InternalInvariantError(f"cannot label discriminant roots {roots}")
    return small, big, q


def discriminant_roots(m: StepModel) -> DiscriminantData:
    kd = kernel(m)
    D = kd.b * kd.b - 4 * kd.a * kd.c
    Dt = kd.bt * kd.bt - 4 * kd.at * kd.ct
    x1, x4, qx = _roots_after_double_one(D)
    y1, y4, qy = _roots_after_double_one(Dt)
    return DiscriminantData(D=D, Dt=Dt, x1=x1, x4=x4, y1=y1, y4=y4,
                            x_residual=qx, y_residual=qy)


# -- branch series --------------------------------------------------------------


def _poly_as_series(p: UniPoly, order: int) -> TruncSeries1:
    return TruncSeries1(list(p.coeffs), order)


def branch_series(m: StepModel, which: str, order: int) -> TruncSeries1:
    """Series of the small kernel branch: X_+(y) or Y_+(x), value 0 at 0.

    Raises DoubleRoot when the root at the origin is not simple (the
    caller must swap the axes) and NotARoot when 0 is not a branch value
    (models with a north-east step).
    """
    kd = kernel(m)
    if which == "X_plus":
        a, b, c = kd.at, kd.bt, kd.ct
    elif which == "Y_plus":
        a, b, c = kd.a, kd.b, kd.c
    else:
        raise ValueError("which must be 'X_plus' or 'Y_plus'")
    return quadratic_series_root(
        _poly_as_series(a, order), _poly_as_series(b, order), _poly_as_series(c, order),
        ZERO, order,
    )


# -- grids and the discrete Laplacian -------------------------------------------


class Grid:
    """Rectangular array of exact values over (i, j) >= (0, 0).

    Values at negative indices are 0 (Dirichlet zero extension).
    """

    __slots__ = ("rows",)

    def __init__(self, rows):
        self.rows = [list(r) for r in rows]

    @staticmethod
    def from_function(f, ni: int, nj: int) -> "Grid":
        return Grid([[rat(f(i, j)) for j in range(nj)] for i in range(ni)])

    @property
    def ni(self):
        return len(self.rows)

    @property
    def nj(self):
        return len(self.rows[0]) if self.rows else 0

    def get(self, i: int, j: int):
        if i < 0 or j < 0:
            return ZERO
        return self.rows[i][j]

    def __eq__(self, other):
        if not isinstance(other, Grid):
            return NotImplemented
        return self.rows == other.rows

    def shrink(self, di: int, dj: int) -> "Grid":
        return Grid([r[: self.nj - dj] for r in self.rows[: self.ni - di]])

    def max_abs(self):
        return max((abs(v) for r in self.rows for v in r), default=ZERO)

    def scale(self, c) -> "Grid":
        c = rat(c)
        return Grid([[v * c for v in r] for r in self.rows])

    def sub(self, other: "Grid") -> "Grid":
        return Grid(
            [[self.rows[i][j] - other.rows[i][j] for j in range(min(self.nj, other.nj))]
             for i in range(min(self.ni, other.ni))]
        )

    def to_csv(self) -> str:
        lines = ["i,j,value"]
        for i, row in enumerate(self.rows):
            for j, v in enumerate(row):
                lines.append(f"{i},{j},{v}")
        return "\n".join(lines) + "\n"


def discrete_laplacian(grid: Grid, m: StepModel) -> Grid:
    """(Dg)(i,j) = sum_s p_s g((i,j)+s) - g(i,j), zero extension below 0.

    The output window shrinks by one in each positive direction so that
    every referenced cell is inside the input.
    """
    ni, nj = grid.ni - 1, grid.nj - 1
    out = []
    for i in range(ni):
        row = []
        for j in range(nj):
            acc = -grid.get(i, j)
            for (di, dj), c in m.weights.items():
                acc += c * grid.get(i + di, j + dj)
            row.append(acc)
        out.append(row)
    return Grid(out)
