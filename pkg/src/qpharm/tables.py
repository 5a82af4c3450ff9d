"""Worked-example data: the simple-walk asymptotic decompositions.

The printed asymptotic coefficients v_1, v_2, v_3 of the simple walk and
their decompositions over the polyharmonic basis.  The basis elements
carry explicit rational normalization scalars relative to the pipeline
objects (reported here; the pipeline itself is normalized so that the
printed H_1^1, H_2^1, H_3^1 values come out with scalar one).
"""

from __future__ import annotations

from fractions import Fraction

from .conformal import harmonic_basis
from .curve import group_orbit
from .model import builtin_model
from .pipelines import decompose_in_basis, lift_rational, poly_to_gf

# lattice polynomials of Eqs. (v1)-(v3), as {(a,b): coeff of i^a j^b}
V1_POLY = {(1, 1): 1, (1, 0): 1, (0, 1): 1, (0, 0): 1}


def _expand(factors):
    out = {(0, 0): Fraction(1)}
    for f in factors:
        new = {}
        for (a1, b1), c1 in out.items():
            for (a2, b2), c2 in f.items():
                k = (a1 + a2, b1 + b2)
                new[k] = new.get(k, Fraction(0)) + Fraction(c1) * Fraction(c2)
        out = new
    return out


_IP1 = {(1, 0): 1, (0, 0): 1}
_JP1 = {(0, 1): 1, (0, 0): 1}

V2_POLY = _expand(
    [_IP1, _JP1, {(0, 0): 15, (1, 0): 4, (2, 0): 2, (0, 1): 4, (0, 2): 2}]
)
V3_POLY = _expand(
    [
        _IP1,
        _JP1,
        {
            (0, 0): 317, (3, 0): 16, (4, 0): 4,
            (0, 1): 168, (0, 2): 100, (0, 3): 16, (0, 4): 4,
            (1, 0): 168, (1, 1): 32, (1, 2): 16,
            (2, 0): 100, (2, 1): 16, (2, 2): 8,
        },
    ]
)

# normalization scalars of the printed basis relative to the pipeline
# objects (mu: printed element = mu * pipeline object)
V2_BASIS_SCALARS = (Fraction(-2), Fraction(-2), Fraction(-1, 32))
V3_BASIS_SCALARS = (
    Fraction(1, 2), Fraction(1, 2), Fraction(-1, 2),
    Fraction(1, 2), Fraction(-1, 2), Fraction(-1, 128),
)

V2_COEFFS = (Fraction(3, 8), Fraction(-3, 8), Fraction(60))
V3_COEFFS = (
    Fraction(-24), Fraction(24), Fraction(72),
    Fraction(-30), Fraction(-72), Fraction(5072),
)

V2_LABELS = ("H_2^1", "H_1^2", "H_1^1")
V3_LABELS = ("H_3^1", "H_2^2", "H_2^1", "H_1^3", "H_1^2", "H_1^1")


def simple_walk_bases():
    """Pipeline objects underlying the printed simple-walk basis.

    Returns (v2_basis, v3_basis): lists of RatFunc2 already carrying the
    printed normalization scalars.
    """
    m = builtin_model("simple")
    g = group_orbit(m)
    H1 = harmonic_basis(m, 1)
    A2 = harmonic_basis(m, 2)
    A3 = harmonic_basis(m, 3)
    _, lift1 = lift_rational(m, H1, g)   # y-heavy biharmonic
    _, lift2 = lift_rational(m, lift1, g)
    _, mix = lift_rational(m, A2, g)
    s2 = V2_BASIS_SCALARS
    v2_basis = [lift1 * s2[0], A2 * s2[1], H1 * s2[2]]
    s3 = V3_BASIS_SCALARS
    v3_basis = [
        lift2 * s3[0], mix * s3[1], lift1 * s3[2],
        A3 * s3[3], A2 * s3[4], H1 * s3[5],
    ]
    return v2_basis, v3_basis


def simple_walk_v_decomposition(which: str):
    """Exact decomposition of GF(v_p) over the printed basis."""
    v2_basis, v3_basis = simple_walk_bases()
    if which.upper() == "V2":
        V = poly_to_gf(V2_POLY)
        coeffs = decompose_in_basis(V, v2_basis, order=14)
        return coeffs, V2_LABELS
    if which.upper() == "V3":
        V = poly_to_gf(V3_POLY)
        coeffs = decompose_in_basis(V, v3_basis, order=18)
        return coeffs, V3_LABELS
    raise ValueError(which)
