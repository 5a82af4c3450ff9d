"""Exact arithmetic foundation.

Scalars are `fractions.Fraction` (aliased `Rat`) or `QuadExt` elements
a + b*sqrt(d) over a fixed non-square rational d.  On top of those live
dense univariate polynomials (`UniPoly`), reduced rational functions
(`RatFunc1`), sparse bivariate polynomials (`BiPoly`) with their reduced
quotients (`RatFunc2`), and truncated power series in one and two
variables.  Everything is immutable after construction and all operations
are pure.

Canonical forms
---------------
* ``RatFunc1``/``RatFunc2`` are reduced (gcd 1) and the denominator is
  scaled to integer coefficients with content 1 and positive leading
  coefficient (graded-lex leading term for the bivariate case).  Equal
  values therefore have equal representations, which makes golden-file
  tests deterministic.
* Series carry their truncation order explicitly; binary operations
  propagate the weaker order.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .errors import (
    DoubleRoot,
    NoReliableReconstruction,
    NotARoot,
    NotDivisible,
    ZeroConstantTerm,
)

Rat = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


def rat(value) -> Fraction:
    """Parse a rational from int/str/Fraction ("3/4", "-1", 7...)."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def sqrt_exact(q: Fraction):
    """Return sqrt(q) as a Fraction if q is a perfect square, else None."""
    if q < 0:
        return None
    num, den = q.numerator, q.denominator
    rn = math.isqrt(num)
    rd = math.isqrt(den)
    if rn * rn == num and rd * rd == den:
        return Fraction(rn, rd)
    return None


class QuadExt:
    """Element a + b*sqrt(d) of a quadratic extension of Q.

    d is a fixed non-square rational (negative allowed).  Mixed arithmetic
    with ints/Fractions is supported; mixing two different d's raises.
    """

    __slots__ = ("a", "b", "d")

    def __init__(self, a, b, d):
        a, b, d = rat(a), rat(b), rat(d)
        if sqrt_exact(d) is not None:
            raise ValueError(f"discriminant {d} is a rational square; use Rat")
        self.a, self.b, self.d = a, b, d

    # -- helpers -----------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, QuadExt):
            if other.d != self.d:
                raise ValueError("mixing distinct quadratic extensions")
            return other
        if isinstance(other, (int, Fraction)):
            return QuadExt.__new_fast(rat(other), ZERO, self.d)
        return None

    @staticmethod
    def __new_fast(a, b, d):
        obj = object.__new__(QuadExt)
        obj.a, obj.b, obj.d = a, b, d
        return obj

    @staticmethod
    def of(a, b, d):
        """Build a + b*sqrt(d), collapsing to Fraction when b == 0.

        The discriminant is normalized to a squarefree-ish integer by
        pulling rational square factors into b.
        """
        a, b = rat(a), rat(b)
        if b == 0:
            return a
        d = rat(d)
        r = sqrt_exact(d)
        if r is not None:
            return a + b * r
        # sqrt(n/m) = sqrt(n m)/m; then strip square divisors of n m
        n = d.numerator * d.denominator
        b = b / d.denominator
        s = 1
        k = 2
        while k * k <= abs(n) and k <= 100_000:  # cap: normalization is best-effort
            while n % (k * k) == 0:
                n //= k * k
                s *= k
            k += 1
        return QuadExt(a, b * s, n)

    def conj(self):
        return QuadExt.__new_fast(self.a, -self.b, self.d)

    def norm(self) -> Fraction:
        return self.a * self.a - self.b * self.b * self.d

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadExt.__new_fast(self.a + o.a, self.b + o.b, self.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadExt.__new_fast(-self.a, -self.b, self.d)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadExt.__new_fast(self.a - o.a, self.b - o.b, self.d)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadExt.__new_fast(
            self.a * o.a + self.b * o.b * self.d,
            self.a * o.b + self.b * o.a,
            self.d,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero QuadExt")
        inv = QuadExt.__new_fast(o.a / n, -o.b / n, o.d)
        return self * inv

    def __rtruediv__(self, other):
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero QuadExt")
        inv = QuadExt.__new_fast(self.a / n, -self.b / n, self.d)
        return inv * rat(other)

    def __pow__(self, k: int):
        if k < 0:
            return 1 / (self ** (-k))
        out = QuadExt.__new_fast(ONE, ZERO, self.d)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, QuadExt):
            return self.d == other.d and self.a == other.a and self.b == other.b
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def __float__(self):
        if self.d < 0:
            raise ValueError("negative discriminant has no real value")
        return float(self.a) + float(self.b) * math.sqrt(float(self.d))

    def to_complex(self) -> complex:
        if self.d < 0:
            return complex(float(self.a), float(self.b) * math.sqrt(-float(self.d)))
        return complex(float(self), 0.0)

    def __repr__(self):
        return f"({self.a} + {self.b}*sqrt({self.d}))"


def scalar_is_zero(c) -> bool:
    """Zero test across the scalar types used in this package."""
    if isinstance(c, QuadExt):
        return c.a == 0 and c.b == 0
    return c == 0


def collapse(c):
    """Demote a QuadExt with vanishing irrational part to a Fraction."""
    if isinstance(c, QuadExt) and c.b == 0:
        return c.a
    return c


# ---------------------------------------------------------------------------
# Univariate polynomials
# ---------------------------------------------------------------------------


class UniPoly:
    """Dense univariate polynomial over Fraction (or QuadExt) coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        cs = list(coeffs)
        while cs and scalar_is_zero(cs[-1]):
            cs.pop()
        self.coeffs = tuple(cs)

    @staticmethod
    def const(c):
        return UniPoly([rat(c) if isinstance(c, (int, str)) else c])

    @staticmethod
    def x():
        return UniPoly([ZERO, ONE])

    @staticmethod
    def monomial(c, k):
        return UniPoly([ZERO] * k + [c])

    @property
    def degree(self) -> int:
        """Degree, with deg 0 = -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __getitem__(self, k: int):
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return ZERO

    def leading(self):
        if not self.coeffs:
            return ZERO
        return self.coeffs[-1]

    def __eq__(self, other):
        if isinstance(other, UniPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == (() if other == 0 else (rat(other),))
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = UniPoly.const(other)
        if not isinstance(other, UniPoly):
            return NotImplemented
        n = max(len(self.coeffs), len(other.coeffs))
        return UniPoly([self[k] + other[k] for k in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return UniPoly([-c for c in self.coeffs])

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = UniPoly.const(other)
        if not isinstance(other, UniPoly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, QuadExt)):
            return UniPoly([c * other for c in self.coeffs])
        if not isinstance(other, UniPoly):
            return NotImplemented
        if not self.coeffs or not other.coeffs:
            return UniPoly([])
        out = [ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if scalar_is_zero(a):
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return UniPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = UniPoly.const(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def divmod(self, other: "UniPoly"):
        """Euclidean division over the coefficient field."""
        if other.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        q = [ZERO] * max(0, self.degree - other.degree + 1)
        rem = list(self.coeffs)
        dlead = other.leading()
        dn = other.degree
        while len(rem) - 1 >= dn and rem:
            k = len(rem) - 1 - dn
            c = rem[-1] / dlead
            q[k] = c
            for j, oc in enumerate(other.coeffs):
                rem[k + j] = rem[k + j] - c * oc
            while rem and scalar_is_zero(rem[-1]):
                rem.pop()
        return UniPoly(q), UniPoly(rem)

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def _int_coeffs(self):
        """Scale to integer coefficients, dropping the content."""
        den_lcm = 1
        for c in self.coeffs:
            den_lcm = den_lcm * c.denominator // math.gcd(den_lcm, c.denominator)
        ints = [int(c * den_lcm) for c in self.coeffs]
        g = 0
        for v in ints:
            g = math.gcd(g, v)
        if g > 1:
            ints = [v // g for v in ints]
        return ints

    def gcd(self, other: "UniPoly") -> "UniPoly":
        """Monic gcd, via a primitive pseudo-remainder sequence over Z."""
        if self.is_zero():
            return other if other.is_zero() else other * (ONE / other.leading())
        if other.is_zero():
            return self * (ONE / self.leading())
        if not (self.is_rational_coeffs() and other.is_rational_coeffs()):
            a, b = self, other
            while not b.is_zero():
                a, b = b, a % b
            return a * (ONE / a.leading())
        a, b = self._int_coeffs(), other._int_coeffs()
        if len(a) < len(b):
            a, b = b, a
        while b:
            # primitive pseudo-remainder
            da, db = len(a) - 1, len(b) - 1
            lead_b = b[-1]
            r = list(a)
            for _ in range(da - db + 1):
                if len(r) - 1 < db:
                    break
                if r[-1] == 0:
                    r.pop()
                    continue
                lc = r[-1]
                r = [v * lead_b for v in r]
                k = len(r) - 1 - db
                for j in range(db + 1):
                    r[k + j] -= lc * b[j]
                r.pop()
                while r and r[-1] == 0:
                    r.pop()
            g = 0
            for v in r:
                g = math.gcd(g, v)
            if g > 1:
                r = [v // g for v in r]
            a, b = b, r
        lead = Fraction(a[-1])
        return UniPoly([Fraction(v) / lead for v in a])

    def derivative(self) -> "UniPoly":
        return UniPoly([k * c for k, c in enumerate(self.coeffs)][1:])

    def eval(self, x):
        out = None
        for c in reversed(self.coeffs):
            out = c if out is None else out * x + c
        if out is None:
            return ZERO
        return out

    def compose_poly(self, inner: "UniPoly") -> "UniPoly":
        out = UniPoly([])
        for c in reversed(self.coeffs):
            out = out * inner + UniPoly([c])
        return out

    def shift(self, k: int) -> "UniPoly":
        """Multiply by x**k."""
        if self.is_zero():
            return self
        return UniPoly((ZERO,) * k + self.coeffs)

    def content(self) -> Fraction:
        """Positive rational c with self/c integer-primitive (Fraction coeffs only)."""
        if self.is_zero():
            return ONE
        num_gcd = 0
        den_lcm = 1
        for c in self.coeffs:
            num_gcd = math.gcd(num_gcd, abs(c.numerator))
            den_lcm = den_lcm * c.denominator // math.gcd(den_lcm, c.denominator)
        return Fraction(num_gcd, den_lcm)

    def is_rational_coeffs(self) -> bool:
        return all(isinstance(c, (int, Fraction)) for c in self.coeffs)

    def __repr__(self):
        return f"UniPoly({poly1_str(self)})"


def poly1_str(p: UniPoly, var: str = "x") -> str:
    if p.is_zero():
        return "0"
    parts = []
    for k, c in enumerate(p.coeffs):
        if scalar_is_zero(c):
            continue
        if k == 0:
            parts.append(f"{c}")
        elif k == 1:
            parts.append(f"{c}*{var}" if c != 1 else var)
        else:
            parts.append(f"{c}*{var}^{k}" if c != 1 else f"{var}^{k}")
    return " + ".join(parts).replace("+ -", "- ")


class RatFunc1:
    """Reduced univariate rational function over Fraction coefficients.

    Canonical form: gcd(num, den) = 1 and the denominator is integer-
    primitive with positive leading coefficient.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: UniPoly, den: UniPoly):
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            self.num, self.den = UniPoly([]), UniPoly.const(1)
            return
        if den.degree == 0:
            self.num = num * (ONE / den[0])
            self.den = UniPoly.const(1)
            return
        if num.degree > 0:
            g = num.gcd(den)
            if g.degree > 0:
                num = num // g
                den = den // g
        c = den.content()
        if den.leading() < 0:
            c = -c
        self.num = num * (ONE / c)
        self.den = den * (ONE / c)

    @staticmethod
    def const(c):
        return RatFunc1(UniPoly.const(c), UniPoly.const(1))

    @staticmethod
    def from_poly(p: UniPoly):
        return RatFunc1(p, UniPoly.const(1))

    @staticmethod
    def x():
        return RatFunc1(UniPoly.x(), UniPoly.const(1))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_poly(self) -> bool:
        return self.den.degree == 0

    def as_poly(self) -> UniPoly:
        if not self.is_poly():
            raise ValueError("not a polynomial")
        return self.num * (ONE / self.den[0])

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = RatFunc1.const(other)
        if not isinstance(other, RatFunc1):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = RatFunc1.const(other)
        elif isinstance(other, UniPoly):
            other = RatFunc1.from_poly(other)
        if not isinstance(other, RatFunc1):
            return NotImplemented
        return RatFunc1(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        r = object.__new__(RatFunc1)
        r.num, r.den = -self.num, self.den
        return r

    def __sub__(self, other):
        return self + (-other if isinstance(other, RatFunc1) else -RatFunc1.const(other) if isinstance(other, (int, Fraction)) else NotImplemented)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = RatFunc1.const(other)
        elif isinstance(other, UniPoly):
            other = RatFunc1.from_poly(other)
        if not isinstance(other, RatFunc1):
            return NotImplemented
        return RatFunc1(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            other = RatFunc1.const(other)
        elif isinstance(other, UniPoly):
            other = RatFunc1.from_poly(other)
        if not isinstance(other, RatFunc1):
            return NotImplemented
        if other.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RatFunc1(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return RatFunc1.const(other) / self

    def __pow__(self, k: int):
        if k < 0:
            return RatFunc1.const(1) / (self ** (-k))
        out = RatFunc1.const(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def eval(self, x):
        d = self.den.eval(x)
        if scalar_is_zero(d):
            raise ZeroDivisionError("pole at evaluation point")
        return self.num.eval(x) / d

    def compose(self, inner: "RatFunc1") -> "RatFunc1":
        """self(inner(x)), computed exactly."""
        n = max(self.num.degree, self.den.degree)
        num = RatFunc1.const(0)
        den = RatFunc1.const(0)
        p = RatFunc1.const(1)
        for k in range(n + 1):
            num = num + p * self.num[k]
            den = den + p * self.den[k]
            p = p * inner
        return num / den

    def derivative(self) -> "RatFunc1":
        return RatFunc1(
            self.num.derivative() * self.den - self.num * self.den.derivative(),
            self.den * self.den,
        )

    def __repr__(self):
        return f"({poly1_str(self.num)})/({poly1_str(self.den)})"


# ---------------------------------------------------------------------------
# Bivariate polynomials
# ---------------------------------------------------------------------------


def _grlex_key(ij):
    i, j = ij
    return (i + j, i)


class BiPoly:
    """Sparse bivariate polynomial with Fraction coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms):
        if isinstance(terms, dict):
            items = terms.items()
        else:
            items = terms
        t = {}
        for (i, j), c in items:
            if not isinstance(c, Fraction):
                c = rat(c)
            if c == 0:
                continue
            key = (i, j)
            if key in t:
                c = t[key] + c
                if c == 0:
                    del t[key]
                    continue
            t[key] = c
        self.terms = t

    @staticmethod
    def const(c):
        c = rat(c)
        return BiPoly({(0, 0): c} if c else {})

    @staticmethod
    def monomial(c, i, j):
        return BiPoly({(i, j): rat(c)})

    @staticmethod
    def x():
        return BiPoly({(1, 0): ONE})

    @staticmethod
    def y():
        return BiPoly({(0, 1): ONE})

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, BiPoly):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == ({} if other == 0 else {(0, 0): rat(other)})
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def coeff(self, i, j) -> Fraction:
        return self.terms.get((i, j), ZERO)

    @property
    def total_degree(self) -> int:
        return max((i + j for i, j in self.terms), default=-1)

    def degree_x(self) -> int:
        return max((i for i, _ in self.terms), default=-1)

    def degree_y(self) -> int:
        return max((j for _, j in self.terms), default=-1)

    def leading_grlex(self) -> Fraction:
        if not self.terms:
            return ZERO
        return self.terms[max(self.terms, key=_grlex_key)]

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = BiPoly.const(other)
        if not isinstance(other, BiPoly):
            return NotImplemented
        t = dict(self.terms)
        for k, c in other.terms.items():
            s = t.get(k, ZERO) + c
            if s == 0:
                t.pop(k, None)
            else:
                t[k] = s
        out = object.__new__(BiPoly)
        out.terms = t
        return out

    __radd__ = __add__

    def __neg__(self):
        out = object.__new__(BiPoly)
        out.terms = {k: -c for k, c in self.terms.items()}
        return out

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = BiPoly.const(other)
        if not isinstance(other, BiPoly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = rat(other)
            if c == 0:
                return BiPoly({})
            out = object.__new__(BiPoly)
            out.terms = {k: v * c for k, v in self.terms.items()}
            return out
        if not isinstance(other, BiPoly):
            return NotImplemented
        t = {}
        for (i1, j1), c1 in self.terms.items():
            for (i2, j2), c2 in other.terms.items():
                k = (i1 + i2, j1 + j2)
                s = t.get(k, ZERO) + c1 * c2
                if s == 0:
                    t.pop(k, None)
                else:
                    t[k] = s
        out = object.__new__(BiPoly)
        out.terms = t
        return out

    __rmul__ = __mul__

    def __truediv__(self, other):
        c = rat(other)
        return self * (ONE / c)

    def __pow__(self, k: int):
        out = BiPoly.const(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def eval(self, x, y):
        out = None
        for (i, j), c in self.terms.items():
            term = c * x**i * y**j
            out = term if out is None else out + term
        return ZERO if out is None else out

    def swap_xy(self) -> "BiPoly":
        out = object.__new__(BiPoly)
        out.terms = {(j, i): c for (i, j), c in self.terms.items()}
        return out

    def subs_x0(self) -> UniPoly:
        """Section at x = 0, as a polynomial in y."""
        n = max((j for (i, j) in self.terms if i == 0), default=-1)
        cs = [ZERO] * (n + 1)
        for (i, j), c in self.terms.items():
            if i == 0:
                cs[j] = c
        return UniPoly(cs)

    def subs_y0(self) -> UniPoly:
        n = max((i for (i, j) in self.terms if j == 0), default=-1)
        cs = [ZERO] * (n + 1)
        for (i, j), c in self.terms.items():
            if j == 0:
                cs[i] = c
        return UniPoly(cs)

    def coeffs_in_x(self) -> list:
        """Coefficients of x^k as UniPoly in y, k = 0..deg_x."""
        n = self.degree_x()
        rows = [dict() for _ in range(n + 1)]
        for (i, j), c in self.terms.items():
            rows[i][j] = c
        out = []
        for row in rows:
            m = max(row, default=-1)
            out.append(UniPoly([row.get(j, ZERO) for j in range(m + 1)]))
        return out

    def coeffs_in_y(self) -> list:
        """Coefficients of y^k as UniPoly in x, k = 0..deg_y."""
        return self.swap_xy().coeffs_in_x()

    @staticmethod
    def from_coeffs_in_x(coeffs) -> "BiPoly":
        terms = {}
        for i, p in enumerate(coeffs):
            for j, c in enumerate(p.coeffs):
                if c != 0:
                    terms[(i, j)] = c
        return BiPoly(terms)

    def content(self) -> Fraction:
        if not self.terms:
            return ONE
        num_gcd = 0
        den_lcm = 1
        for c in self.terms.values():
            num_gcd = math.gcd(num_gcd, abs(c.numerator))
            den_lcm = den_lcm * c.denominator // math.gcd(den_lcm, c.denominator)
        return Fraction(num_gcd, den_lcm)

    def derivative_x(self) -> "BiPoly":
        return BiPoly({(i - 1, j): c * i for (i, j), c in self.terms.items() if i > 0})

    def derivative_y(self) -> "BiPoly":
        return BiPoly({(i, j - 1): c * j for (i, j), c in self.terms.items() if j > 0})

    def __repr__(self):
        return f"BiPoly({poly2_str(self)})"


def poly2_str(p: BiPoly, vx: str = "x", vy: str = "y") -> str:
    if p.is_zero():
        return "0"
    parts = []
    for (i, j) in sorted(p.terms, key=_grlex_key):
        c = p.terms[(i, j)]
        mono = []
        if i == 1:
            mono.append(vx)
        elif i > 1:
            mono.append(f"{vx}^{i}")
        if j == 1:
            mono.append(vy)
        elif j > 1:
            mono.append(f"{vy}^{j}")
        m = "*".join(mono)
        if not m:
            parts.append(f"{c}")
        elif c == 1:
            parts.append(m)
        elif c == -1:
            parts.append(f"-{m}")
        else:
            parts.append(f"{c}*{m}")
    return " + ".join(parts).replace("+ -", "- ")


def _content_y(p: BiPoly) -> UniPoly:
    """gcd of the x-coefficients, a polynomial in y."""
    g = UniPoly([])
    for c in p.coeffs_in_x():
        g = g.gcd(c)
        if g.degree == 0 and not g.is_zero():
            break
    return g if not g.is_zero() else UniPoly.const(1)


def _primitive_in_y(cols):
    g = UniPoly([])
    for c in cols:
        g = g.gcd(c)
        if g.degree == 0 and not g.is_zero():
            break
    if g.degree > 0:
        cols = [c // g for c in cols]
    return cols, g


def _bipoly_gcd(a: BiPoly, b: BiPoly) -> BiPoly:
    """gcd over Q[x, y] via a primitive PRS in (Q[y])[x].

    Result is primitive with positive graded-lex leading coefficient.
    """
    if a.is_zero():
        return b
    if b.is_zero():
        return a
    if (a.degree_x() == 0 and a.degree_y() == 0) or (b.degree_x() == 0 and b.degree_y() == 0):
        return BiPoly.const(1)
    fa, ca = _primitive_in_y(a.coeffs_in_x())
    fb, cb = _primitive_in_y(b.coeffs_in_x())
    cg = ca.gcd(cb)
    if len(fa) < len(fb):
        fa, fb = fb, fa

    def trim(f):
        while f and f[-1].is_zero():
            f.pop()
        return f

    fa, fb = trim(list(fa)), trim(list(fb))
    while fb:
        db = len(fb) - 1
        lead_b = fb[-1]
        r = list(fa)
        while len(r) - 1 >= db:
            if r[-1].is_zero():
                r.pop()
                continue
            lc = r[-1]
            r = [c * lead_b for c in r]
            k = len(r) - 1 - db
            for j in range(db + 1):
                r[k + j] = r[k + j] - lc * fb[j]
            r.pop()
            trim(r)
        r, _ = _primitive_in_y(trim(r))
        fa, fb = fb, trim(list(r))
    if len(fa) == 1:
        g = BiPoly.from_coeffs_in_x([cg]) if cg.degree > 0 else BiPoly.const(1)
    else:
        g = BiPoly.from_coeffs_in_x(fa)
        if cg.degree > 0:
            g = g * BiPoly.from_coeffs_in_x([cg])
    g = g * (ONE / g.content())
    if g.leading_grlex() < 0:
        g = -g
    return g


class RatFunc2:
    """Reduced bivariate rational function (Fraction coefficients).

    Canonical form: num/den coprime, den content 1 with positive
    graded-lex leading coefficient.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: BiPoly, den: BiPoly):
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            self.num, self.den = BiPoly({}), BiPoly.const(1)
            return
        if den.total_degree == 0:
            self.num = num * (ONE / den.coeff(0, 0))
            self.den = BiPoly.const(1)
            return
        if num.total_degree > 0:
            g = _bipoly_gcd(num, den)
            if g.total_degree > 0:
                num = exact_bipoly_div(num, g)
                den = exact_bipoly_div(den, g)
        c = den.content()
        if den.leading_grlex() < 0:
            c = -c
        self.num = num * (ONE / c)
        self.den = den * (ONE / c)

    @staticmethod
    def const(c):
        return RatFunc2(BiPoly.const(c), BiPoly.const(1))

    @staticmethod
    def from_poly(p: BiPoly):
        return RatFunc2(p, BiPoly.const(1))

    @staticmethod
    def x():
        return RatFunc2.from_poly(BiPoly.x())

    @staticmethod
    def y():
        return RatFunc2.from_poly(BiPoly.y())

    def is_zero(self):
        return self.num.is_zero()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = RatFunc2.const(other)
        if not isinstance(other, RatFunc2):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = RatFunc2.const(other)
        elif isinstance(other, BiPoly):
            other = RatFunc2.from_poly(other)
        if not isinstance(other, RatFunc2):
            return NotImplemented
        return RatFunc2(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        out = object.__new__(RatFunc2)
        out.num, out.den = -self.num, self.den
        return out

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = RatFunc2.const(other)
        elif isinstance(other, BiPoly):
            other = RatFunc2.from_poly(other)
        if not isinstance(other, RatFunc2):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = RatFunc2.const(other)
        elif isinstance(other, BiPoly):
            other = RatFunc2.from_poly(other)
        if not isinstance(other, RatFunc2):
            return NotImplemented
        return RatFunc2(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            other = RatFunc2.const(other)
        elif isinstance(other, BiPoly):
            other = RatFunc2.from_poly(other)
        if not isinstance(other, RatFunc2):
            return NotImplemented
        if other.is_zero():
            raise ZeroDivisionError
        return RatFunc2(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return RatFunc2.const(other) / self

    def __pow__(self, k: int):
        if k < 0:
            return RatFunc2.const(1) / self ** (-k)
        out = RatFunc2.const(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def eval(self, x, y):
        d = self.den.eval(x, y)
        if scalar_is_zero(d):
            raise ZeroDivisionError("pole at evaluation point")
        return self.num.eval(x, y) / d

    def compose_pair(self, xmap: "RatFunc2", ymap: "RatFunc2") -> "RatFunc2":
        """self(xmap, ymap) for birational substitutions."""

        def eval_poly(p: BiPoly):
            out = RatFunc2.const(0)
            xp = {}

            def xpow(k):
                if k not in xp:
                    xp[k] = xmap**k
                return xp[k]

            yp = {}

            def ypow(k):
                if k not in yp:
                    yp[k] = ymap**k
                return yp[k]

            for (i, j), c in p.terms.items():
                out = out + xpow(i) * ypow(j) * c
            return out

        return eval_poly(self.num) / eval_poly(self.den)

    def swap_xy(self) -> "RatFunc2":
        out = object.__new__(RatFunc2)
        num, den = self.num.swap_xy(), self.den.swap_xy()
        if den.leading_grlex() < 0:
            num, den = -num, -den
        out.num, out.den = num, den
        return out

    def section_y0(self) -> RatFunc1:
        """Restriction y = 0 (requires den(x, 0) != 0)."""
        d = self.den.subs_y0()
        if d.is_zero():
            raise ZeroDivisionError("denominator vanishes on y = 0")
        return RatFunc1(self.num.subs_y0(), d)

    def section_x0(self) -> RatFunc1:
        d = self.den.subs_x0()
        if d.is_zero():
            raise ZeroDivisionError("denominator vanishes on x = 0")
        return RatFunc1(self.num.subs_x0(), d)

    def subs_x_ratfunc1(self, r: RatFunc1) -> "RatFunc2":
        """Substitute x -> r(y) (univariate in y), keeping y."""
        rx = RatFunc2(_uni_to_bi_y(r.num), _uni_to_bi_y(r.den))
        return self.compose_pair(rx, RatFunc2.y())

    def __repr__(self):
        return f"({poly2_str(self.num)})/({poly2_str(self.den)})"


def _uni_to_bi_y(p: UniPoly) -> BiPoly:
    return BiPoly({(0, j): c for j, c in enumerate(p.coeffs)})


def _uni_to_bi_x(p: UniPoly) -> BiPoly:
    return BiPoly({(j, 0): c for j, c in enumerate(p.coeffs)})


def exact_bipoly_div(n: BiPoly, d: BiPoly) -> BiPoly:
    """Exact division n/d in Q[x, y]; raises NotDivisible otherwise."""
    if d.is_zero():
        raise ZeroDivisionError
    if n.is_zero():
        return n
    if d.degree_x() == 0 and d.degree_y() == 0:
        return n * (ONE / d.coeff(0, 0))
    # divide as polynomials in x over Q(y)
    nc = [RatFunc1.from_poly(c) for c in n.coeffs_in_x()]
    dc = [RatFunc1.from_poly(c) for c in d.coeffs_in_x()]
    while dc and dc[-1].is_zero():
        dc.pop()
    dn = len(dc) - 1
    if dn < 0:
        raise ZeroDivisionError
    q = [RatFunc1.const(0)] * max(0, len(nc) - dn)
    rem = list(nc)
    while len(rem) - 1 >= dn:
        while rem and rem[-1].is_zero():
            rem.pop()
        if len(rem) - 1 < dn:
            break
        k = len(rem) - 1 - dn
        c = rem[-1] / dc[-1]
        q[k] = c
        for j in range(dn + 1):
            rem[k + j] = rem[k + j] - c * dc[j]
        rem = rem[:-1]
    while rem and rem[-1].is_zero():
        rem.pop()
    if rem:
        raise NotDivisible("bivariate division is not exact", remainder=rem)
    # q has coefficients in Q(y); exactness forces them polynomial
    polys = []
    for c in q:
        if c.den.degree > 0:
            raise NotDivisible("quotient not polynomial", remainder=q)
        polys.append(c.num * (ONE / c.den[0]))
    return BiPoly.from_coeffs_in_x(polys)


# ---------------------------------------------------------------------------
# Structured kernel division (quadratic in one variable)
# ---------------------------------------------------------------------------


def divide_by_kernel(n: BiPoly, k: BiPoly) -> BiPoly:
    """Exact quotient n/k for a kernel k quadratic in x (or in y).

    Division runs in (Q(y))[x]; a nonzero remainder r0(y) + r1(y) x is
    reported through NotDivisible for diagnostics.
    """
    if k.degree_x() == 2:
        pass
    elif k.degree_y() == 2:
        return divide_by_kernel(n.swap_xy(), k.swap_xy()).swap_xy()
    else:
        raise NotDivisible("kernel is not quadratic in either variable", remainder=None)
    try:
        return exact_bipoly_div(n, k)
    except NotDivisible as exc:
        rem = exc.remainder
        raise NotDivisible("kernel does not divide numerator", remainder=rem) from None


# ---------------------------------------------------------------------------
# Truncated power series
# ---------------------------------------------------------------------------


class TruncSeries1:
    """Truncated univariate power series: coefficients c[0..order] known.

    Arithmetic propagates the weaker order.  Coefficients live in any
    commutative ring embedding the rationals (Fraction, QuadExt, BiPoly).
    """

    __slots__ = ("coeffs", "order")

    def __init__(self, coeffs, order: int):
        cs = list(coeffs)[: order + 1]
        cs += [ZERO] * (order + 1 - len(cs))
        self.coeffs = cs
        self.order = order

    @staticmethod
    def const(c, order):
        return TruncSeries1([c], order)

    @staticmethod
    def var(order):
        return TruncSeries1([ZERO, ONE], order)

    def __getitem__(self, k):
        if k > self.order:
            raise IndexError(f"coefficient {k} beyond truncation order {self.order}")
        return self.coeffs[k]

    def truncate(self, order):
        return TruncSeries1(self.coeffs[: order + 1], min(order, self.order))

    def _align(self, other):
        if not isinstance(other, TruncSeries1):
            other = TruncSeries1.const(other, self.order)
        n = min(self.order, other.order)
        return self.truncate(n), other.truncate(n), n

    def __add__(self, other):
        a, b, n = self._align(other)
        return TruncSeries1([x + y for x, y in zip(a.coeffs, b.coeffs)], n)

    __radd__ = __add__

    def __neg__(self):
        return TruncSeries1([-c for c in self.coeffs], self.order)

    def __sub__(self, other):
        a, b, n = self._align(other)
        return TruncSeries1([x - y for x, y in zip(a.coeffs, b.coeffs)], n)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) or (not isinstance(other, TruncSeries1)):
            try:
                return TruncSeries1([c * other for c in self.coeffs], self.order)
            except TypeError:
                return NotImplemented
        a, b, n = self._align(other)
        out = [ZERO] * (n + 1)
        for i, ca in enumerate(a.coeffs):
            if scalar_is_zero(ca):
                continue
            for j in range(0, n + 1 - i):
                cb = b.coeffs[j]
                if scalar_is_zero(cb):
                    continue
                out[i + j] = out[i + j] + ca * cb
        return TruncSeries1(out, n)

    __rmul__ = __mul__

    def invert(self) -> "TruncSeries1":
        c0 = self.coeffs[0]
        if scalar_is_zero(c0):
            raise ZeroConstantTerm("series has zero constant term")
        inv0 = 1 / c0 if not isinstance(c0, BiPoly) else BiPoly.const(ONE / c0.coeff(0, 0))
        out = [inv0] + [ZERO] * self.order
        for k in range(1, self.order + 1):
            s = None
            for j in range(1, k + 1):
                t = self.coeffs[j] * out[k - j]
                s = t if s is None else s + t
            out[k] = -(s * inv0) if s is not None else ZERO
        return TruncSeries1(out, self.order)

    def __truediv__(self, other):
        if isinstance(other, TruncSeries1):
            return self * other.invert()
        return self * (ONE / rat(other))

    def __pow__(self, k: int):
        out = TruncSeries1.const(ONE, self.order)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def compose(self, inner: "TruncSeries1") -> "TruncSeries1":
        """self(inner) where inner has zero constant term."""
        if not scalar_is_zero(inner.coeffs[0]):
            raise ValueError("composition requires vanishing constant term")
        n = min(self.order, inner.order)
        out = TruncSeries1.const(ZERO, n)
        p = TruncSeries1.const(ONE, n)
        for k in range(n + 1):
            out = out + p * self.coeffs[k]
            p = p * inner
        return out

    def valuation(self):
        for k, c in enumerate(self.coeffs):
            if not scalar_is_zero(c):
                return k
        return None

    def is_zero(self):
        return self.valuation() is None

    def __repr__(self):
        return f"TruncSeries1({self.coeffs!r}, order={self.order})"


class TruncSeries2:
    """Truncated bivariate power series up to total order N."""

    __slots__ = ("terms", "order")

    def __init__(self, terms, order: int):
        t = {}
        items = terms.items() if isinstance(terms, dict) else terms
        for (i, j), c in items:
            if i + j > order or scalar_is_zero(c):
                continue
            key = (i, j)
            t[key] = t.get(key, ZERO) + c
            if scalar_is_zero(t[key]):
                del t[key]
        self.terms = t
        self.order = order

    @staticmethod
    def const(c, order):
        return TruncSeries2({(0, 0): rat(c)}, order)

    @staticmethod
    def x(order):
        return TruncSeries2({(1, 0): ONE}, order)

    @staticmethod
    def y(order):
        return TruncSeries2({(0, 1): ONE}, order)

    @staticmethod
    def from_bipoly(p: BiPoly, order: int):
        return TruncSeries2(p.terms, order)

    def coeff(self, i, j):
        if i + j > self.order:
            raise IndexError(f"({i},{j}) beyond truncation order {self.order}")
        return self.terms.get((i, j), ZERO)

    def truncate(self, order):
        if order >= self.order:
            return TruncSeries2(self.terms, min(order, self.order))
        return TruncSeries2({k: c for k, c in self.terms.items() if k[0] + k[1] <= order}, order)

    def _align(self, other):
        if not isinstance(other, TruncSeries2):
            other = TruncSeries2.const(other, self.order)
        n = min(self.order, other.order)
        return self.truncate(n), other.truncate(n), n

    def __add__(self, other):
        a, b, n = self._align(other)
        t = dict(a.terms)
        for k, c in b.terms.items():
            s = t.get(k, ZERO) + c
            if s == 0:
                t.pop(k, None)
            else:
                t[k] = s
        return TruncSeries2(t, n)

    __radd__ = __add__

    def __neg__(self):
        return TruncSeries2({k: -c for k, c in self.terms.items()}, self.order)

    def __sub__(self, other):
        a, b, n = self._align(other)
        return a + (-b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = rat(other)
            return TruncSeries2({k: v * c for k, v in self.terms.items()}, self.order)
        if not isinstance(other, TruncSeries2):
            return NotImplemented
        a, b, n = self._align(other)
        t = {}
        for (i1, j1), c1 in a.terms.items():
            for (i2, j2), c2 in b.terms.items():
                i, j = i1 + i2, j1 + j2
                if i + j > n:
                    continue
                k = (i, j)
                s = t.get(k, ZERO) + c1 * c2
                if s == 0:
                    t.pop(k, None)
                else:
                    t[k] = s
        return TruncSeries2(t, n)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = TruncSeries2.const(1, self.order)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if not isinstance(other, TruncSeries2):
            return NotImplemented
        return self.order == other.order and self.terms == other.terms

    def is_zero(self):
        return not self.terms

    def min_total_degree(self):
        return min((i + j for i, j in self.terms), default=None)

    def subs_y0_series(self) -> TruncSeries1:
        cs = [ZERO] * (self.order + 1)
        for (i, j), c in self.terms.items():
            if j == 0:
                cs[i] = c
        return TruncSeries1(cs, self.order)

    def subs_x0_series(self) -> TruncSeries1:
        cs = [ZERO] * (self.order + 1)
        for (i, j), c in self.terms.items():
            if i == 0:
                cs[j] = c
        return TruncSeries1(cs, self.order)

    def swap_xy(self):
        return TruncSeries2({(j, i): c for (i, j), c in self.terms.items()}, self.order)

    def subs_x_series_of_y(self, xs: TruncSeries1) -> TruncSeries1:
        """Substitute x -> xs(y) (a series with xs(0) = 0); result in y."""
        if not scalar_is_zero(xs.coeffs[0]):
            raise ValueError("substitution series must vanish at 0")
        n = min(self.order, xs.order)
        out = TruncSeries1.const(ZERO, n)
        # group terms by x-power
        by_i = {}
        for (i, j), c in self.terms.items():
            by_i.setdefault(i, {})[j] = c
        xp = TruncSeries1.const(ONE, n)
        for i in range(0, max(by_i, default=0) + 1):
            if i in by_i:
                row = by_i[i]
                ys = TruncSeries1([row.get(j, ZERO) for j in range(n + 1)], n)
                out = out + ys * xp
            xp = xp * xs
        return out

    def __repr__(self):
        items = sorted(self.terms.items(), key=lambda kv: _grlex_key(kv[0]))
        return f"TruncSeries2({items!r}, order={self.order})"


def series_invert(f: TruncSeries2) -> TruncSeries2:
    """Multiplicative inverse of a bivariate series with f(0,0) != 0."""
    c0 = f.terms.get((0, 0), ZERO)
    if c0 == 0:
        raise ZeroConstantTerm("series has zero constant term at (0,0)")
    n = f.order
    # g = (1/c0) * sum_k (1 - f/c0)^k, computed by fixed-point iteration
    inv0 = ONE / c0
    rest = TruncSeries2({k: c for k, c in f.terms.items() if k != (0, 0)}, n)
    out = TruncSeries2.const(inv0, n)
    power = TruncSeries2.const(inv0, n)
    for _ in range(n):
        power = power * rest * (-inv0)
        if power.is_zero():
            break
        out = out + power
    return out


def series_div(num: TruncSeries2, den: TruncSeries2) -> TruncSeries2:
    return num * series_invert(den)


def quadratic_series_root(
    a: TruncSeries1, b: TruncSeries1, c: TruncSeries1, x0: Fraction, order: int
) -> TruncSeries1:
    """Series solution X(t) of a X^2 + b X + c = 0 with X(0) = x0.

    Newton iteration with quadratic convergence; the root must be simple
    at t = 0 (2 a(0) x0 + b(0) != 0), else DoubleRoot is raised so the
    caller can swap the axes.
    """
    x0 = rat(x0)
    a = a.truncate(order)
    b = b.truncate(order)
    c = c.truncate(order)
    f0 = a.coeffs[0] * x0 * x0 + b.coeffs[0] * x0 + c.coeffs[0]
    if f0 != 0:
        raise NotARoot(f"{x0} is not a root of the constant section")
    slope = 2 * a.coeffs[0] * x0 + b.coeffs[0]
    if slope == 0:
        raise DoubleRoot("constant section has a double root; swap the variables")
    x = TruncSeries1.const(x0, 0)
    prec = 0
    while prec < order:
        prec = min(2 * prec + 1, order)
        xt = TruncSeries1(x.coeffs, prec)  # lift the known prefix
        at, bt, ct = a.truncate(prec), b.truncate(prec), c.truncate(prec)
        f = at * xt * xt + bt * xt + ct
        fp = at * xt * 2 + bt
        x = xt - f * fp.invert()
    res = (a * x * x + b * x + c)
    if not res.is_zero():
        raise NotARoot("Newton iteration failed to converge (non-simple root?)")
    return x


def canonical_poly1_str(p: UniPoly, var: str = "x") -> str:
    """Graded-ascending rendering with integer coefficients (content cleared)."""
    if p.is_zero():
        return "0"
    den_lcm = 1
    for c in p.coeffs:
        den_lcm = den_lcm * c.denominator // math.gcd(den_lcm, c.denominator)
    parts = []
    for k, c in enumerate(p.coeffs):
        ci = int(c * den_lcm)
        if ci == 0:
            continue
        if k == 0:
            parts.append(f"{ci}")
        else:
            mono = var if k == 1 else f"{var}^{k}"
            if ci == 1:
                parts.append(mono)
            elif ci == -1:
                parts.append(f"-{mono}")
            else:
                parts.append(f"{ci}*{mono}")
    return " + ".join(parts).replace("+ -", "- ")


def canonical_ratfunc1_str(r: RatFunc1, var: str = "x") -> str:
    """Exact "(<num>)/(<den>)" form with integer coefficients."""
    if r.is_zero():
        return "(0)/(1)"
    den_lcm = 1
    for c in list(r.num.coeffs) + list(r.den.coeffs):
        den_lcm = den_lcm * c.denominator // math.gcd(den_lcm, c.denominator)
    num = r.num * den_lcm
    den = r.den * den_lcm
    g = math.gcd(
        math.gcd(0, *(abs(int(c)) for c in num.coeffs)) if num.coeffs else 0,
        math.gcd(0, *(abs(int(c)) for c in den.coeffs)) if den.coeffs else 0,
    )
    if g > 1:
        num = num * Fraction(1, g)
        den = den * Fraction(1, g)
    return f"({canonical_poly1_str(num, var)})/({canonical_poly1_str(den, var)})"


def canonical_poly2_str(p: BiPoly) -> str:
    if p.is_zero():
        return "0"
    den_lcm = 1
    for c in p.terms.values():
        den_lcm = den_lcm * c.denominator // math.gcd(den_lcm, c.denominator)
    parts = []
    for (i, j) in sorted(p.terms, key=_grlex_key):
        ci = int(p.terms[(i, j)] * den_lcm)
        mono = []
        if i:
            mono.append("x" if i == 1 else f"x^{i}")
        if j:
            mono.append("y" if j == 1 else f"y^{j}")
        m = "*".join(mono)
        if not m:
            parts.append(f"{ci}")
        elif ci == 1:
            parts.append(m)
        elif ci == -1:
            parts.append(f"-{m}")
        else:
            parts.append(f"{ci}*{m}")
    return " + ".join(parts).replace("+ -", "- ")


def canonical_ratfunc2_str(r: RatFunc2) -> str:
    if r.is_zero():
        return "(0)/(1)"
    den_lcm = 1
    for c in list(r.num.terms.values()) + list(r.den.terms.values()):
        den_lcm = den_lcm * c.denominator // math.gcd(den_lcm, c.denominator)
    num = r.num * den_lcm
    den = r.den * den_lcm
    g = 0
    for c in list(num.terms.values()) + list(den.terms.values()):
        g = math.gcd(g, abs(int(c)))
    if g > 1:
        num = num * Fraction(1, g)
        den = den * Fraction(1, g)
    return f"({canonical_poly2_str(num)})/({canonical_poly2_str(den)})"


def rational_reconstruct(value, denominator_bound: int) -> Fraction:
    """Best rational p/q, q <= bound, for a high-precision real value.

    `value` may be an mpmath mpf or a float; the continued-fraction
    convergent is accepted only when the residual is far below the input
    precision (spec: residual < 2^(-precision/2)).
    """
    import mpmath

    v = mpmath.mpf(value) if not hasattr(value, "_mpf_") else value
    prec_bits = mpmath.mp.prec
    if denominator_bound < 1:
        raise ValueError("denominator bound must be >= 1")
    if 2 * math.log2(max(2, denominator_bound)) >= prec_bits:
        raise NoReliableReconstruction("precision too low for the requested bound")
    # continued fraction expansion
    x = v
    h0, h1 = 1, 0
    k0, k1 = 0, 1
    best = None
    for _ in range(200):
        ai = int(mpmath.floor(x))
        h0, h1 = ai * h0 + h1, h0
        k0, k1 = ai * k0 + k1, k0
        if k0 > denominator_bound:
            break
        best = Fraction(h0, k0)
        frac = x - ai
        if frac == 0:
            break
        x = 1 / frac
    if best is None:
        raise NoReliableReconstruction("no convergent within the bound")
    residual = abs(v - mpmath.mpf(best.numerator) / best.denominator)
    if residual > mpmath.mpf(2) ** (-(prec_bits // 2)):
        raise NoReliableReconstruction(f"residual {residual} too large")
    return best
