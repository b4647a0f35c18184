"""Exact rational arithmetic, polynomials over Q, and the fields K+ and K = K+(sqrt(alpha)).

Rationals are plain :class:`fractions.Fraction` values.  Polynomials are
immutable :class:`UniPoly` objects with coefficients stored lowest degree
first.  The totally real cubic field K+ = Q[x]/(g) is a :class:`CubicField`
and its elements are :class:`CubicNum` values in the power basis 1, b, b^2.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Optional, Sequence

import mpmath
from sympy import divisors

from .errors import InternalError, InvalidInput

Rational = Fraction


def as_rational(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InvalidInput(f"not a rational: {x!r}") from exc
    raise InvalidInput(f"cannot interpret {x!r} as an exact rational")


def parse_rational(s: str) -> Fraction:
    """Strict parser for the "num/den" wire format."""
    if not isinstance(s, str):
        raise InvalidInput(f"rationals must be encoded as strings, got {s!r}")
    return as_rational(s)


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


# ---------------------------------------------------------------------------
# univariate polynomials


class UniPoly:
    """Polynomial over Q, coefficients lowest degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [as_rational(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def x(cls) -> "UniPoly":
        return cls((0, 1))

    @classmethod
    def const(cls, c) -> "UniPoly":
        return cls((c,))

    @classmethod
    def from_roots(cls, roots) -> "UniPoly":
        out = cls((1,))
        for r in roots:
            out = out * cls((-as_rational(r), 1))
        return out

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1  # zero polynomial has degree -1

    def is_zero(self) -> bool:
        return not self.coeffs

    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def coeff(self, i: int) -> Fraction:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Fraction(0)

    def __eq__(self, other):
        if isinstance(other, UniPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self == UniPoly.const(other)
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"UniPoly({self})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if mono and abs(c) == 1:
                body = mono
            else:
                body = format_rational(abs(c)) + ("*" + mono if mono else "")
            terms.append(("-" if c < 0 else "+", body))
        sign, body = terms[0]
        out = ("-" if sign == "-" else "") + body
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out

    def _coerce(self, other) -> "UniPoly":
        if isinstance(other, UniPoly):
            return other
        return UniPoly.const(other)

    def __add__(self, other):
        other = self._coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return UniPoly(self.coeff(i) + other.coeff(i) for i in range(n))

    __radd__ = __add__

    def __neg__(self):
        return UniPoly(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        if self.is_zero() or other.is_zero():
            return UniPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return UniPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = UniPoly((1,))
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __divmod__(self, other):
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        q = [Fraction(0)] * max(len(rem) - other.degree, 0)
        lc = other.lc()
        for k in range(len(rem) - 1, other.degree - 1, -1):
            c = rem[k] / lc
            if c:
                shift = k - other.degree
                q[shift] = c
                for j, b in enumerate(other.coeffs):
                    rem[shift + j] -= c * b
        return UniPoly(q), UniPoly(rem[: other.degree] if other.degree > 0 else ())

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __call__(self, x):
        """Horner evaluation; works for any ring element that accepts Fraction scalars."""
        acc = None
        for c in reversed(self.coeffs):
            acc = c if acc is None else acc * x + c
        return Fraction(0) if acc is None else acc

    def derivative(self) -> "UniPoly":
        return UniPoly(i * c for i, c in enumerate(self.coeffs) if i)

    def monic(self) -> "UniPoly":
        if self.is_zero():
            return self
        lc = self.lc()
        return UniPoly(c / lc for c in self.coeffs)

    def is_monic(self) -> bool:
        return self.lc() == 1

    def compose_square(self) -> "UniPoly":
        """Return c(x^2)."""
        out = []
        for c in self.coeffs:
            out.extend((c, Fraction(0)))
        return UniPoly(out)

    def scale_roots(self, d) -> "UniPoly":
        """Monic polynomial whose roots are d times the roots of this monic polynomial."""
        d = as_rational(d)
        n = self.degree
        return UniPoly(c * d ** (n - i) for i, c in enumerate(self.coeffs))

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    def to_strings(self) -> list:
        return [format_rational(c) for c in self.coeffs]


def poly_gcd(f: UniPoly, g: UniPoly) -> UniPoly:
    while not g.is_zero():
        f, g = g, f % g
    return f.monic()


def is_squarefree(f: UniPoly) -> bool:
    return poly_gcd(f, f.derivative()).degree == 0


# ---------------------------------------------------------------------------
# dense rational linear algebra


def mat_det(rows: Sequence[Sequence]) -> Fraction:
    a = [[as_rational(x) for x in row] for row in rows]
    n = len(a)
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        pv = a[col][col]
        det *= pv
        for r in range(col + 1, n):
            factor = a[r][col] / pv
            if factor:
                for c in range(col, n):
                    a[r][c] -= factor * a[col][c]
    return det


def mat_mul(a, b):
    n, m, k = len(a), len(b), len(b[0])
    return [[sum((a[i][t] * b[t][j] for t in range(m) if a[i][t]), Fraction(0)) for j in range(k)] for i in range(n)]


def mat_solve(a, b):
    """Solve a x = b exactly for square nonsingular a."""
    n = len(a)
    aug = [[as_rational(x) for x in row] + [as_rational(b[i])] for i, row in enumerate(a)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            raise InvalidInput("singular linear system")
        aug[col], aug[piv] = aug[piv], aug[col]
        pv = aug[col][col]
        aug[col] = [x / pv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [aug[i][n] for i in range(n)]


def mat_charpoly(rows) -> UniPoly:
    """Characteristic polynomial det(xI - A) by the Faddeev-LeVerrier recursion.

    Denominators are cleared first so the recursion runs on integers, where
    every division by k is exact.
    """
    a = [[as_rational(x) for x in row] for row in rows]
    n = len(a)
    den = 1
    for row in a:
        for x in row:
            den = den * x.denominator // math.gcd(den, x.denominator)
    ai = [[int(x * den) for x in row] for row in a]
    coeffs = [0] * (n + 1)
    coeffs[n] = 1
    m = [[int(i == j) for j in range(n)] for i in range(n)]
    for k in range(1, n + 1):
        if k > 1:
            # M_k = A M_{k-1} + c_{n-k+1} I
            m = _int_mat_mul(ai, m)
            for i in range(n):
                m[i][i] += coeffs[n - k + 1]
        tr = sum(sum(ai[i][j] * m[j][i] for j in range(n)) for i in range(n))
        q, r = divmod(-tr, k)
        if r:
            raise InternalError("non-exact division in characteristic polynomial")
        coeffs[n - k] = q
    return UniPoly(coeffs).scale_roots(Fraction(1, den))


def _int_mat_mul(a, b):
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


# ---------------------------------------------------------------------------
# resultants, discriminants, Sturm sequences


def resultant(f: UniPoly, g: UniPoly) -> Fraction:
    """Resultant as the determinant of the Sylvester matrix."""
    m, n = f.degree, g.degree
    if m < 0 or n < 0:
        return Fraction(0)
    if m == 0:
        return f.lc() ** n
    if n == 0:
        return g.lc() ** m
    size = m + n
    rows = []
    fh = list(reversed(f.coeffs))
    gh = list(reversed(g.coeffs))
    for i in range(n):
        rows.append([Fraction(0)] * i + fh + [Fraction(0)] * (size - m - 1 - i))
    for i in range(m):
        rows.append([Fraction(0)] * i + gh + [Fraction(0)] * (size - n - 1 - i))
    return mat_det(rows)


def poly_discriminant(f: UniPoly) -> Fraction:
    n = f.degree
    if n < 2:
        raise InvalidInput("discriminant needs degree >= 2")
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    return sign * resultant(f, f.derivative()) / f.lc()


def sturm_sequence(f: UniPoly) -> list:
    seq = [f, f.derivative()]
    while not seq[-1].is_zero():
        r = seq[-2] % seq[-1]
        if r.is_zero():
            break
        seq.append(-r)
    return seq


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def _sign_changes(signs) -> int:
    nz = [s for s in signs if s != 0]
    return sum(1 for a, b in zip(nz, nz[1:]) if a != b)


def _signs_at(seq, x) -> list:
    if x == math.inf:
        return [_sign(p.lc()) for p in seq]
    if x == -math.inf:
        return [_sign(p.lc()) * (-1) ** p.degree for p in seq]
    return [_sign(p(x)) for p in seq]


def _require_squarefree(f: UniPoly):
    if f.degree < 1:
        raise InvalidInput("need a nonconstant polynomial")
    if not is_squarefree(f):
        raise InvalidInput(f"polynomial is not squarefree: {f}")


def count_roots_le(seq, x) -> int:
    """Number of real roots of seq[0] that are <= x (x may be a root)."""
    return _sign_changes(_signs_at(seq, -math.inf)) - _sign_changes(_signs_at(seq, x))


def sturm_sign_data(f: UniPoly) -> tuple:
    """(number of real roots, number of negative real roots) of a squarefree f."""
    _require_squarefree(f)
    seq = sturm_sequence(f)
    v_minf = _sign_changes(_signs_at(seq, -math.inf))
    total = v_minf - _sign_changes(_signs_at(seq, math.inf))
    neg = count_roots_le(seq, Fraction(0)) - (1 if f(Fraction(0)) == 0 else 0)
    return total, neg


def root_bound(f: UniPoly) -> Fraction:
    """Cauchy bound: every complex root has absolute value below it."""
    lc = abs(f.lc())
    return 1 + max((abs(c) / lc for c in f.coeffs[:-1]), default=Fraction(0))


def isolate_real_roots(f: UniPoly, width=Fraction(1, 2 ** 20)) -> list:
    """Disjoint rational intervals (lo, hi], ascending, each holding one real root of squarefree f."""
    _require_squarefree(f)
    seq = sturm_sequence(f)
    bound = root_bound(f)
    out = []

    def rec(lo, hi, n):
        if n == 0:
            return
        if n == 1 and hi - lo <= width:
            out.append((lo, hi))
            return
        mid = (lo + hi) / 2
        left = count_roots_le(seq, mid) - count_roots_le(seq, lo)
        rec(lo, mid, left)
        rec(mid, hi, n - left)

    rec(-bound, bound, count_roots_le(seq, bound) - count_roots_le(seq, -bound))
    return out


def rational_roots(f: UniPoly) -> list:
    """All rational roots, by the rational-root test on the integer-scaled polynomial."""
    if f.degree < 1:
        return []
    den = math.lcm(*(c.denominator for c in f.coeffs))
    ints = [int(c * den) for c in f.coeffs]
    g = math.gcd(*ints)
    ints = [c // g for c in ints]
    roots = set()
    if ints[0] == 0:
        roots.add(Fraction(0))
        k = next(i for i, c in enumerate(ints) if c)
        ints = ints[k:]
    if len(ints) > 1:
        for num in divisors(abs(ints[0])):
            for d in divisors(abs(ints[-1])):
                for cand in (Fraction(num, d), Fraction(-num, d)):
                    if f(cand) == 0:
                        roots.add(cand)
    return sorted(roots)


def real_roots_numeric(f: UniPoly, prec_bits: int = 128) -> list:
    """Real roots of a polynomial with only real roots, ascending, as mpmath floats."""
    with mpmath.workprec(prec_bits):
        cs = [mpmath.mpf(c.numerator) / c.denominator for c in reversed(f.coeffs)]
        roots = mpmath.polyroots(cs, maxsteps=400, extraprec=2 * prec_bits)
        return sorted(mpmath.re(r) for r in roots)


# ---------------------------------------------------------------------------
# the cubic field K+


class CubicField:
    """K+ = Q[x]/(g) for a monic, irreducible, totally real cubic g."""

    def __init__(self, g: UniPoly):
        if not isinstance(g, UniPoly):
            g = UniPoly(g)
        if g.degree != 3 or not g.is_monic():
            raise InvalidInput(f"g must be a monic cubic, got {g}")
        if rational_roots(g):
            raise InvalidInput(f"g = {g} has a rational root, so it is reducible")
        if poly_discriminant(g) == 0:
            raise InvalidInput("g has a repeated root")
        if sturm_sign_data(g)[0] != 3:
            raise InvalidInput(f"g = {g} is not totally real")
        self.g = g
        self._reduce = tuple(-c for c in g.coeffs[:3])  # b^3 = r0 + r1 b + r2 b^2

    def __eq__(self, other):
        return isinstance(other, CubicField) and self.g == other.g

    def __hash__(self):
        return hash(self.g)

    def __repr__(self):
        return f"CubicField({self.g})"

    def __call__(self, *coords) -> "CubicNum":
        if len(coords) == 1 and not isinstance(coords[0], (int, Fraction, str)):
            coords = tuple(coords[0])
        coords = tuple(coords) + (0,) * (3 - len(coords))
        return CubicNum(self, tuple(as_rational(c) for c in coords))

    @property
    def gen(self) -> "CubicNum":
        return self(0, 1, 0)

    def from_poly(self, h: UniPoly) -> "CubicNum":
        r = h % self.g
        return self(r.coeff(0), r.coeff(1), r.coeff(2))

    def roots(self, prec_bits: int = 128) -> list:
        return real_roots_numeric(self.g, prec_bits)

    def root_intervals(self) -> list:
        return isolate_real_roots(self.g)

    def discriminant(self) -> Fraction:
        return poly_discriminant(self.g)


@dataclass(frozen=True)
class CubicNum:
    field: CubicField
    coords: tuple

    def _coerce(self, other) -> "CubicNum":
        if isinstance(other, CubicNum):
            if other.field != self.field:
                raise InvalidInput("elements of different cubic fields")
            return other
        return self.field(as_rational(other))

    def __add__(self, other):
        other = self._coerce(other)
        return CubicNum(self.field, tuple(a + b for a, b in zip(self.coords, other.coords)))

    __radd__ = __add__

    def __neg__(self):
        return CubicNum(self.field, tuple(-a for a in self.coords))

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        a, b = self.coords, other.coords
        prod = [Fraction(0)] * 5
        for i in range(3):
            if a[i]:
                for j in range(3):
                    prod[i + j] += a[i] * b[j]
        r0, r1, r2 = self.field._reduce
        for k in (4, 3):
            c = prod[k]
            if c:
                prod[k] = Fraction(0)
                prod[k - 3] += c * r0
                prod[k - 2] += c * r1
                prod[k - 1] += c * r2
        return CubicNum(self.field, tuple(prod[:3]))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = self.field(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __eq__(self, other):
        if isinstance(other, CubicNum):
            return self.field == other.field and self.coords == other.coords
        if isinstance(other, (int, Fraction)):
            return self.coords == (as_rational(other), Fraction(0), Fraction(0))
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.coords))

    def __repr__(self):
        return f"CubicNum({', '.join(format_rational(c) for c in self.coords)})"

    def is_zero(self) -> bool:
        return not any(self.coords)

    def is_rational(self) -> bool:
        return self.coords[1] == 0 and self.coords[2] == 0

    def regular_matrix(self) -> list:
        """Matrix of multiplication by self in the basis 1, b, b^2 (columns are images)."""
        b = self.field.gen
        cols = [self, self * b, self * b * b]
        return [[cols[j].coords[i] for j in range(3)] for i in range(3)]

    def charpoly(self) -> UniPoly:
        return charpoly_cubicnum(self, self.field)

    def trace(self) -> Fraction:
        return -self.charpoly().coeff(2)

    def norm(self) -> Fraction:
        return -self.charpoly().coeff(0)

    def inverse(self) -> "CubicNum":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in K+")
        c = self.charpoly()
        # Cayley-Hamilton: x^3 + c2 x^2 + c1 x + c0 = 0
        return (self * self + self * c.coeff(2) + c.coeff(1)) * (-1 / c.coeff(0))

    def embeddings(self, prec_bits: int = 128) -> list:
        """Numeric images under the real embeddings, ordered by ascending root of g."""
        with mpmath.workprec(prec_bits):
            out = []
            for r in self.field.roots(prec_bits):
                c0, c1, c2 = (mpmath.mpf(c.numerator) / c.denominator for c in self.coords)
                out.append(c0 + c1 * r + c2 * r * r)
            return out

    def to_strings(self) -> list:
        return [format_rational(c) for c in self.coords]


def charpoly_cubicnum(x: CubicNum, base: Optional[CubicField] = None) -> UniPoly:
    """Characteristic polynomial of multiplication by x on K+ (monic cubic)."""
    if base is not None and x.field != base:
        raise InvalidInput("element does not belong to the given field")
    m = x.regular_matrix()
    tr = m[0][0] + m[1][1] + m[2][2]
    minors = (
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
        + m[0][0] * m[2][2] - m[0][2] * m[2][0]
        + m[1][1] * m[2][2] - m[1][2] * m[2][1]
    )
    det = mat_det(m)
    return UniPoly((-det, minors, -tr, 1))


DEFAULT_SQRT_PREC_BITS = 128
DEFAULT_MAX_DENOMINATOR = 10 ** 6


def sqrt_in_field(
    x: CubicNum,
    base: Optional[CubicField] = None,
    prec_bits: int = DEFAULT_SQRT_PREC_BITS,
    max_denominator: int = DEFAULT_MAX_DENOMINATOR,
) -> Optional[CubicNum]:
    """Square root of x inside K+, or None.

    Candidate roots are reconstructed from the real embeddings and accepted
    only after the exact check s*s == x, so a returned value is always correct.
    """
    field = base or x.field
    if x.is_zero():
        return field(0)
    with mpmath.workprec(prec_bits):
        vals = x.embeddings(prec_bits)
        tol = mpmath.mpf(2) ** (-(prec_bits // 2))
        if any(v < -tol for v in vals):
            return None
        roots = field.roots(prec_bits)
        vander = mpmath.matrix([[1, r, r * r] for r in roots])
        sq = [mpmath.sqrt(abs(v)) for v in vals]
        for signs in itertools.product((1, -1), repeat=2):
            target = mpmath.matrix([sq[0], signs[0] * sq[1], signs[1] * sq[2]])
            coords = mpmath.lu_solve(vander, target)
            rat = []
            for c in coords:
                fr = Fraction(mpmath.nstr(c, prec_bits // 3, strip_zeros=False)).limit_denominator(max_denominator)
                rat.append(fr)
            cand = field(*rat)
            if cand * cand == x:
                return cand
    return None


# ---------------------------------------------------------------------------
# CM-field descriptions K = K+(sqrt(alpha))


def is_totally_negative(a: CubicNum) -> bool:
    if a.is_rational():
        return a.coords[0] < 0
    return sturm_sign_data(a.charpoly()) == (3, 3)


@dataclass(frozen=True)
class CMFieldSpec:
    """K = K+(sqrt(alpha)) for a totally negative alpha in K+.

    ``degenerate_rational_alpha`` admits a rational alpha (so K = K+(sqrt(d))
    with d in Q); such specs are only meaningful for fields containing an
    imaginary quadratic subfield.
    """

    base: CubicField
    alpha: CubicNum
    degenerate_rational_alpha: bool = False

    def __post_init__(self):
        if self.alpha.field != self.base:
            raise InvalidInput("alpha must lie in the base field")
        if self.alpha.is_rational() and not self.degenerate_rational_alpha:
            raise InvalidInput("alpha is rational; set degenerate_rational_alpha to allow it")
        if not self.alpha.is_rational() and rational_roots(self.alpha.charpoly()):
            raise InvalidInput("alpha does not generate K+")
        if not is_totally_negative(self.alpha):
            raise InvalidInput("alpha is not totally negative")

    @property
    def alpha_charpoly(self) -> UniPoly:
        return self.alpha.charpoly()

    @property
    def is_degenerate(self) -> bool:
        return self.alpha.is_rational()

    def scaled(self, c) -> "CMFieldSpec":
        """Same field K, with alpha replaced by c^2 * alpha."""
        c = as_rational(c)
        if c == 0:
            raise InvalidInput("scaling factor must be nonzero")
        return CMFieldSpec(self.base, self.alpha * (c * c), self.degenerate_rational_alpha)

    def to_json(self) -> dict:
        return {
            "g": self.base.g.to_strings(),
            "alpha": self.alpha.to_strings(),
            "degenerate_rational_alpha": self.degenerate_rational_alpha,
        }


def make_spec(g, alpha, degenerate_rational_alpha: bool = False) -> CMFieldSpec:
    field = CubicField(g if isinstance(g, UniPoly) else UniPoly(g))
    return CMFieldSpec(field, field(*alpha), degenerate_rational_alpha)


def minpoly_eta(spec: CMFieldSpec) -> UniPoly:
    """Minimal polynomial c(x^2) of eta = sqrt(alpha) over Q, c the charpoly of alpha."""
    if spec.alpha.is_rational():
        raise InvalidInput("alpha is rational; eta does not generate K")
    if not is_totally_negative(spec.alpha):
        raise InvalidInput("alpha is not totally negative")
    return spec.alpha_charpoly.compose_square()


_SPEC_KEYS = {"g", "alpha", "degenerate_rational_alpha"}


def spec_from_json(data: dict) -> CMFieldSpec:
    if not isinstance(data, dict):
        raise InvalidInput("field spec must be a JSON object")
    # keys starting with "_" are annotations (fixture notes) and are ignored
    extra = {k for k in data if not k.startswith("_")} - _SPEC_KEYS
    if extra:
        raise InvalidInput(f"unexpected keys in field spec: {sorted(extra)}")
    if "g" not in data or "alpha" not in data:
        raise InvalidInput("field spec needs 'g' and 'alpha'")
    g, alpha = data["g"], data["alpha"]
    if not isinstance(g, list) or len(g) != 4:
        raise InvalidInput("'g' must list exactly four coefficients (monic cubic)")
    if not isinstance(alpha, list) or len(alpha) != 3:
        raise InvalidInput("'alpha' must list exactly three coordinates")
    gpoly = UniPoly(parse_rational(c) for c in g)
    if gpoly.degree != 3 or gpoly.lc() != 1:
        raise InvalidInput("'g' must be a monic cubic")
    flag = data.get("degenerate_rational_alpha", False)
    if not isinstance(flag, bool):
        raise InvalidInput("'degenerate_rational_alpha' must be a boolean")
    field = CubicField(gpoly)
    return CMFieldSpec(field, field(*(parse_rational(c) for c in alpha)), flag)


def load_spec(path) -> CMFieldSpec:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"{path}: invalid JSON ({exc})") from exc
    return spec_from_json(data)
