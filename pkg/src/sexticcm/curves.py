"""Cyclic covers y^N = x^a1 (x-1)^a2 and Picard curves y^3 = f(x): genus, CM-types, zeta functions.

Point counts over F_{p^k} are vectorized with numpy: every element of the
field is a row of k coefficients, and arithmetic is done on whole arrays of
elements at once.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Union

import mpmath
import numpy as np
from sympy import Poly, isprime, symbols

from .cmfield import cyclotomic_type_is_primitive
from .errors import BadReduction, InternalError, InvalidInput
from .exactmath import UniPoly, is_squarefree

_X = symbols("x")


# ---------------------------------------------------------------------------
# curve data


@dataclass(frozen=True)
class CoverSpec:
    N: int
    a1: int
    a2: int

    def __post_init__(self):
        N, a1, a2 = self.N, self.a1, self.a2
        if N < 2:
            raise InvalidInput("N must be at least 2")
        if not (0 < a1 < N and 0 < a2 < N):
            raise InvalidInput("need 0 < a1, a2 < N")
        if math.gcd(N, math.gcd(a1, a2)) != 1:
            raise InvalidInput("need gcd(N, a1, a2) = 1")
        if (a1 + a2) % N == 0:
            raise InvalidInput("a3 = -(a1 + a2) is 0 mod N: the cover is unbranched at infinity")

    @property
    def a3(self) -> int:
        return (-(self.a1 + self.a2)) % self.N

    @property
    def exponents(self) -> tuple:
        return (self.a1, self.a2, self.a3)

    @classmethod
    def parse(cls, text: str) -> "CoverSpec":
        try:
            N, a1, a2 = (int(t) for t in text.split(","))
        except ValueError as exc:
            raise InvalidInput(f"cover must be N,a1,a2 (got {text!r})") from exc
        return cls(N, a1, a2)

    def label(self) -> str:
        return f"y^{self.N} = x^{self.a1} (x-1)^{self.a2}"

    def to_json(self) -> dict:
        return {"type": "cover", "N": self.N, "a1": self.a1, "a2": self.a2, "a3": self.a3}


@dataclass(frozen=True)
class PicardSpec:
    f: UniPoly

    def __post_init__(self):
        if self.f.degree != 4:
            raise InvalidInput("a Picard curve needs deg f = 4")
        if not self.f.is_integral():
            raise InvalidInput("f must have integer coefficients")
        if not is_squarefree(self.f):
            raise InvalidInput("f must be squarefree over Q")

    @classmethod
    def from_json(cls, data) -> "PicardSpec":
        if not isinstance(data, dict) or {k for k in data if not k.startswith("_")} != {"f"}:
            raise InvalidInput("a Picard spec is an object with the single key 'f'")
        coeffs = data["f"]
        if not isinstance(coeffs, list) or len(coeffs) != 5:
            raise InvalidInput("'f' lists five integer coefficients, constant term first")
        try:
            ints = [int(c) for c in coeffs]
        except (TypeError, ValueError) as exc:
            raise InvalidInput("coefficients of f must be integers") from exc
        return cls(UniPoly(ints))

    @property
    def int_coeffs(self) -> list:
        return [int(c) for c in self.f.coeffs]

    def label(self) -> str:
        return f"y^3 = {self.f}"

    def to_json(self) -> dict:
        return {"type": "picard", "f": [str(c) for c in self.int_coeffs]}


Curve = Union[CoverSpec, PicardSpec]


def rh_genus(spec: CoverSpec) -> int:
    N = spec.N
    two_g_minus_2 = -2 * N + sum(N - math.gcd(N, a) for a in spec.exponents)
    if two_g_minus_2 % 2:
        raise InternalError("odd Euler characteristic")
    return two_g_minus_2 // 2 + 1


def genus(curve: Curve) -> int:
    return 3 if isinstance(curve, PicardSpec) else rh_genus(curve)


def normalize_cover(spec: CoverSpec) -> tuple:
    """Least (N, b1, b2, b3) with b_i = c * a_sigma(i) mod N over units c and permutations sigma."""
    N = spec.N
    best = None
    for c in range(1, N):
        if math.gcd(c, N) != 1:
            continue
        for perm in itertools.permutations(spec.exponents):
            cand = (N,) + tuple((c * a) % N for a in perm)
            if best is None or cand < best:
                best = cand
    return best


def covers_isomorphic(s: CoverSpec, t: CoverSpec) -> bool:
    return normalize_cover(s) == normalize_cover(t)


@dataclass(frozen=True)
class CoverCMType:
    N: int
    dims: dict  # i -> dimension of the zeta_N^i eigenspace of holomorphic differentials
    has_cm: bool
    cm_type: Optional[tuple]
    primitive: Optional[bool]

    def to_json(self) -> dict:
        return {
            "N": self.N,
            "dims": {str(i): d for i, d in self.dims.items()},
            "has_cm": self.has_cm,
            "cm_type": list(self.cm_type) if self.cm_type is not None else None,
            "primitive": self.primitive,
        }


def _frac_part(num: int, den: int) -> Fraction:
    return Fraction(num % den, den)


def eigenspace_dims(spec: CoverSpec) -> dict:
    # orientation chosen so that y^9 = x(x-1)^3 has type {1, 2, 4}
    N = spec.N
    out = {}
    for i in range(1, N):
        s = sum(_frac_part(-i * a, N) for a in spec.exponents) - 1
        if s.denominator != 1:
            raise InternalError("fractional eigenspace dimension")
        out[i] = int(s)
    return out


def cover_cm_type(spec: CoverSpec) -> CoverCMType:
    dims = eigenspace_dims(spec)
    g = rh_genus(spec)
    if sum(dims.values()) != g:
        raise InternalError("eigenspace dimensions do not add up to the genus")
    phi = sum(1 for c in range(1, spec.N) if math.gcd(c, spec.N) == 1)
    has_cm = 2 * g == phi
    if not has_cm:
        return CoverCMType(spec.N, dims, False, None, None)
    typ = tuple(i for i, d in dims.items() if d == 1)
    return CoverCMType(spec.N, dims, True, typ, cyclotomic_type_is_primitive(typ, spec.N))


# ---------------------------------------------------------------------------
# finite fields F_{p^k}, vectorized


def _fp_poly(coeffs_low_first, p):
    return Poly(list(reversed([int(c) % p for c in coeffs_low_first])), _X, modulus=p)


@lru_cache(maxsize=None)
def conway_free_modulus(p: int, k: int) -> tuple:
    """Least monic irreducible polynomial of degree k over F_p, ordered by sum c_i p^i (low coefficients first)."""
    if k == 1:
        return (0, 1)
    for n in range(p ** k):
        coeffs = [(n // p ** i) % p for i in range(k)] + [1]
        if coeffs[0] == 0:
            continue
        if _fp_poly(coeffs, p).is_irreducible:
            return tuple(coeffs)
    raise InternalError(f"no irreducible polynomial of degree {k} over F_{p}")


class FiniteField:
    """F_{p^k} = F_p[t]/(m(t)); elements are integer arrays of shape (..., k)."""

    def __init__(self, p: int, k: int):
        if not isprime(p):
            raise InvalidInput(f"{p} is not prime")
        if k < 1:
            raise InvalidInput("extension degree must be positive")
        self.p, self.k = p, k
        self.q = p ** k
        self.modulus = conway_free_modulus(p, k)

    def all_elements(self) -> np.ndarray:
        idx = np.arange(self.q, dtype=np.int64)
        return np.stack([(idx // self.p ** i) % self.p for i in range(self.k)], axis=-1)

    def const(self, c: int, shape=()) -> np.ndarray:
        out = np.zeros(tuple(shape) + (self.k,), dtype=np.int64)
        out[..., 0] = c % self.p
        return out

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        k, p = self.k, self.p
        if k == 1:
            return (a * b) % p
        shape = np.broadcast_shapes(a.shape, b.shape)[:-1]
        prod = np.zeros(shape + (2 * k - 1,), dtype=np.int64)
        for i in range(k):
            for j in range(k):
                prod[..., i + j] += a[..., i] * b[..., j]
        prod %= p
        m = self.modulus
        for d in range(2 * k - 2, k - 1, -1):
            top = prod[..., d].copy()
            for i in range(k):
                if m[i]:
                    prod[..., d - k + i] -= top * m[i]
            prod[..., d] = 0
            prod %= p
        return prod[..., :k]

    def pow(self, a, e: int):
        result = self.const(1, a.shape[:-1])
        base = a
        while e:
            if e & 1:
                result = self.mul(result, base)
            e >>= 1
            if e:
                base = self.mul(base, base)
        return result

    def is_one(self, a) -> np.ndarray:
        return (a[..., 0] == 1) & np.all(a[..., 1:] == 0, axis=-1)

    def is_zero(self, a) -> np.ndarray:
        return np.all(a == 0, axis=-1)

    def eval_int_poly(self, coeffs_low_first, x):
        acc = self.const(0, x.shape[:-1])
        for c in reversed(coeffs_low_first):
            acc = self.add(self.mul(acc, x), self.const(int(c), x.shape[:-1]))
        return acc


def _count_nth_roots(field: FiniteField, n: int, target_is_minus_one: bool) -> int:
    """#{w in F_q : w^n = 1} or #{w : w^n = -1}."""
    q = field.q
    d = math.gcd(n, q - 1)
    if not target_is_minus_one or field.p == 2:
        return d
    # -1 is an n-th power iff its order 2 divides (q-1)/d
    return d if ((q - 1) // d) % 2 == 0 else 0


def _power_residue_count(field: FiniteField, values, n: int) -> int:
    """Sum over nonzero v of #{y : y^n = v}."""
    q = field.q
    d = math.gcd(n, q - 1)
    nz = ~field.is_zero(values)
    if d == 1:
        return int(nz.sum())
    test = field.pow(values[nz], (q - 1) // d)
    return d * int(field.is_one(test).sum())


def cover_bad_reason(spec: CoverSpec, p: int) -> Optional[str]:
    if spec.N % p == 0:
        return f"p divides N = {spec.N}; the cover is wildly ramified and this model is not smooth"
    return None


def quartic_mod_p(spec: PicardSpec, p: int) -> list:
    """Monic irreducible factors of f over F_p with multiplicities, as (coeffs low-first, multiplicity)."""
    if not isprime(p):
        raise InvalidInput(f"{p} is not prime")
    poly = _fp_poly(spec.int_coeffs, p)
    lc, facs = poly.factor_list()
    out = []
    for fac, mult in facs:
        cs = [int(c) % p for c in reversed(fac.all_coeffs())]
        inv = pow(cs[-1], -1, p)
        out.append((tuple((c * inv) % p for c in cs), mult))
    out.sort(key=lambda t: (len(t[0]), tuple(reversed(t[0])), t[1]))
    return out


def format_factorization(factors) -> str:
    parts = []
    for cs, mult in factors:
        s = str(UniPoly(cs))
        s = f"({s})" if len(cs) > 2 or cs[0] else s
        parts.append(s + (f"^{mult}" if mult > 1 else ""))
    return " * ".join(parts)


def picard_bad_reason(spec: PicardSpec, p: int) -> Optional[str]:
    if p == 3:
        return "p = 3 divides the degree of the cyclic cover"
    if spec.int_coeffs[4] % p == 0:
        return "leading coefficient of f vanishes mod p"
    facs = quartic_mod_p(spec, p)
    if any(m > 1 for _, m in facs):
        return f"f mod {p} = {format_factorization(facs)} is not squarefree, so y^3 = f(x) is singular"
    return None


def bad_reason(curve: Curve, p: int) -> Optional[str]:
    return cover_bad_reason(curve, p) if isinstance(curve, CoverSpec) else picard_bad_reason(curve, p)


def count_points(curve: Curve, p: int, k: int) -> int:
    """Points of the smooth projective model over F_{p^k}."""
    if not isprime(p):
        raise InvalidInput(f"{p} is not prime")
    reason = bad_reason(curve, p)
    if reason:
        raise BadReduction(p, reason)
    F = FiniteField(p, k)
    xs = F.all_elements()
    if isinstance(curve, CoverSpec):
        N, a1, a2, a3 = curve.N, curve.a1, curve.a2, curve.a3
        xs = xs[2:]  # drop 0 and 1 (indices 0 and 1 in the element ordering)
        v = F.mul(F.pow(xs, a1), F.pow(F.sub(xs, F.const(1)), a2))
        affine = _power_residue_count(F, v, N)
        # places over 0 are w^g1 = (-1)^a2, over 1 are w^g2 = 1, over infinity are w^g3 = 1
        above0 = _count_nth_roots(F, math.gcd(N, a1), a2 % 2 == 1)
        above1 = _count_nth_roots(F, math.gcd(N, a2), False)
        above_inf = _count_nth_roots(F, math.gcd(N, a3), False)
        return affine + above0 + above1 + above_inf
    vals = F.eval_int_poly(curve.int_coeffs, xs)
    zeros = int(F.is_zero(vals).sum())
    return zeros + _power_residue_count(F, vals, 3) + 1


# ---------------------------------------------------------------------------
# zeta functions


class ReductionClass(str, enum.Enum):
    ORDINARY = "ordinary"
    SUPERSINGULAR = "supersingular"
    INTERMEDIATE = "intermediate"


@dataclass(frozen=True)
class ZetaData:
    p: int
    genus: int
    counts: tuple
    L: tuple  # integer coefficients, constant term first
    slopes: tuple  # (slope, multiplicity)
    p_rank: int
    classification: ReductionClass

    def to_json(self, curve: Optional[Curve] = None) -> dict:
        return {
            "curve": curve.to_json() if curve is not None else None,
            "p": self.p,
            "counts": list(self.counts),
            "L": list(self.L),
            "slopes": [[s.numerator, s.denominator, m] for s, m in self.slopes],
            "p_rank": self.p_rank,
            "class": self.classification.value,
        }


def l_polynomial(counts, p: int, g: int) -> tuple:
    """L(T) from N_1..N_g via Newton's identities and the functional equation."""
    if len(counts) < g:
        raise InvalidInput(f"need {g} point counts")
    s = [None] + [p ** k + 1 - counts[k - 1] for k in range(1, g + 1)]
    c = [1] + [0] * (2 * g)
    for j in range(1, g + 1):
        total = -sum(s[i] * c[j - i] for i in range(1, j + 1))
        if total % j:
            raise InternalError("point counts are inconsistent with an integral L-polynomial")
        c[j] = total // j
    for j in range(g):
        c[2 * g - j] = p ** (g - j) * c[j]
    return tuple(c)


def vp(n: int, p: int) -> int:
    if n == 0:
        raise ValueError("valuation of zero")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def newton_slopes(coeffs, p: int) -> tuple:
    """Slopes of the lower convex hull of (i, v_p(c_i)) with horizontal lengths."""
    pts = [(i, vp(c, p)) for i, c in enumerate(coeffs) if c != 0]
    hull = []
    for pt in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop the middle point if it lies on or above the chord
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    merged: dict = {}
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        slope = Fraction(y2 - y1, x2 - x1)
        merged[slope] = merged.get(slope, 0) + (x2 - x1)
    return tuple(sorted(merged.items()))


def weil_check(L, p: int, rel_tol: float = 1e-6) -> bool:
    """Every reciprocal root of L has absolute value sqrt(p) (numerical, high precision)."""
    # repeated roots (supersingular cases) stall root finders, so split off multiplicities first
    _, parts = Poly(list(reversed([int(c) for c in L])), _X).sqf_list()
    target = mpmath.sqrt(p)
    with mpmath.workdps(60):
        for part, _mult in parts:
            if part.degree() < 1:
                continue
            # the roots of L(T) are 1/alpha, so |root| must be 1/sqrt(p)
            roots = mpmath.polyroots([int(c) for c in part.all_coeffs()], maxsteps=500, extraprec=200)
            if any(abs(abs(r) * target - 1) > rel_tol for r in roots):
                return False
    return True


def functional_equation_holds(L, p: int) -> bool:
    g2 = len(L) - 1
    if g2 % 2:
        return False
    g = g2 // 2
    return all(L[g2 - j] == p ** (g - j) * L[j] for j in range(g + 1))


def zeta_classify(curve: Curve, p: int) -> ZetaData:
    g = genus(curve)
    counts = tuple(count_points(curve, p, k) for k in range(1, g + 1))
    L = l_polynomial(counts, p, g)
    slopes = newton_slopes(L, p)
    p_rank = sum(m for s, m in slopes if s == 0)
    if p_rank == g:
        cls = ReductionClass.ORDINARY
    elif all(s == Fraction(1, 2) for s, _ in slopes):
        cls = ReductionClass.SUPERSINGULAR
    else:
        cls = ReductionClass.INTERMEDIATE
    return ZetaData(p, g, counts, L, slopes, p_rank, cls)


def predicted_counts(L, p: int, kmax: int) -> list:
    """N_k = p^k + 1 - sum alpha_i^k, from the power sums of the reciprocal roots of L."""
    c = list(L)
    n = len(c) - 1
    s = [0] * (kmax + 1)
    for k in range(1, kmax + 1):
        # Newton: s_k + c_1 s_{k-1} + ... + c_{k-1} s_1 + k c_k = 0 (with c_j = 0 for j > n)
        acc = sum(c[i] * s[k - i] for i in range(1, min(k, n + 1)) if k - i >= 1)
        ck = c[k] if k <= n else 0
        s[k] = -acc - k * ck
    return [p ** k + 1 - s[k] for k in range(1, kmax + 1)]


def sweep_row(curve: Curve, p: int) -> dict:
    reason = bad_reason(curve, p)
    if reason:
        return {"p": p, "bad": reason}
    z = zeta_classify(curve, p)
    return {"p": p, "class": z.classification.value, "p_rank": z.p_rank,
            "slopes": [[s.numerator, s.denominator, m] for s, m in z.slopes]}


def sweep(curve: Curve, p_max: int = 100) -> list:
    return [sweep_row(curve, p) for p in range(2, p_max) if isprime(p)]
