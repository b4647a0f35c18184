"""Galois classification of sextic CM-fields, CM-types, and the prime bound.

A field is always given relatively, as K = K+(sqrt(alpha)) (see
:class:`~sexticcm.exactmath.CMFieldSpec`).  The three possible Galois groups
of the Galois closure are told apart by two exact tests: whether disc(g) is a
rational square, and whether alpha / d is a square in K+ for the unique
candidate d (the squarefree kernel of the norm of alpha).
"""

from __future__ import annotations

import enum
import itertools
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from sympy import factorint, isprime, prevprime

from .errors import InvalidInput
from .exactmath import CMFieldSpec, CubicNum, format_rational, sqrt_in_field


class GaloisTag(str, enum.Enum):
    CYCLIC_C6 = "C6"
    DIHEDRAL_D12 = "D12"
    C2CUBE_C3 = "(C2)^3:C3"
    C2CUBE_S3 = "(C2)^3:S3"


_CASE = {
    GaloisTag.CYCLIC_C6: 1,
    GaloisTag.DIHEDRAL_D12: 2,
    GaloisTag.C2CUBE_C3: 3,
    GaloisTag.C2CUBE_S3: 3,
}


@dataclass(frozen=True)
class GaloisClass:
    tag: GaloisTag

    @property
    def case_index(self) -> int:
        return _CASE[self.tag]


@dataclass(frozen=True)
class ImQuadWitness:
    """alpha = d * s^2 with d < 0 squarefree, so sqrt(d) = sqrt(alpha) / s lies in K."""

    d: int
    s: CubicNum


@dataclass(frozen=True)
class CMType:
    """A CM-type up to complex conjugation.

    Case 1: ``encoding`` is the exponent pair (a, b) of {1, sigma^a, sigma^b}.
    Cases 2 and 3: a sign vector attached to the real roots of g in ascending
    order, normalized so that the first sign is +1.
    """

    case_index: int
    encoding: tuple
    primitive: bool

    def to_json(self) -> dict:
        return {"encoding": list(self.encoding), "primitive": self.primitive}


class ReductionKind(str, enum.Enum):
    ORDINARY = "ordinary"
    SUPERSINGULAR = "supersingular"


@dataclass(frozen=True)
class BoundResult:
    trace: Fraction
    bound: Fraction
    max_prime: Optional[int]
    applicable: bool


def _is_rational_square(x: Fraction) -> bool:
    if x < 0:
        return False
    n, d = x.numerator, x.denominator
    return math.isqrt(n) ** 2 == n and math.isqrt(d) ** 2 == d


def squarefree_kernel(x: Fraction) -> int:
    """The squarefree integer d with x = d * (rational square), sign included."""
    x = Fraction(x)
    if x == 0:
        raise InvalidInput("zero has no squarefree kernel")
    d = -1 if x < 0 else 1
    for part in (abs(x.numerator), x.denominator):
        for prime, e in factorint(part).items():
            if e % 2:
                d *= prime
    return d


def imaginary_quadratic_subfield(spec: CMFieldSpec, **sqrt_kwargs) -> Optional[ImQuadWitness]:
    alpha = spec.alpha
    d = squarefree_kernel(alpha.norm())
    if d > 0:
        return None  # impossible for totally negative alpha; kept for safety
    s = sqrt_in_field(alpha / d, **sqrt_kwargs)
    if s is None:
        return None
    if d * s * s != alpha:
        raise AssertionError("square root reconstruction returned a wrong value")
    return ImQuadWitness(d, s)


def classify(spec: CMFieldSpec) -> GaloisClass:
    cyclic_base = _is_rational_square(spec.base.discriminant())
    has_imquad = imaginary_quadratic_subfield(spec) is not None
    if has_imquad:
        return GaloisClass(GaloisTag.CYCLIC_C6 if cyclic_base else GaloisTag.DIHEDRAL_D12)
    return GaloisClass(GaloisTag.C2CUBE_C3 if cyclic_base else GaloisTag.C2CUBE_S3)


def cyclic_type_stabilizer(exponents, n: int) -> set:
    """{h in Z/n : phi + h = phi} for a type phi given additively in a cyclic group."""
    phi = {e % n for e in exponents}
    return {h for h in range(n) if {(e + h) % n for e in phi} == phi}


def unit_type_stabilizer(type_set, n: int) -> set:
    """{h in (Z/n)^* : h * S = S} for a CM-type S of Q(zeta_n)."""
    s = {e % n for e in type_set}
    return {h for h in range(1, n) if math.gcd(h, n) == 1 and {(h * e) % n for e in s} == s}


def cyclotomic_type_is_primitive(type_set, n: int) -> bool:
    # Galois closure is Q(zeta_n) itself, so the type is primitive iff its stabilizer is trivial
    return unit_type_stabilizer(type_set, n) == {1}


def enumerate_cm_types(spec: CMFieldSpec, galois: Optional[GaloisClass] = None) -> list:
    case = (galois or classify(spec)).case_index
    if case == 1:
        out = []
        for a, b in ((1, 2), (1, 5), (4, 2), (4, 5)):
            prim = cyclic_type_stabilizer((0, a, b), 6) == {0}
            out.append(CMType(1, (a, b), prim))
        return out
    vectors = [(1,) + rest for rest in itertools.product((1, -1), repeat=2)]
    if case == 2:
        # the only proper CM-subfield is K1; a type is induced from it iff its restriction is constant
        return [CMType(2, v, len(set(v)) > 1) for v in vectors]
    return [CMType(3, v, True) for v in vectors]


def prime_bound(spec: CMFieldSpec, galois: Optional[GaloisClass] = None) -> BoundResult:
    """4 * Tr(alpha)^6 / 3^6 and the largest prime not exceeding it."""
    if spec.alpha.is_rational():
        raise InvalidInput("the bound needs a non-rational alpha")
    tr = spec.alpha.trace()
    bound = 4 * tr ** 6 / Fraction(3 ** 6)
    top = math.floor(bound)
    max_prime = prevprime(top + 1) if top >= 2 else None
    applicable = (galois or classify(spec)).case_index == 3
    if not applicable:
        warnings.warn("K contains an imaginary quadratic subfield; the bound does not apply", stacklevel=2)
    return BoundResult(tr, bound, max_prime, applicable)


def kronecker(D: int, p: int) -> int:
    if p == 2:
        if D % 2 == 0:
            return 0
        return 1 if D % 8 in (1, 7) else -1
    r = pow(D % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


def field_discriminant(d: int) -> int:
    """Discriminant of Q(sqrt(d)) for squarefree d."""
    return d if d % 4 == 1 else 4 * d


def deuring_type(d: int, p: int) -> ReductionKind:
    """Reduction type at p of an elliptic curve with CM by the maximal order of Q(sqrt(d))."""
    if not isprime(p):
        raise InvalidInput(f"{p} is not prime")
    if d >= 0 or squarefree_kernel(Fraction(d)) != d:
        raise InvalidInput(f"d = {d} must be negative and squarefree")
    chi = kronecker(field_discriminant(d), p)
    return ReductionKind.ORDINARY if chi == 1 else ReductionKind.SUPERSINGULAR


def smaller_alpha(spec: CMFieldSpec, height: int = 2) -> CMFieldSpec:
    """Best-effort search for alpha' = alpha * (s/c)^2 defining the same K with smaller |Tr|.

    s runs over nonzero elements u + v b + w b^2 with |u|, |v|, |w| <= height and
    c over 1..height.  Only integral, non-rational alpha' are kept.  Returns the
    input spec when nothing better is found.
    """
    field, alpha = spec.base, spec.alpha
    best = (abs(alpha.trace()), tuple(alpha.coords), spec)
    rng = range(-height, height + 1)
    for u, v, w in itertools.product(rng, rng, rng):
        s = field(u, v, w)
        if s.is_zero():
            continue
        s2 = s * s
        for c in range(1, height + 1):
            cand = alpha * s2 / (c * c)
            if cand.is_rational() or not cand.charpoly().is_integral():
                continue
            key = (abs(cand.trace()), tuple(cand.coords))
            if key < best[:2]:
                best = key + (CMFieldSpec(field, cand, spec.degenerate_rational_alpha),)
    return best[2]


def field_report(spec: CMFieldSpec) -> dict:
    galois = classify(spec)
    witness = imaginary_quadratic_subfield(spec)
    out = {
        "galois": galois.tag.value,
        "case": galois.case_index,
        "im_quad_d": witness.d if witness else None,
        "cm_types": [t.to_json() for t in enumerate_cm_types(spec, galois)],
        "bound": None,
        "max_prime": None,
        "bound_applicable": galois.case_index == 3,
    }
    if not spec.alpha.is_rational():
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            b = prime_bound(spec, galois)
        out["bound"] = format_rational(b.bound)
        out["max_prime"] = b.max_prime
    return out
