"""The definite quaternion algebra B_{p,inf}, its maximal orders, and 3x3 matrices over it.

Presentation: basis 1, i, j, k with i^2 = -epsilon, j^2 = -q, k = ij = -ji,
where q = p for odd p and (epsilon, q) = (1, 1) for p = 2.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from sympy import factorint, isprime

from .errors import InternalError, InvalidInput, NotNormalizable
from .exactmath import UniPoly, as_rational, format_rational, mat_charpoly, mat_det, mat_solve, parse_rational

INF = "inf"


@dataclass(frozen=True)
class QuaternionAlgebra:
    p: int
    epsilon: int
    q: int

    def __call__(self, x=0, y=0, z=0, w=0) -> "Quaternion":
        return Quaternion(self, (as_rational(x), as_rational(y), as_rational(z), as_rational(w)))

    @property
    def one(self) -> "Quaternion":
        return self(1)

    @property
    def i(self) -> "Quaternion":
        return self(0, 1)

    @property
    def j(self) -> "Quaternion":
        return self(0, 0, 1)

    @property
    def k(self) -> "Quaternion":
        return self(0, 0, 0, 1)

    @property
    def a(self) -> int:
        """i^2."""
        return -self.epsilon

    @property
    def b(self) -> int:
        """j^2."""
        return -self.q


def _scaled(coords):
    den = math.lcm(*(x.denominator for x in coords))
    return den, tuple(x.numerator * (den // x.denominator) for x in coords)


def int_qmul(a, b, e, q):
    """Product of coordinate 4-tuples in (-e, -q); works for any ring of coefficients."""
    x1, y1, z1, w1 = a
    x2, y2, z2, w2 = b
    return (
        x1 * x2 - e * y1 * y2 - q * z1 * z2 - e * q * w1 * w2,
        x1 * y2 + y1 * x2 + q * (z1 * w2 - w1 * z2),
        x1 * z2 + z1 * x2 + e * (w1 * y2 - y1 * w2),
        x1 * w2 + w1 * x2 + y1 * z2 - z1 * y2,
    )


class Quaternion:
    __slots__ = ("alg", "c")

    def __init__(self, alg: QuaternionAlgebra, coords):
        self.alg = alg
        self.c = tuple(coords)

    def _coerce(self, other) -> "Quaternion":
        if isinstance(other, Quaternion):
            if other.alg != self.alg:
                raise InvalidInput("quaternions from different algebras")
            return other
        return Quaternion(self.alg, (as_rational(other), Fraction(0), Fraction(0), Fraction(0)))

    def __add__(self, other):
        o = self._coerce(other)
        return Quaternion(self.alg, tuple(a + b for a, b in zip(self.c, o.c)))

    __radd__ = __add__

    def __neg__(self):
        return Quaternion(self.alg, tuple(-a for a in self.c))

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Quaternion(self.alg, tuple(a * other for a in self.c))
        o = self._coerce(other)
        # multiply integer numerators over a common denominator, then reduce once
        da, ia = _scaled(self.c)
        db, ib = _scaled(o.c)
        prod = int_qmul(ia, ib, self.alg.epsilon, self.alg.q)
        den = da * db
        return Quaternion(self.alg, tuple(Fraction(v, den) for v in prod))

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * other
        return self._coerce(other) * self

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return Quaternion(self.alg, tuple(a / other for a in self.c))
        return self * self._coerce(other).inverse()

    def __pow__(self, n: int):
        out = self.alg.one
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, Quaternion):
            return self.alg == other.alg and self.c == other.c
        if isinstance(other, (int, Fraction)):
            return self.c == (Fraction(other), 0, 0, 0)
        return NotImplemented

    def __hash__(self):
        return hash((self.alg, self.c))

    def __repr__(self):
        return "Q(" + ", ".join(format_rational(x) for x in self.c) + ")"

    def conj(self) -> "Quaternion":
        x, y, z, w = self.c
        return Quaternion(self.alg, (x, -y, -z, -w))

    def nrd(self) -> Fraction:
        e, q = self.alg.epsilon, self.alg.q
        x, y, z, w = self.c
        return x * x + e * y * y + q * z * z + e * q * w * w

    def trd(self) -> Fraction:
        return 2 * self.c[0]

    def inverse(self) -> "Quaternion":
        n = self.nrd()
        if n == 0:
            raise ZeroDivisionError("inverse of zero quaternion")
        return self.conj() / n

    def is_zero(self) -> bool:
        return not any(self.c)

    def is_rational(self) -> bool:
        return not any(self.c[1:])

    def commutes_with(self, other: "Quaternion") -> bool:
        return self * other == other * self

    def to_json(self) -> list:
        return [format_rational(x) for x in self.c]


def quaternion_from_json(alg: QuaternionAlgebra, data) -> Quaternion:
    if not isinstance(data, list) or len(data) != 4:
        raise InvalidInput("a quaternion is a list of four rational strings")
    return Quaternion(alg, tuple(parse_rational(x) for x in data))


# ---------------------------------------------------------------------------
# Hilbert symbols and the algebra B_{p,inf}


def _legendre(a: int, p: int) -> int:
    r = pow(a % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


def _split_val(n: int, p: int):
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v, n


def hilbert_symbol(a, b, place) -> int:
    """Local Hilbert symbol (a, b)_v for nonzero rationals a, b and v a prime or INF."""
    a, b = as_rational(a), as_rational(b)
    if a == 0 or b == 0:
        raise InvalidInput("Hilbert symbol needs nonzero arguments")
    if place == INF or place == math.inf:
        return -1 if a < 0 and b < 0 else 1
    p = int(place)
    if not isprime(p):
        raise InvalidInput(f"{place} is not a place of Q")
    # clear denominators with squares
    a_int = a.numerator * a.denominator
    b_int = b.numerator * b.denominator
    alpha, u = _split_val(a_int, p)
    beta, v = _split_val(b_int, p)
    if p != 2:
        sign = -1 if (alpha * beta * ((p - 1) // 2)) % 2 else 1
        return sign * _legendre(u, p) ** beta * _legendre(v, p) ** alpha

    def eps(x):
        return ((x - 1) // 2) % 2

    def omega(x):
        return ((x * x - 1) // 8) % 2

    e = (eps(u) * eps(v) + alpha * omega(v) + beta * omega(u)) % 2
    return -1 if e else 1


def _epsilon_for(p: int) -> int:
    if p % 4 == 3:
        return 1
    if p % 8 == 5:
        return 2
    ell = 3
    while True:
        if isprime(ell) and ell % 4 == 3 and _legendre(ell, p) == -1:
            return ell
        ell += 4


def ramification_set(alg: QuaternionAlgebra) -> set:
    """Places where (-epsilon, -q) is -1; only 2, infinity and primes dividing epsilon*q can occur."""
    candidates = {2} | set(factorint(alg.epsilon)) | set(factorint(alg.q)) | {alg.p}
    out = {v for v in candidates if hilbert_symbol(-alg.epsilon, -alg.q, v) == -1}
    if hilbert_symbol(-alg.epsilon, -alg.q, INF) == -1:
        out.add(INF)
    return out


def build_algebra(p: int) -> QuaternionAlgebra:
    if not isprime(p):
        raise InvalidInput(f"{p} is not prime")
    alg = QuaternionAlgebra(2, 1, 1) if p == 2 else QuaternionAlgebra(p, _epsilon_for(p), p)
    if ramification_set(alg) != {p, INF}:
        raise InternalError(f"algebra for p = {p} is not ramified exactly at p and infinity")
    return alg


# ---------------------------------------------------------------------------
# maximal orders


@dataclass(frozen=True)
class OrderBasis:
    """A Z-lattice basis of an order; gram[i][j] is the polar form with Nrd(sum c_i e_i) = c^T gram c."""

    alg: QuaternionAlgebra
    basis: tuple
    gram: tuple

    @property
    def p(self) -> int:
        return self.alg.p

    def _basis_matrix(self):
        # columns are basis vectors
        return [[self.basis[j].c[i] for j in range(4)] for i in range(4)]

    def coordinates(self, q: Quaternion) -> list:
        return mat_solve(self._basis_matrix(), list(q.c))

    def contains(self, q: Quaternion) -> bool:
        return all(c.denominator == 1 for c in self.coordinates(q))

    def element(self, coords: Sequence[int]) -> Quaternion:
        out = self.alg(0)
        for c, e in zip(coords, self.basis):
            if c:
                out = out + e * c
        return out

    def structure_constants(self) -> list:
        """st[a][b] = coordinates of basis[a] * basis[b]."""
        return [[self.coordinates(x * y) for y in self.basis] for x in self.basis]

    def reduced_discriminant(self) -> Fraction:
        det = mat_det([[(x * y).trd() for y in self.basis] for x in self.basis])
        n, d = abs(det.numerator), det.denominator
        rn, rd = math.isqrt(n), math.isqrt(d)
        if rn * rn != n or rd * rd != d:
            raise InternalError("discriminant form determinant is not a square")
        return Fraction(rn, rd)

    def certify(self) -> None:
        if not self.contains(self.alg.one):
            raise InternalError("order does not contain 1")
        for row in self.structure_constants():
            for coords in row:
                if any(c.denominator != 1 for c in coords):
                    raise InternalError("basis is not closed under multiplication")
        if self.reduced_discriminant() != self.p:
            raise InternalError(f"reduced discriminant {self.reduced_discriminant()} != p = {self.p}")

    def to_json(self) -> dict:
        return {"p": self.p, "basis": [b.to_json() for b in self.basis]}


def _gram(basis) -> tuple:
    return tuple(tuple((x * y.conj()).trd() / 2 for y in basis) for x in basis)


def order_from_basis(alg: QuaternionAlgebra, basis: Iterable[Quaternion]) -> OrderBasis:
    basis = tuple(basis)
    if len(basis) != 4:
        raise InvalidInput("an order basis has four elements")
    return OrderBasis(alg, basis, _gram(basis))


def maximal_order(alg: QuaternionAlgebra) -> OrderBasis:
    p = alg.p
    one, i, j, k = alg.one, alg.i, alg.j, alg.k
    half = Fraction(1, 2)
    if p == 2:
        basis = (one, i, j, (one + i + j + k) * half)
    elif p % 4 == 3:
        basis = (one, i, (one + j) * half, (i + k) * half)
    elif p % 8 == 5:
        basis = ((one + j + k) * half, (i + j * 2 + k) * Fraction(1, 4), j, k)
    else:
        ell = alg.epsilon
        c = next(c for c in range(ell) if (c * c * p + 1) % ell == 0)
        # i^2 = -ell and j^2 = -p here, so the usual recipe appears with i and j exchanged
        basis = ((one + i) * half, (j - k) * half, (i - k * c) * Fraction(1, ell), k)
    order = order_from_basis(alg, basis)
    order.certify()
    return order


def order_from_json(data: dict) -> OrderBasis:
    if not isinstance(data, dict) or set(data) != {"p", "basis"}:
        raise InvalidInput("an order is an object with keys 'p' and 'basis'")
    alg = build_algebra(int(data["p"]))
    order = order_from_basis(alg, (quaternion_from_json(alg, b) for b in data["basis"]))
    order.certify()
    return order


# ---------------------------------------------------------------------------
# bounded-norm enumeration


def _ldl(gram):
    """Exact LDL^T: returns (d, mu) with x^T G x = sum_i d_i (x_i + sum_{j>i} mu[i][j] x_j)^2."""
    n = len(gram)
    a = [[as_rational(x) for x in row] for row in gram]
    d = [Fraction(0)] * n
    mu = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        d[i] = a[i][i] - sum(mu[k][i] ** 2 * d[k] for k in range(i))
        if d[i] <= 0:
            raise InvalidInput("Gram matrix is not positive definite")
        for j in range(i + 1, n):
            mu[i][j] = (a[i][j] - sum(mu[k][i] * mu[k][j] * d[k] for k in range(i))) / d[i]
    return d, mu


def _int_range(center: Fraction, radius_sq: Fraction) -> range:
    """All integers c with (c - center)^2 <= radius_sq."""
    if radius_sq < 0:
        return range(0)
    r = math.sqrt(float(radius_sq))
    lo = math.floor(float(center) - r) - 1
    hi = math.ceil(float(center) + r) + 1
    while (lo - center) ** 2 > radius_sq and lo <= hi:
        lo += 1
    while (hi - center) ** 2 > radius_sq and hi >= lo:
        hi -= 1
    return range(lo, hi + 1)


def enumerate_coords_le(gram, bound) -> list:
    """Integer vectors x with x^T G x <= bound (exact Fincke-Pohst), sorted lexicographically."""
    bound = as_rational(bound)
    if bound < 0:
        return []
    d, mu = _ldl(gram)
    n = len(d)
    out = []
    x = [0] * n

    def rec(i, remaining):
        if i < 0:
            out.append(tuple(x))
            return
        center = -sum((mu[i][j] * x[j] for j in range(i + 1, n)), Fraction(0))
        for v in _int_range(center, remaining / d[i]):
            x[i] = v
            rec(i - 1, remaining - d[i] * (v - center) ** 2)
        x[i] = 0

    rec(n - 1, bound)
    out.sort()
    return out


def enumerate_norm_le(order: OrderBasis, bound, trace_zero: bool = False) -> list:
    """All order elements with Nrd <= bound (and Trd = 0 if asked), ordered by their order coordinates."""
    out = []
    for coords in enumerate_coords_le(order.gram, bound):
        q = order.element(coords)
        if trace_zero and q.trd() != 0:
            continue
        out.append(q)
    return out


# ---------------------------------------------------------------------------
# matrix models


def to_M4Q(q: Quaternion) -> list:
    e, p = q.alg.epsilon, q.alg.q
    x, y, z, w = q.c
    return [
        [x, -e * y, -p * z, -e * p * w],
        [y, x, -p * w, p * z],
        [z, e * w, x, -e * y],
        [w, -z, y, x],
    ]


class QMatrix3:
    """3x3 matrix over a quaternion algebra."""

    __slots__ = ("alg", "rows")

    def __init__(self, alg: QuaternionAlgebra, rows):
        self.alg = alg
        self.rows = tuple(
            tuple(e if isinstance(e, Quaternion) else alg(e) for e in row) for row in rows
        )
        if len(self.rows) != 3 or any(len(r) != 3 for r in self.rows):
            raise InvalidInput("QMatrix3 needs a 3x3 array")

    @classmethod
    def identity(cls, alg, scalar=1) -> "QMatrix3":
        return cls(alg, [[alg(scalar) if i == j else alg(0) for j in range(3)] for i in range(3)])

    @classmethod
    def zero(cls, alg) -> "QMatrix3":
        return cls(alg, [[alg(0)] * 3 for _ in range(3)])

    @classmethod
    def from_rational(cls, alg, rows) -> "QMatrix3":
        return cls(alg, [[alg(x) for x in row] for row in rows])

    def __getitem__(self, idx):
        i, j = idx
        return self.rows[i][j]

    def replace(self, i: int, j: int, value) -> "QMatrix3":
        rows = [list(r) for r in self.rows]
        rows[i][j] = value if isinstance(value, Quaternion) else self.alg(value)
        return QMatrix3(self.alg, rows)

    def __add__(self, other):
        if not isinstance(other, QMatrix3):
            other = QMatrix3.identity(self.alg, other)
        return QMatrix3(self.alg, [[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    __radd__ = __add__

    def __neg__(self):
        return QMatrix3(self.alg, [[-a for a in r] for r in self.rows])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, QMatrix3):
            a, b = self.rows, other.rows
            return QMatrix3(
                self.alg,
                [[a[i][0] * b[0][j] + a[i][1] * b[1][j] + a[i][2] * b[2][j] for j in range(3)] for i in range(3)],
            )
        if isinstance(other, (int, Fraction)):
            return QMatrix3(self.alg, [[x * other for x in r] for r in self.rows])
        if isinstance(other, Quaternion):
            return QMatrix3(self.alg, [[x * other for x in r] for r in self.rows])
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * other
        if isinstance(other, Quaternion):
            return QMatrix3(self.alg, [[other * x for x in r] for r in self.rows])
        return NotImplemented

    def __pow__(self, n: int):
        out = QMatrix3.identity(self.alg)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        return isinstance(other, QMatrix3) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        return "QMatrix3(" + repr([list(r) for r in self.rows]) + ")"

    def dagger(self) -> "QMatrix3":
        return mat3_dagger(self)

    def is_hermitian(self) -> bool:
        return self.dagger() == self

    def is_skew(self) -> bool:
        return self.dagger() == -self

    def is_zero(self) -> bool:
        return all(e.is_zero() for r in self.rows for e in r)

    def trace(self) -> Quaternion:
        return self.rows[0][0] + self.rows[1][1] + self.rows[2][2]

    def entries(self):
        return [e for r in self.rows for e in r]

    def permuted(self, perm) -> "QMatrix3":
        """P X P^T for the permutation matrix sending factor perm[i] to position i."""
        return QMatrix3(self.alg, [[self.rows[perm[i]][perm[j]] for j in range(3)] for i in range(3)])

    def to_json(self) -> list:
        return [[e.to_json() for e in r] for r in self.rows]


def qmatrix_from_json(alg: QuaternionAlgebra, data) -> QMatrix3:
    if not isinstance(data, list) or len(data) != 3:
        raise InvalidInput("a matrix is a 3x3 array of quaternions")
    return QMatrix3(alg, [[quaternion_from_json(alg, e) for e in row] for row in data])


def mat3_dagger(X: QMatrix3) -> QMatrix3:
    """Conjugate transpose: entry (i, j) becomes conj of entry (j, i)."""
    return QMatrix3(X.alg, [[X.rows[j][i].conj() for j in range(3)] for i in range(3)])


def st_normalizing_permutation(Q: QMatrix3) -> Optional[tuple]:
    for perm in itertools.permutations(range(3)):
        P = Q.permuted(perm)
        if not P[0, 1].is_zero() and not P[0, 2].is_zero():
            return perm
    return None


def lift_T(Q: QMatrix3, delta2, delta3) -> QMatrix3:
    """The conjugate of a skew Q that moves the (1,2), (1,3) entries to delta2, delta3.

    With s = Q[0,1], t = Q[0,2] of reduced norms delta2, delta3 this is
    diag(1, s/delta2, t/delta3) Q diag(1, conj(s), conj(t)).
    """
    if not Q.is_skew():
        raise InvalidInput("lift_T needs a skew matrix")
    s, t = Q[0, 1], Q[0, 2]
    if s.is_zero() or t.is_zero():
        raise NotNormalizable("the (1,2) and (1,3) entries must both be nonzero; permute first")
    d2, d3 = as_rational(delta2), as_rational(delta3)
    if s.nrd() != d2 or t.nrd() != d3:
        raise InvalidInput("delta2, delta3 must equal the reduced norms of the (1,2), (1,3) entries")
    r, v, w, z = Q[0, 0], Q[1, 1], Q[1, 2], Q[2, 2]
    alg = Q.alg
    return QMatrix3(
        alg,
        [
            [r, alg(d2), alg(d3)],
            [alg(-1), s * v * s.conj() / d2, s * w * t.conj() / d2],
            [alg(-1), -(t * w.conj() * s.conj()) / d3, t * z * t.conj() / d3],
        ],
    )


def lift_T_normalized(Q: QMatrix3):
    """Permute the factors so both (1,2) and (1,3) entries are nonzero, then lift."""
    perm = st_normalizing_permutation(Q)
    if perm is None:
        raise NotNormalizable("no ordering of the three factors has nonzero (1,2) and (1,3) entries")
    P = Q.permuted(perm)
    return perm, lift_T(P, P[0, 1].nrd(), P[0, 2].nrd())


def to_M12Q(X: QMatrix3) -> list:
    out = [[Fraction(0)] * 12 for _ in range(12)]
    for bi in range(3):
        for bj in range(3):
            block = to_M4Q(X[bi, bj])
            for r in range(4):
                for c in range(4):
                    out[4 * bi + r][4 * bj + c] = block[r][c]
    return out


def charpoly12(U) -> UniPoly:
    return mat_charpoly(U)


def rational_matrix_trace(U) -> Fraction:
    return sum((U[i][i] for i in range(len(U))), Fraction(0))
