"""Candidates for the embedding problem: checking, exhaustive search, and the degenerate construction.

A candidate is a pair (M, N) of 3x3 matrices over a maximal order of
B_{p,inf}: M is the image of a generator of K+ and N the image of an element
eta of K with K = K+(eta).  The checker evaluates every matrix-entry condition
implied by commutativity, the characteristic polynomial, the norm and trace of
eta, and compatibility of the Rosati involution with complex conjugation.
"""

from __future__ import annotations

import itertools
import math
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import mpmath

from .cmfield import imaginary_quadratic_subfield
from .errors import InternalError, InvalidInput, NotFound, NoWitness
from .exactmath import (
    CMFieldSpec,
    UniPoly,
    as_rational,
    format_rational,
    mat_charpoly,
    parse_rational,
    spec_from_json,
)
from .quaternion import (
    OrderBasis,
    QMatrix3,
    Quaternion,
    build_algebra,
    charpoly12,
    enumerate_norm_le,
    int_qmul,
    maximal_order,
    qmatrix_from_json,
    to_M12Q,
)

ETA_SQRT_TRACE = (Fraction(0), Fraction(0), Fraction(0))
ETA_SQRT_NORM = (Fraction(0), Fraction(-1), Fraction(0))


@dataclass(frozen=True)
class EmbeddingCandidate:
    """Images M of a generator of K+ and N of eta.

    ``cubic`` is the characteristic polynomial of the element M represents.
    ``trace_coeffs`` and ``norm_coeffs`` express Tr_{K/K+}(eta) and
    N_{K/K+}(eta) in the power basis 1, x, x^2 of that element; the defaults
    describe eta = sqrt(alpha) with M the image of alpha.  ``row_scale``
    gives denominators (1, delta2, delta3) cleared by left multiplication
    before the order-membership test.
    """

    M: QMatrix3
    N: QMatrix3
    order: OrderBasis
    spec: CMFieldSpec
    cubic: Optional[UniPoly] = None
    trace_coeffs: tuple = ETA_SQRT_TRACE
    norm_coeffs: tuple = ETA_SQRT_NORM
    row_scale: tuple = (1, 1, 1)

    @property
    def cubic_poly(self) -> UniPoly:
        return self.cubic if self.cubic is not None else self.spec.alpha_charpoly

    def to_json(self) -> dict:
        out = {"M": self.M.to_json(), "N": self.N.to_json()}
        if self.cubic is not None:
            out["cubic"] = self.cubic.to_strings()
        if tuple(self.trace_coeffs) != ETA_SQRT_TRACE:
            out["trace_coeffs"] = [format_rational(x) for x in self.trace_coeffs]
        if tuple(self.norm_coeffs) != ETA_SQRT_NORM:
            out["norm_coeffs"] = [format_rational(x) for x in self.norm_coeffs]
        if tuple(self.row_scale) != (1, 1, 1):
            out["row_scale"] = list(self.row_scale)
        return out


def candidate_from_json(data: dict, order: OrderBasis, spec: CMFieldSpec) -> EmbeddingCandidate:
    allowed = {"M", "N", "cubic", "trace_coeffs", "norm_coeffs", "row_scale"}
    if not isinstance(data, dict) or not {"M", "N"} <= set(data) or set(data) - allowed:
        raise InvalidInput("a solution needs 'M' and 'N' and only the documented optional keys")
    alg = order.alg
    cubic = None
    if "cubic" in data:
        cubic = UniPoly(parse_rational(c) for c in data["cubic"])
        if cubic.degree != 3 or cubic.lc() != 1:
            raise InvalidInput("'cubic' must be a monic cubic")

    def triple(key, default):
        if key not in data:
            return default
        v = data[key]
        if not isinstance(v, list) or len(v) != 3:
            raise InvalidInput(f"'{key}' must have three entries")
        return tuple(parse_rational(x) for x in v)

    scale = tuple(int(x) for x in data.get("row_scale", (1, 1, 1)))
    if len(scale) != 3 or any(x <= 0 for x in scale):
        raise InvalidInput("'row_scale' must be three positive integers")
    return EmbeddingCandidate(
        qmatrix_from_json(alg, data["M"]),
        qmatrix_from_json(alg, data["N"]),
        order,
        spec,
        cubic,
        triple("trace_coeffs", ETA_SQRT_TRACE),
        triple("norm_coeffs", ETA_SQRT_NORM),
        scale,
    )


@dataclass(frozen=True)
class ConstraintReport:
    status: dict
    first_failure: Optional[tuple] = None  # (condition id, witness text)

    @property
    def overall(self) -> bool:
        return all(self.status.values())

    def failed(self) -> list:
        return [k for k, v in self.status.items() if not v]

    def to_json(self) -> dict:
        return {
            "overall": self.overall,
            "status": dict(self.status),
            "first_failure": list(self.first_failure) if self.first_failure else None,
        }


# ---------------------------------------------------------------------------
# the condition battery


def _fmt(q) -> str:
    return repr(q) if isinstance(q, Quaternion) else format_rational(as_rational(q))


def _is_zero(x) -> bool:
    return x.is_zero() if isinstance(x, Quaternion) else x == 0


def _entry_eq(X: QMatrix3, Y: QMatrix3, label: str) -> Optional[str]:
    for i in range(3):
        for j in range(3):
            if X[i, j] != Y[i, j]:
                return f"{label}: entry ({i + 1},{j + 1}) differs: {X[i, j]!r} vs {Y[i, j]!r}"
    return None


def _zero_check(value) -> Optional[str]:
    return None if _is_zero(value) else f"residual {_fmt(value)}"


def _cubic_residuals(M: QMatrix3, m1, n1, s1) -> dict:
    """The nine entries of M^3 + m1 M^2 + n1 M + s1, written out as printed for scalar a, e, l."""
    a, b, c = M[0, 0], M[0, 1], M[0, 2]
    d, e, f = M[1, 0], M[1, 1], M[1, 2]
    g, h, l = M[2, 0], M[2, 1], M[2, 2]
    return {
        "(i)": (a * 2 + e + m1) * (b * d) + (a * 2 + l + m1) * (c * g) + b * f * g + c * h * d
        + a ** 3 + a * a * m1 + a * n1 + s1,
        "(ii)": (a * a + a * e + e * e + a * m1 + e * m1 + n1) * b + (e + l + m1 + a) * (c * h)
        + b * d * b + b * f * h + c * g * b,
        "(iii)": (a * a + a * l + l * l + a * m1 + l * m1 + n1) * c + (a + e + l + m1) * (b * f)
        + b * d * c + c * g * c + c * h * f,
        "(iv)": (a * a + e * a + e * e + a * m1 + e * m1 + n1) * d + (e + a + l + m1) * (f * g)
        + d * b * d + d * c * g + f * h * d,
        # as printed the constant reads n1 + s1; the (2,2) entry needs n1*e + s1
        "(v)": (a + e * 2 + m1) * (d * b) + (e * 2 + l + m1) * (f * h) + d * c * h + f * g * b
        + e ** 3 + e * e * m1 + e * n1 + s1,
        "(vi)": (a + l + e + m1) * (d * c) + (e * e + e * l + l * l + e * m1 + l * m1 + n1) * f
        + d * b * f + f * g * c + f * h * f,
        "(vii)": (a * a + l * a + l * l + a * m1 + l * m1 + n1) * g + (a + e + l + m1) * (h * d)
        + g * b * d + g * c * g + h * f * g,
        "(viii)": (e * e + l * e + l * l + e * m1 + l * m1 + n1) * h + (a + e + l + m1) * (g * b)
        + g * c * h + h * d * b + h * f * h,
        "(ix)": (a + l * 2 + m1) * (g * c) + (e + l * 2 + m1) * (h * f) + g * b * f + h * d * c
        + l ** 3 + l * l * m1 + l * n1 + s1,
    }


def _hermitian_residuals(M: QMatrix3, m1, n1, s1) -> dict:
    """The same nine entries after substituting d, g, h by conj(b), conj(c), conj(f)."""
    a, b, c = M[0, 0], M[0, 1], M[0, 2]
    e, f, l = M[1, 1], M[1, 2], M[2, 2]
    Nb, Nc, Nf = b.nrd(), c.nrd(), f.nrd()
    bc, cc, fc = b.conj(), c.conj(), f.conj()
    tot = Nb + Nc + Nf
    k = a + e + l + m1
    return {
        "(I)": (a * 2 + e + m1) * Nb + (a * 2 + l + m1) * Nc + (b * f * cc).trd()
        + a ** 3 + a * a * m1 + a * n1 + s1,
        "(II)": (a * a + a * e + e * e + a * m1 + e * m1 + n1 + tot) * b + k * (c * fc),
        "(III)": (a * a + a * l + l * l + a * m1 + l * m1 + n1 + tot) * c + k * (b * f),
        "(IV)": (a * a + a * e + e * e + a * m1 + e * m1 + n1 + tot) * bc + k * (f * cc),
        "(V)": (a + e * 2 + m1) * Nb + (e * 2 + l + m1) * Nf + (bc * c * fc).trd()
        + e ** 3 + e * e * m1 + e * n1 + s1,
        "(VI)": (e * e + e * l + l * l + e * m1 + l * m1 + n1 + tot) * f + k * (bc * c),
        "(VII)": (a * a + a * l + l * l + a * m1 + l * m1 + n1 + tot) * cc + k * (fc * bc),
        "(VIII)": (e * e + e * l + l * l + e * m1 + l * m1 + n1 + tot) * fc + k * (cc * b),
        "(IX)": (a + l * 2 + m1) * Nc + (e + l * 2 + m1) * Nf + (cc * b * f).trd()
        + l ** 3 + l * l * m1 + l * n1 + s1,
    }


_COMM_LABELS = ("i", "ii", "iii")


def _order_membership(cand: EmbeddingCandidate) -> None:
    order = cand.order
    for name, X in (("M", cand.M), ("N", cand.N)):
        if X.alg != order.alg:
            raise InvalidInput(f"{name} is not over the order's algebra")
        for i in range(3):
            for j in range(3):
                q = X[i, j] * cand.row_scale[i]
                if order.contains(q):
                    continue
                # a rational non-integer diagonal of M is reported by the (int) condition
                if name == "M" and i == j and q.is_rational():
                    continue
                raise InvalidInput(f"{name} entry ({i + 1},{j + 1}) = {X[i, j]!r} is not in the order")


def _combination(coeffs, M: QMatrix3) -> QMatrix3:
    c0, c1, c2 = (as_rational(x) for x in coeffs)
    return QMatrix3.identity(M.alg, c0) + M * c1 + (M * M) * c2


def condition_checks(cand: EmbeddingCandidate) -> list:
    """(condition id, thunk) pairs in evaluation order; a thunk returns None or a witness."""
    M, N = cand.M, cand.N
    cubic = cand.cubic_poly
    m1, n1, s1 = cubic.coeff(2), cubic.coeff(1), cubic.coeff(0)
    Md, Nd = M.dagger(), N.dagger()
    checks: list = []

    checks.append(("(5)", lambda: _entry_eq(M, Md, "M = M^dagger") or _entry_eq(N, -Nd, "N = -N^dagger")))
    for cid, (i, j), sign in (
        ("(b-d)", (0, 1), 1),
        ("(c-g)", (0, 2), 1),
        ("(f-h)", (1, 2), 1),
    ):
        checks.append((cid, lambda i=i, j=j: None if M[j, i] == M[i, j].conj() else
                       f"M[{j + 1},{i + 1}] = {M[j, i]!r} but conj(M[{i + 1},{j + 1}]) = {M[i, j].conj()!r}"))

    def int_check():
        for i in range(3):
            x = M[i, i]
            if not x.is_rational() or x.c[0].denominator != 1:
                return f"M[{i + 1},{i + 1}] = {x!r} is not a rational integer"
        return None

    checks.append(("(int)", int_check))
    for cid, (i, j) in (("(q-s)", (0, 1)), ("(r-v)", (0, 2)), ("(u-w)", (1, 2))):
        checks.append((cid, lambda i=i, j=j: None if N[j, i] == -N[i, j].conj() else
                       f"N[{j + 1},{i + 1}] = {N[j, i]!r} but -conj(N[{i + 1},{j + 1}]) = {-N[i, j].conj()!r}"))

    def trace_check():
        for i in range(3):
            if N[i, i].trd() != 0:
                return f"N[{i + 1},{i + 1}] = {N[i, i]!r} has reduced trace {_fmt(N[i, i].trd())}"
        return None

    checks.append(("(trace)", trace_check))

    MN, NM = M * N, N * M
    checks.append(("(1a)", lambda: _entry_eq(MN, NM, "MN = NM")))
    for i, j in itertools.product(range(3), range(3)):
        cid = f"({_COMM_LABELS[i]}-{_COMM_LABELS[j]})"
        checks.append((cid, lambda i=i, j=j: _zero_check(MN[i, j] - NM[i, j])))
    M2 = M * M
    # the other power-basis elements are 1 and M^2
    checks.append(("(1b)", lambda: _entry_eq(M * M2, M2 * M, "M M^2 = M^2 M")))

    cubic_at_M = M2 * M + M2 * m1 + M * n1 + QMatrix3.identity(M.alg, s1)
    checks.append(("(2)", lambda: None if cubic_at_M.is_zero() else _entry_eq(cubic_at_M, QMatrix3.zero(M.alg), "f(M) = 0")))
    lower = _cubic_residuals(M, m1, n1, s1)
    for cid, val in lower.items():
        checks.append((cid, lambda val=val: _zero_check(val)))
    upper = _hermitian_residuals(M, m1, n1, s1)
    for cid, val in upper.items():
        checks.append((cid, lambda val=val: _zero_check(val)))

    checks.append(("(3)", lambda: _entry_eq(N * Nd, _combination(cand.norm_coeffs, M), "N N^dagger = norm")))
    checks.append(("(4)", lambda: _entry_eq(N + Nd, _combination(cand.trace_coeffs, M), "N + N^dagger = trace")))

    a, b, c, e, f, l = M[0, 0], M[0, 1], M[0, 2], M[1, 1], M[1, 2], M[2, 2]
    checks.append(("m1", lambda: _zero_check(-(a + e + l) - m1)))
    checks.append(("n1", lambda: _zero_check(a * e + e * l + a * l - b.nrd() - c.nrd() - f.nrd() - n1)))
    checks.append(("s1", lambda: _zero_check(
        a * f.nrd() + e * c.nrd() + l * b.nrd() - a * e * l - (b * f * c.conj()).trd() - s1)))
    return checks


def check_candidate(cand: EmbeddingCandidate) -> ConstraintReport:
    _order_membership(cand)
    status: dict = {}
    first = None
    for cid, thunk in condition_checks(cand):
        witness = thunk()
        status[cid] = witness is None
        if witness is not None and first is None:
            first = (cid, witness)
    return ConstraintReport(status, first)


def charpoly12_matches(cand: EmbeddingCandidate) -> bool:
    """charpoly of the 12x12 rational image of M equals cubic^4."""
    return charpoly12(to_M12Q(cand.M)) == cand.cubic_poly ** 4


def noncommutativity_check(T: QMatrix3):
    """(True, (x, y)) for the first non-commuting pair of entries in row-major order, else (False, None)."""
    ents = T.entries()
    for x, y in itertools.combinations(ents, 2):
        if not x.commutes_with(y):
            return True, (x, y)
    return False, None


# ---------------------------------------------------------------------------
# exhaustive search over skew matrices with E1 = E2 = E3


@dataclass
class SearchOutcome:
    solutions: list
    exhausted: bool
    budget: int
    nodes_visited: int
    p: int = 0
    spec: Optional[CMFieldSpec] = None
    reports: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "spec": self.spec.to_json() if self.spec else None,
            "budget": self.budget,
            "exhausted": self.exhausted,
            "solutions": [s.to_json() for s in self.solutions],
            "nodes_visited": self.nodes_visited,
            "report": {
                "all_pass": all(r.overall for r in self.reports),
                "checked": len(self.reports),
            },
        }


_qmul = int_qmul


def _qadd(*xs):
    return tuple(map(sum, zip(*xs)))


def _qneg(a):
    return (-a[0], -a[1], -a[2], -a[3])


def _qconj(a):
    return (a[0], -a[1], -a[2], -a[3])


def _mmul(X, Y, e, q):
    return [
        [_qadd(*(_qmul(X[i][k], Y[k][j], e, q) for k in range(3))) for j in range(3)]
        for i in range(3)
    ]


class _SearchContext:
    """Integer-scaled data shared by all partitions: every quaternion is stored as den * coords."""

    def __init__(self, spec: CMFieldSpec, p: int, budget: int):
        self.spec = spec
        self.alg = build_algebra(p)
        self.order = maximal_order(self.alg)
        self.budget = budget
        self.e, self.q = self.alg.epsilon, self.alg.q
        self.den = 1
        for b in self.order.basis:
            for c in b.c:
                self.den = self.den * c.denominator // math.gcd(self.den, c.denominator)
        den = self.den

        def scaled(x: Quaternion):
            return tuple(int(c * den) for c in x.c)

        self.diag = defaultdict(list)
        for x in enumerate_norm_le(self.order, budget, trace_zero=True):
            self.diag[int(x.nrd())].append(scaled(x))
        self.off = defaultdict(list)
        for x in enumerate_norm_le(self.order, budget // 2):
            if not x.is_zero():
                self.off[int(x.nrd())].append(scaled(x))
        self.off[0] = [(0, 0, 0, 0)]

        cubic = spec.alpha_charpoly
        lcm = 1
        for c in cubic.coeffs:
            lcm = lcm * c.denominator // math.gcd(lcm, c.denominator)
        d2 = den * den
        # L * (M'^3 + m1 d2 M'^2 + n1 d2^2 M' + s1 d2^3) with M' = d2 * M
        self.cub = tuple(int(c * lcm) * d2 ** i for i, c in enumerate(reversed(cubic.coeffs)))
        # eigenvalues of -M are the negated conjugates of alpha; diagonal entries of -M lie between them
        vals = [-v for v in spec.alpha.embeddings()]
        self.row_lo = int(mpmath.ceil(min(vals) - mpmath.mpf("1e-9")))
        self.row_hi = int(mpmath.floor(max(vals) + mpmath.mpf("1e-9")))
        m1, n1 = cubic.coeff(2), cubic.coeff(1)
        self.tr_alpha2 = m1 * m1 - 2 * n1

    def nrd(self, x) -> int:
        # integer Nrd of the scaled quaternion, equal to den^2 * Nrd
        return x[0] * x[0] + self.e * x[1] * x[1] + self.q * x[2] * x[2] + self.e * self.q * x[3] * x[3]

    def partitions(self) -> list:
        B = self.budget
        norms = sorted(self.diag)
        out = []
        for n1, n2, n3 in itertools.product(norms, repeat=3):
            rem = B - n1 - n2 - n3
            if rem >= 0 and rem % 2 == 0:
                out.append((n1, n2, n3))
        return out

    def unscale(self, x) -> Quaternion:
        return self.alg(*(Fraction(c, self.den) for c in x))

    def run_partition(self, triple):
        """Solutions (as scaled 6-tuples r, v, z, s, t, w) and node count for one diagonal-norm triple."""
        n1, n2, n3 = triple
        R = (self.budget - n1 - n2 - n3) // 2
        e, q = self.e, self.q
        d2 = self.den * self.den
        lo, hi = self.row_lo, self.row_hi
        c3, c2, c1, c0 = self.cub
        sols, nodes = [], 0
        off_norms = sorted(self.off)
        for m12 in off_norms:
            for m13 in off_norms:
                m23 = R - m12 - m13
                if m23 not in self.off:
                    continue
                rows = (n1 + m12 + m13, n2 + m12 + m23, n3 + m13 + m23)
                if any(not lo <= x <= hi for x in rows):
                    continue
                # Tr(M^2) = Tr(alpha^2) fixes the off-diagonal norms of M = Q^2
                diag_sq = sum(x * x for x in rows)
                off_target = (self.tr_alpha2 - diag_sq) / 2
                if off_target < 0 or off_target.denominator != 1:
                    continue
                off_target = int(off_target) * d2 * d2
                Mdiag = [(-x * d2, 0, 0, 0) for x in rows]
                for r, v, z, s, t, w in itertools.product(
                    self.diag[n1], self.diag[n2], self.diag[n3], self.off[m12], self.off[m13], self.off[m23]
                ):
                    nodes += 1
                    sc, tc, wc = _qconj(s), _qconj(t), _qconj(w)
                    M12 = _qadd(_qmul(r, s, e, q), _qmul(s, v, e, q), _qneg(_qmul(t, wc, e, q)))
                    M13 = _qadd(_qmul(r, t, e, q), _qmul(s, w, e, q), _qmul(t, z, e, q))
                    M23 = _qadd(_qneg(_qmul(sc, t, e, q)), _qmul(v, w, e, q), _qmul(w, z, e, q))
                    if self.nrd(M12) + self.nrd(M13) + self.nrd(M23) != off_target:
                        continue
                    M = [
                        [Mdiag[0], M12, M13],
                        [_qconj(M12), Mdiag[1], M23],
                        [_qconj(M13), _qconj(M23), Mdiag[2]],
                    ]
                    M2 = _mmul(M, M, e, q)
                    M3 = _mmul(M2, M, e, q)
                    ok = True
                    for i in range(3):
                        for j in range(3):
                            val = tuple(
                                c3 * M3[i][j][k] + c2 * M2[i][j][k] + c1 * M[i][j][k] + (c0 if i == j and k == 0 else 0)
                                for k in range(4)
                            )
                            if any(val):
                                ok = False
                                break
                        if not ok:
                            break
                    if ok:
                        sols.append((r, v, z, s, t, w))
        return sols, nodes


_WORKER_CTX: Optional[_SearchContext] = None


def _worker_init(spec_json, p, budget):
    global _WORKER_CTX
    _WORKER_CTX = _SearchContext(spec_from_json(spec_json), p, budget)


def _worker_run(triple):
    return _WORKER_CTX.run_partition(triple)


def skew_matrix(alg, r, v, z, s, t, w) -> QMatrix3:
    return QMatrix3(alg, [[r, s, t], [-s.conj(), v, w], [-t.conj(), -w.conj(), z]])


def search_budget(spec: CMFieldSpec) -> int:
    B = -spec.alpha.trace()
    if B.denominator != 1:
        raise InvalidInput(f"budget -Tr(alpha) = {format_rational(B)} is not an integer")
    return int(B)


def search_solutions(
    spec: CMFieldSpec,
    p: int,
    budget: Optional[int] = None,
    workers: int = 1,
    certify: bool = True,
) -> SearchOutcome:
    """Every skew Q over one maximal order with Q^2 satisfying the cubic of alpha, within the norm budget.

    Enumeration order: diagonal-norm triples, then off-diagonal norm triples,
    then lexicographic order inside each norm shell.  Identical inputs give
    identical outcomes for any worker count.
    """
    if spec.alpha.is_rational():
        raise InvalidInput("the search needs alpha generating K+")
    B = search_budget(spec) if budget is None else int(budget)
    if B < 0:
        raise InvalidInput("budget must be non-negative")
    alg = build_algebra(p)
    # two off-diagonal entries are nonzero in any solution (otherwise alpha has a rational conjugate)
    if B < 4:
        return SearchOutcome([], True, B, 0, p, spec)

    ctx = _SearchContext(spec, p, B)
    parts = ctx.partitions()
    if workers > 1 and len(parts) > 1:
        with ProcessPoolExecutor(max_workers=workers, initializer=_worker_init,
                                 initargs=(spec.to_json(), p, B)) as pool:
            results = list(pool.map(_worker_run, parts))
    else:
        results = [ctx.run_partition(t) for t in parts]

    solutions, reports, nodes = [], [], 0
    for sols, n in results:
        nodes += n
        for raw in sols:
            Q = skew_matrix(alg, *(ctx.unscale(x) for x in raw))
            cand = EmbeddingCandidate(Q * Q, Q, ctx.order, spec)
            if certify:
                rep = check_candidate(cand)
                if not rep.overall:
                    raise InternalError(f"search accepted a candidate failing {rep.first_failure}")
                if not charpoly12_matches(cand):
                    raise InternalError("accepted candidate has the wrong 12x12 characteristic polynomial")
                reports.append(rep)
            solutions.append(cand)
    return SearchOutcome(solutions, True, B, nodes, p, spec, reports)


# ---------------------------------------------------------------------------
# degenerate solutions for fields with an imaginary quadratic subfield


def symmetric_matrix_with_charpoly(c: UniPoly, max_denominator: int = 1) -> list:
    """A symmetric rational 3x3 matrix with characteristic polynomial c, by bounded search.

    For each denominator D an integer matrix with characteristic polynomial
    D^3 c(x/D) is sought; entries are bounded through the trace of S^2.
    """
    if c.degree != 3 or c.lc() != 1:
        raise InvalidInput("need a monic cubic")
    for D in range(1, max_denominator + 1):
        cd = c.scale_roots(D)
        if not cd.is_integral():
            continue
        t1 = int(-cd.coeff(2))
        t2 = t1 * t1 - 2 * int(cd.coeff(1))
        if t2 < 0:
            continue
        hb = math.isqrt(t2)
        for a in range(-hb, hb + 1):
            for d in range(-hb, hb + 1):
                f = t1 - a - d
                rest = t2 - a * a - d * d - f * f
                if rest < 0 or rest % 2:
                    continue
                rest //= 2
                ob = math.isqrt(rest)
                for b in sorted(range(-ob, ob + 1), key=lambda x: (abs(x), x < 0)):
                    r1 = rest - b * b
                    oc = math.isqrt(r1)
                    for cc in sorted(range(-oc, oc + 1), key=lambda x: (abs(x), x < 0)):
                        r2 = r1 - cc * cc
                        ee = math.isqrt(r2)
                        if ee * ee != r2:
                            continue
                        for e in sorted({ee, -ee}, key=lambda x: x < 0):
                            S = [[a, b, cc], [b, d, e], [cc, e, f]]
                            if mat_charpoly(S) == cd:
                                return [[Fraction(x, D) for x in row] for row in S]
    raise NotFound("no symmetric matrix found within the configured bounds")


def find_omega(order: OrderBasis, d: int) -> Quaternion:
    """First order element (lexicographically) with trace 0 and square d."""
    for x in enumerate_norm_le(order, -d, trace_zero=True):
        if x.nrd() == -d:
            return x
    raise NoWitness(f"no element of square {d} in the maximal order at p = {order.p}")


def degenerate_solution(spec: CMFieldSpec, p: int, max_denominator: int = 1) -> EmbeddingCandidate:
    witness = imaginary_quadratic_subfield(spec)
    if witness is None:
        raise NoWitness("K has no imaginary quadratic subfield")
    alg = build_algebra(p)
    order = maximal_order(alg)
    omega = find_omega(order, witness.d)
    d = witness.d

    # eta = sqrt(alpha) = sqrt(d) * s: M = d S^2, N = omega S, usable when S is integral
    s_poly = witness.s.charpoly()
    if s_poly.is_integral() and not spec.alpha.is_rational():
        try:
            S = symmetric_matrix_with_charpoly(s_poly, max_denominator)
        except NotFound:
            S = None
        if S is not None:
            Sq = QMatrix3.from_rational(alg, S)
            cand = EmbeddingCandidate((Sq * Sq) * d, Sq * omega, order, spec)
            try:
                if check_candidate(cand).overall:
                    return cand
            except InvalidInput:
                pass

    # fallback: the order generated by beta and sqrt(d), with eta = sqrt(d)
    g = spec.base.g
    Mb = symmetric_matrix_with_charpoly(g, max_denominator)
    cand = EmbeddingCandidate(
        QMatrix3.from_rational(alg, Mb),
        QMatrix3.identity(alg, 1) * omega,
        order,
        spec,
        cubic=g,
        trace_coeffs=(Fraction(0), Fraction(0), Fraction(0)),
        norm_coeffs=(Fraction(-d), Fraction(0), Fraction(0)),
    )
    rep = check_candidate(cand)
    if not rep.overall:
        raise InternalError(f"degenerate construction failed {rep.first_failure}")
    return cand


def certificate_json(spec: CMFieldSpec, p: int, candidates: Sequence[EmbeddingCandidate], budget=None,
                     exhausted=True, nodes_visited=0) -> dict:
    reports = [check_candidate(c) for c in candidates]
    return {
        "p": p,
        "spec": spec.to_json(),
        "budget": budget,
        "exhausted": exhausted,
        "solutions": [c.to_json() for c in candidates],
        "nodes_visited": nodes_visited,
        "report": {"all_pass": all(r.overall for r in reports), "checked": len(reports)},
    }


def check_certificate(data: dict) -> list:
    """Re-check every solution in a certificate file; returns one ConstraintReport per solution."""
    required = {"p", "spec", "solutions"}
    if not isinstance(data, dict) or not required <= set(data):
        raise InvalidInput(f"certificate needs keys {sorted(required)}")
    spec = spec_from_json(data["spec"])
    order = maximal_order(build_algebra(int(data["p"])))
    return [check_candidate(candidate_from_json(s, order, spec)) for s in data["solutions"]]
