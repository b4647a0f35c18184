import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from sexticcm.curves import (
    CoverSpec,
    FiniteField,
    PicardSpec,
    ReductionClass,
    conway_free_modulus,
    count_points,
    cover_cm_type,
    eigenspace_dims,
    format_factorization,
    functional_equation_holds,
    l_polynomial,
    newton_slopes,
    normalize_cover,
    predicted_counts,
    quartic_mod_p,
    rh_genus,
    sweep,
    weil_check,
    zeta_classify,
)
from sexticcm.errors import BadReduction, InvalidInput
from sexticcm.exactmath import UniPoly

C1, C2, C3 = CoverSpec(9, 1, 3), CoverSpec(7, 1, 2), CoverSpec(7, 1, 1)
D1, D2 = CoverSpec(5, 1, 1), CoverSpec(8, 1, 4)
PICARD = PicardSpec(UniPoly([-5**2 * 31 * 13**2, 2**3 * 13 * 5 * 47, -13 * 2 * 7**2, 0, 1]))
X = sp.Symbol("x")


def valid_covers(max_n=12):
    for N in range(2, max_n + 1):
        for a1 in range(1, N):
            for a2 in range(1, N):
                if math.gcd(N, math.gcd(a1, a2)) == 1 and (a1 + a2) % N:
                    yield CoverSpec(N, a1, a2)


# --- genus, normal forms, CM-types ---------------------------------------------------


@pytest.mark.parametrize("spec, g", [(C1, 3), (C2, 3), (C3, 3), (D1, 2), (D2, 2)])
def test_genus_examples(spec, g):
    assert rh_genus(spec) == g


def test_invalid_covers():
    for args in [(1, 1, 1), (7, 0, 1), (7, 3, 4), (6, 2, 4), (7, 8, 1)]:
        with pytest.raises(InvalidInput):
            CoverSpec(*args)


def test_genus_equals_sum_of_eigenspace_dimensions():
    for spec in valid_covers():
        assert sum(eigenspace_dims(spec).values()) == rh_genus(spec)
        assert all(d >= 0 for d in eigenspace_dims(spec).values())


def orbit(spec):
    N = spec.N
    out = set()
    for c in range(1, N):
        if math.gcd(c, N) == 1:
            for perm in itertools.permutations(spec.exponents):
                out.add(tuple((c * a) % N for a in perm))
    return out


def test_normal_form_is_constant_on_orbits_and_idempotent():
    for spec in valid_covers():
        nf = normalize_cover(spec)
        assert nf == (spec.N,) + min(orbit(spec))
        again = CoverSpec(spec.N, nf[1], nf[2])
        assert normalize_cover(again) == nf
        for b in orbit(spec):
            if 0 not in b:
                assert normalize_cover(CoverSpec(spec.N, b[0], b[1])) == nf


def test_normal_form_examples():
    assert normalize_cover(CoverSpec(7, 2, 4)) == normalize_cover(C2)
    assert normalize_cover(C1) == normalize_cover(CoverSpec(9, *normalize_cover(C1)[1:3]))
    assert normalize_cover(C3) != normalize_cover(C2)


@pytest.mark.parametrize("spec, typ, prim", [(C1, (1, 2, 4), True), (C2, (1, 2, 4), False), (C3, (1, 2, 3), True)])
def test_cm_types(spec, typ, prim):
    t = cover_cm_type(spec)
    assert t.has_cm and t.cm_type == typ and t.primitive is prim
    assert len(t.cm_type) == rh_genus(spec)


def test_cm_type_condition():
    for spec in valid_covers():
        t = cover_cm_type(spec)
        phi = sum(1 for c in range(1, spec.N) if math.gcd(c, spec.N) == 1)
        assert t.has_cm == (2 * rh_genus(spec) == phi)
        if t.has_cm:
            assert len(t.cm_type) == rh_genus(spec)
            # a CM-type: exactly one of i, -i for every unit i
            units = [c for c in range(1, spec.N) if math.gcd(c, spec.N) == 1]
            assert all((i in t.cm_type) != ((-i) % spec.N in t.cm_type) for i in units)


def test_cm_type_stable_under_isomorphism_up_to_scaling():
    for spec in valid_covers(10):
        t = cover_cm_type(spec)
        if not t.has_cm:
            continue
        N = spec.N
        for b in orbit(spec):
            if 0 in b:
                continue
            other = cover_cm_type(CoverSpec(N, b[0], b[1]))
            scaled = [{(c * i) % N for i in t.cm_type} for c in range(1, N) if math.gcd(c, N) == 1]
            assert set(other.cm_type) in scaled


# --- finite fields ---------------------------------------------------------------------


@pytest.mark.parametrize("p, k", [(2, 2), (2, 3), (3, 2), (3, 3), (5, 2), (7, 3), (13, 2)])
def test_modulus_is_least_irreducible(p, k):
    m = conway_free_modulus(p, k)
    assert sp.Poly(list(reversed(m)), X, modulus=p).is_irreducible
    for n in range(sum(c * p**i for i, c in enumerate(m[:-1]))):
        cs = [(n // p**i) % p for i in range(k)] + [1]
        assert not sp.Poly(list(reversed(cs)), X, modulus=p).is_irreducible


@pytest.mark.parametrize("p, k", [(2, 3), (3, 2), (5, 2), (7, 2)])
def test_field_arithmetic_against_sympy(p, k):
    F = FiniteField(p, k)
    els = F.all_elements()
    rng = np.random.default_rng(p * 10 + k)
    idx = rng.integers(0, F.q, size=(40, 2))
    mod = sp.Poly(list(reversed(F.modulus)), X, modulus=p)
    for i, j in idx:
        got = F.mul(els[i], els[j])
        a = sp.Poly(list(reversed(els[i].tolist())), X, modulus=p)
        b = sp.Poly(list(reversed(els[j].tolist())), X, modulus=p)
        r = (a * b).rem(mod)
        want = [int(c) % p for c in reversed(r.all_coeffs())] + [0] * k
        assert got.tolist() == want[:k]
    # Frobenius fixes nothing but: x^q = x for all x, and the unit group is cyclic of order q - 1
    assert np.array_equal(F.pow(els, F.q), els)
    assert F.is_one(F.pow(els[1:], F.q - 1)).all()


# --- point counts ----------------------------------------------------------------------


def brute_cover_affine_fp(spec, p):
    n = 0
    for x in range(2, p):
        v = pow(x, spec.a1, p) * pow(x - 1, spec.a2, p) % p
        n += sum(1 for y in range(1, p) if pow(y, spec.N, p) == v)
    return n


def brute_picard(f_coeffs, p, k, c):
    """Points of y^3 = f(x) over F_p[t]/(t^k - c) plus the single point at infinity."""

    def mul(a, b):
        r = [0] * (2 * k - 1)
        for i in range(k):
            for j in range(k):
                r[i + j] += a[i] * b[j]
        for d in range(2 * k - 2, k - 1, -1):
            r[d - k] += c * r[d]
            r[d] = 0
        return tuple(x % p for x in r[:k])

    els = list(itertools.product(range(p), repeat=k))
    cubes = {}
    for y in els:
        y3 = mul(mul(y, y), y)
        cubes[y3] = cubes.get(y3, 0) + 1
    total = 1
    for x in els:
        acc = (0,) * k
        for co in reversed(f_coeffs):
            acc = mul(acc, x)
            acc = ((acc[0] + co) % p,) + acc[1:]
        total += cubes.get(acc, 0)
    return total


@pytest.mark.parametrize("spec", [C1, C2, C3, D1, D2])
@pytest.mark.parametrize("p", [11, 13, 17, 19, 29, 37, 43])
def test_affine_part_matches_brute_force(spec, p):
    if spec.N % p == 0:
        return
    total = count_points(spec, p, 1)
    # the branch points contribute the remaining rational points
    above = sum(math.gcd(math.gcd(spec.N, a), p - 1) for a in spec.exponents[1:])
    g1 = math.gcd(spec.N, spec.a1)
    roots_above_zero = sum(1 for w in range(1, p) if pow(w, g1, p) == pow(-1, spec.a2, p) % p)
    assert total == brute_cover_affine_fp(spec, p) + roots_above_zero + above


@pytest.mark.parametrize("k, c", [(1, 0), (2, -1), (3, 2)])
def test_picard_counts_match_brute_force_at_7(k, c):
    assert count_points(PICARD, 7, k) == brute_picard(PICARD.int_coeffs, 7, k, c)


@pytest.mark.parametrize("k, c", [(1, 0), (2, 2)])
def test_picard_counts_match_brute_force_at_11(k, c):
    # 11 = 2 mod 3 and x^2 - 2 is irreducible mod 11
    assert count_points(PICARD, 11, k) == brute_picard(PICARD.int_coeffs, 11, k, c)


@pytest.mark.parametrize("curve, p", [(C1, 2), (C1, 7), (C3, 2), (C3, 3), (C2, 2), (D1, 3), (D2, 3), (PICARD, 7), (C1, 19)])
def test_L_polynomial_predicts_higher_counts(curve, p):
    z = zeta_classify(curve, p)
    g = z.genus
    kmax = 2 * g if p ** (2 * g) <= 10**6 else g + 1
    assert predicted_counts(z.L, p, kmax) == [count_points(curve, p, k) for k in range(1, kmax + 1)]


def test_weil_bound_for_first_count():
    N1 = count_points(C1, 19, 1)
    assert 19 + 1 - 6 * math.sqrt(19) <= N1 <= 19 + 1 + 6 * math.sqrt(19)


@pytest.mark.parametrize("curve, p", [(C1, 3), (C3, 7), (PICARD, 5), (PICARD, 3), (PICARD, 2), (PICARD, 13)])
def test_bad_primes_are_rejected(curve, p):
    with pytest.raises(BadReduction) as info:
        count_points(curve, p, 1)
    assert info.value.p == p and info.value.reason


# --- the Picard quartic ----------------------------------------------------------------


def test_picard_quartic_mod_5():
    facs = quartic_mod_p(PICARD, 5)
    assert facs == [((0, 1), 2), ((2, 1), 1), ((3, 1), 1)]
    assert format_factorization(facs) == "x^2 * (x + 2) * (x + 3)"


def test_x4_plus_1_mod_2():
    assert quartic_mod_p(PicardSpec(UniPoly([1, 0, 0, 0, 1])), 2) == [((1, 1), 4)]


def test_picard_quartic_mod_13_is_a_fourth_power():
    assert quartic_mod_p(PICARD, 13) == [((0, 1), 4)]


@given(st.lists(st.integers(-50, 50), min_size=5, max_size=5).filter(lambda c: c[4] != 0),
       st.sampled_from([2, 3, 5, 7, 11, 13]))
def test_factorization_multiplies_back(coeffs, p):
    f = UniPoly(coeffs)
    try:
        spec = PicardSpec(f)
    except InvalidInput:
        return
    facs = quartic_mod_p(spec, p)
    prod = sp.Poly(1, X, modulus=p)
    for cs, m in facs:
        fac = sp.Poly(list(reversed(cs)), X, modulus=p)
        assert fac.is_irreducible and fac.LC() == 1
        prod *= fac ** m
    lc = coeffs[4] % p
    if lc:
        target = sp.Poly(list(reversed(coeffs)), X, modulus=p)
        assert prod * lc == target


def test_picard_rejects_bad_input():
    with pytest.raises(InvalidInput):
        PicardSpec(UniPoly([0, 0, 1, 0, 1]))  # x^2 (x^2 + 1) has a double root
    with pytest.raises(InvalidInput):
        PicardSpec(UniPoly([1, 0, 0, 1]))
    with pytest.raises(InvalidInput):
        PicardSpec.from_json({"f": [1, 2, 3]})


# --- zeta functions and Newton polygons -----------------------------------------------


def hull_oracle(coeffs, p):
    """Lower convex hull by brute force over all pairs of points."""
    pts = [(i, sp.multiplicity(p, c)) for i, c in enumerate(coeffs) if c]
    slopes = []
    n = pts[-1][0]
    for x in range(n):
        # slope on [x, x+1]: max over supporting lines of the hull below x + 1/2
        best = None
        for (i1, v1), (i2, v2) in itertools.combinations(pts, 2):
            if i1 <= x < i2:
                s = Fraction(v2 - v1, i2 - i1)
                if all(v >= v1 + s * (i - i1) for i, v in pts):
                    best = s
        slopes.append(best)
    out = {}
    for s in slopes:
        out[s] = out.get(s, 0) + 1
    return tuple(sorted(out.items()))


@given(st.lists(st.integers(-10**4, 10**4), min_size=2, max_size=8).filter(lambda c: c[0] != 0 and c[-1] != 0),
       st.sampled_from([2, 3, 5, 7]))
def test_newton_slopes_match_hull_oracle(coeffs, p):
    assert newton_slopes(coeffs, p) == hull_oracle(coeffs, p)


def test_zeta_c1_at_19_is_ordinary():
    z = zeta_classify(C1, 19)
    assert z.classification is ReductionClass.ORDINARY and z.p_rank == 3


def test_zeta_c1_at_7_is_intermediate():
    z = zeta_classify(C1, 7)
    assert z.classification is ReductionClass.INTERMEDIATE and z.p_rank == 0
    assert z.slopes != ((Fraction(1, 2), 6),)


def test_zeta_picard_at_7():
    z = zeta_classify(PICARD, 7)
    # confirmed by the brute-force counts above: N_1, N_2, N_3 = 8, 50, 365
    assert z.counts == (8, 50, 365)
    assert z.L == (1, 0, 0, 7, 0, 0, 343)
    assert z.slopes == ((Fraction(1, 3), 3), (Fraction(2, 3), 3))
    assert z.p_rank == 0


def test_L_polynomial_from_counts_of_an_elliptic_curve():
    # y^2 = x^3 + x over F_5 has 4 points, so a_5 = 2 and L = 1 - 2T + 5T^2
    assert l_polynomial([4], 5, 1) == (1, -2, 5)


@pytest.mark.parametrize("curve", [C1, C2, C3, D1, D2, PICARD])
def test_zeta_invariants_small_primes(curve):
    for p in sp.primerange(2, 40):
        try:
            z = zeta_classify(curve, p)
        except BadReduction:
            continue
        assert z.L[0] == 1 and len(z.L) == 2 * z.genus + 1
        assert functional_equation_holds(z.L, p)
        assert weil_check(z.L, p)


def test_functional_equation_detects_corruption():
    L = list(zeta_classify(C3, 29).L)
    assert functional_equation_holds(L, 29)
    L[5] += 1
    assert not functional_equation_holds(L, 29)


def test_weil_check_detects_corruption():
    assert not weil_check((1, 0, 0, 7, 0, 0, 300), 7)


def test_sweep_shape():
    rows = sweep(C3, 20)
    assert [r["p"] for r in rows] == [2, 3, 5, 7, 11, 13, 17, 19]
    assert "bad" in rows[3]


def test_picard_hasse_witt_oracle_at_7():
    # Cartier-Manin from coefficients of f^2 (dx/y) and f^4 (dx/y^2, x dx/y^2); 7 = 1 mod 3
    x = sp.Symbol("x")
    f = sum(c * x**i for i, c in enumerate(PICARD.int_coeffs))
    p = 7

    def coeff(e, k):
        return int(sp.Poly(sp.expand(f**e), x).coeff_monomial(x**k)) % p

    assert coeff(2, p - 1) == 0
    H = sp.Matrix(2, 2, lambda i, j: coeff(4, p * (i + 1) - (j + 1)))
    assert H.rank(iszerofunc=lambda v: v % p == 0) == 1
    # nilpotent, so the stable rank (the p-rank) is zero even though H itself has rank one
    assert (H * H).applyfunc(lambda v: v % p) == sp.zeros(2, 2)
    assert zeta_classify(PICARD, 7).p_rank == 0
