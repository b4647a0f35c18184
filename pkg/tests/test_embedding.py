import itertools
import math
import random
from collections import defaultdict
from fractions import Fraction

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from sexticcm.embedding import (
    EmbeddingCandidate,
    _cubic_residuals,
    _hermitian_residuals,
    certificate_json,
    charpoly12_matches,
    check_candidate,
    check_certificate,
    degenerate_solution,
    find_omega,
    noncommutativity_check,
    search_solutions,
    skew_matrix,
    symmetric_matrix_with_charpoly,
)
from sexticcm.errors import InvalidInput, NotFound, NoWitness
from sexticcm.exactmath import UniPoly, mat_charpoly, sturm_sign_data
from sexticcm.quaternion import (
    QMatrix3,
    build_algebra,
    charpoly12,
    enumerate_norm_le,
    lift_T_normalized,
    maximal_order,
    to_M12Q,
)

X = sp.Symbol("x")


def rand_q(alg, rng, den=3):
    return alg(*(Fraction(rng.randint(-4, 4), rng.randint(1, den)) for _ in range(4)))


def rand_hermitian(alg, rng):
    a, e, l = (Fraction(rng.randint(-6, 6), rng.randint(1, 2)) for _ in range(3))
    b, c, f = rand_q(alg, rng), rand_q(alg, rng), rand_q(alg, rng)
    return QMatrix3(alg, [[alg(a), b, c], [b.conj(), alg(e), f], [c.conj(), f.conj(), alg(l)]])


def moore_coefficients(M):
    """m1, n1, s1 of the reduced characteristic polynomial x^3 + m1 x^2 + n1 x + s1 of a Hermitian M."""
    a, b, c, e, f, l = M[0, 0].c[0], M[0, 1], M[0, 2], M[1, 1].c[0], M[1, 2], M[2, 2].c[0]
    m1 = -(a + e + l)
    n1 = a * e + e * l + a * l - b.nrd() - c.nrd() - f.nrd()
    s1 = a * f.nrd() + e * c.nrd() + l * b.nrd() - a * e * l - (b * f * c.conj()).trd()
    return m1, n1, s1


# --- the printed entry equations against direct matrix arithmetic ----------------


@settings(max_examples=25)
@given(st.integers(0, 10**9))
def test_entry_equations_are_entries_of_the_cubic(seed):
    rng = random.Random(seed)
    alg = build_algebra(rng.choice([2, 3, 5, 13]))
    # arbitrary (non-Hermitian) M with rational diagonal
    rows = [[rand_q(alg, rng) for _ in range(3)] for _ in range(3)]
    for i in range(3):
        rows[i][i] = alg(Fraction(rng.randint(-5, 5), rng.randint(1, 3)))
    M = QMatrix3(alg, rows)
    m1, n1, s1 = (Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(3))
    direct = M * M * M + (M * M) * m1 + M * n1 + QMatrix3.identity(alg, s1)
    res = _cubic_residuals(M, m1, n1, s1)
    labels = ["(i)", "(ii)", "(iii)", "(iv)", "(v)", "(vi)", "(vii)", "(viii)", "(ix)"]
    for k, lab in enumerate(labels):
        assert res[lab] == direct[k // 3, k % 3], lab


@settings(max_examples=25)
@given(st.integers(0, 10**9))
def test_hermitian_relations_are_entries_of_the_cubic(seed):
    rng = random.Random(100 + seed)
    alg = build_algebra(rng.choice([2, 3, 7, 17]))
    M = rand_hermitian(alg, rng)
    m1, n1, s1 = (Fraction(rng.randint(-9, 9)) for _ in range(3))
    direct = M * M * M + (M * M) * m1 + M * n1 + QMatrix3.identity(alg, s1)
    res = _hermitian_residuals(M, m1, n1, s1)
    labels = ["(I)", "(II)", "(III)", "(IV)", "(V)", "(VI)", "(VII)", "(VIII)", "(IX)"]
    for k, lab in enumerate(labels):
        val = res[lab]
        expect = direct[k // 3, k % 3]
        if k in (0, 4, 8):
            assert expect.is_rational() and val == expect.c[0], lab
        else:
            assert val == expect, lab


@pytest.mark.parametrize("seed", range(6))
def test_coefficient_identities_give_the_12x12_charpoly(seed):
    # independent oracle: a Hermitian quaternionic matrix has every eigenvalue with real multiplicity 4
    rng = random.Random(200 + seed)
    alg = build_algebra(rng.choice([3, 5, 13]))
    M = rand_hermitian(alg, rng)
    m1, n1, s1 = moore_coefficients(M)
    cubic = UniPoly([s1, n1, m1, 1])
    assert charpoly12(to_M12Q(M)) == cubic ** 4
    # and M satisfies its reduced characteristic polynomial
    assert (M * M * M + (M * M) * m1 + M * n1 + QMatrix3.identity(alg, s1)).is_zero()


# --- the degenerate construction ---------------------------------------------------


def test_zeta7_degenerate_at_7_passes_everything(zeta7):
    cand = degenerate_solution(zeta7, 7)
    rep = check_candidate(cand)
    assert rep.overall and rep.first_failure is None
    assert len(rep.status) == 44
    assert charpoly12_matches(cand)
    omega = cand.N[0, 0]
    assert omega * omega == cand.M.alg(-7)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_d12_degenerate(d12, p):
    cand = degenerate_solution(d12, p)
    assert check_candidate(cand).overall and charpoly12_matches(cand)


def test_zeta7_at_split_prime_has_no_witness(zeta7):
    # 11 splits in Q(sqrt(-7)), so no trace-zero element squares to -7 in B_{11,inf}
    with pytest.raises(NoWitness):
        degenerate_solution(zeta7, 11)


def test_case3_has_no_degenerate_solution(case3):
    with pytest.raises(NoWitness):
        degenerate_solution(case3, 7)


def test_find_omega_oracle():
    order = maximal_order(build_algebra(7))
    w = find_omega(order, -7)
    assert w.trd() == 0 and w.nrd() == 7 and order.contains(w)


def test_symmetric_matrix_examples():
    split = UniPoly.from_roots([1, 2, 3])
    S = symmetric_matrix_with_charpoly(split)
    assert mat_charpoly(S) == split
    g = UniPoly([-1, -2, 1, 1])
    assert mat_charpoly(symmetric_matrix_with_charpoly(g)) == g
    c = UniPoly([7, 14, 7, 1])
    S = symmetric_matrix_with_charpoly(c)
    assert mat_charpoly(S) == c
    assert sturm_sign_data(mat_charpoly(S)) == (3, 3)
    assert all(S[i][j] == S[j][i] for i in range(3) for j in range(3))


def test_symmetric_matrix_not_found_for_complex_roots():
    with pytest.raises(NotFound):
        symmetric_matrix_with_charpoly(UniPoly([-2, 0, 0, 1]))


# --- corrupted candidates ----------------------------------------------------------


@pytest.fixture(scope="module")
def good(zeta7):
    return degenerate_solution(zeta7, 7)


def with_matrices(cand, M=None, N=None):
    return EmbeddingCandidate(M or cand.M, N or cand.N, cand.order, cand.spec, cand.cubic,
                              cand.trace_coeffs, cand.norm_coeffs, cand.row_scale)


def test_non_skew_N_fails_condition_5(good):
    N = good.N.replace(0, 0, good.N[0, 0] * -1).replace(1, 0, good.N.alg(1))
    rep = check_candidate(with_matrices(good, N=N))
    assert rep.first_failure[0] == "(5)" and "N = -N^dagger" in rep.first_failure[1]


def test_non_integer_diagonal_fails_int(good):
    alg = good.M.alg
    M = good.M.replace(0, 0, good.M[0, 0] + alg(Fraction(1, 2)))
    rep = check_candidate(with_matrices(good, M=M))
    assert rep.first_failure[0] == "(int)"


def test_wrong_diagonal_breaks_the_cubic(good):
    alg = good.M.alg
    M = good.M.replace(1, 1, good.M[1, 1] + alg(1))
    rep = check_candidate(with_matrices(good, M=M))
    assert rep.first_failure[0] == "(2)"
    assert not rep.status["(v)"] and not rep.status["(V)"]


def test_noncommuting_N_breaks_1a(good):
    alg = good.M.alg
    N = QMatrix3.identity(alg) * (alg.i * 0)  # start from zero
    N = N.replace(0, 1, alg.j).replace(1, 0, alg.j)  # skew since conj(j) = -j
    rep = check_candidate(with_matrices(good, N=N))
    assert rep.first_failure[0] == "(1a)"


def test_entry_outside_order_is_invalid_input(good):
    alg = good.M.alg
    M = good.M.replace(0, 1, alg(0, Fraction(1, 3))).replace(1, 0, alg(0, Fraction(-1, 3)))
    with pytest.raises(InvalidInput):
        check_candidate(with_matrices(good, M=M))


def test_certificate_round_trip(good, zeta7):
    cert = certificate_json(zeta7, 7, [good])
    assert cert["report"]["all_pass"]
    reps = check_certificate(cert)
    assert len(reps) == 1 and reps[0].overall


# --- noncommutativity --------------------------------------------------------------


def test_noncommutativity_examples():
    alg = build_algebra(5)
    rational = QMatrix3.from_rational(alg, [[1, 2, 3], [4, 5, 6], [7, 8, 9]])
    assert noncommutativity_check(rational) == (False, None)
    T = QMatrix3.zero(alg).replace(0, 1, alg.i).replace(2, 2, alg.j)
    ok, (x, y) = noncommutativity_check(T)
    assert ok and {x, y} == {alg.i, alg.j}


# --- search ------------------------------------------------------------------------


def _np_qmul(x, y, a, b):
    """Quaternion product on integer arrays for i^2 = a, j^2 = b, k = ij (written independently)."""
    x1, y1, z1, w1 = (x[..., k] for k in range(4))
    x2, y2, z2, w2 = (y[..., k] for k in range(4))
    return np.stack([
        x1 * x2 + a * y1 * y2 + b * z1 * z2 - a * b * w1 * w2,
        x1 * y2 + y1 * x2 - b * z1 * w2 + b * w1 * z2,
        x1 * z2 + z1 * x2 + a * y1 * w2 - a * w1 * y2,
        x1 * w2 + w1 * x2 + y1 * z2 - z1 * y2,
    ], axis=-1)


def _np_conj(x):
    return x * np.array([1, -1, -1, -1])


def test_np_product_matches_library():
    rng = random.Random(1)
    for p in (2, 3, 5, 17):
        alg = build_algebra(p)
        for _ in range(20):
            u, v = (alg(*(rng.randint(-5, 5) for _ in range(4))) for _ in range(2))
            got = _np_qmul(np.array([int(c) for c in u.c]), np.array([int(c) for c in v.c]), alg.a, alg.b)
            assert [Fraction(int(c)) for c in got] == list((u * v).c)


def naive_search(spec, p):
    """Unpruned search: only the norm budget and the cubic. Returns the set of scaled 6-tuples."""
    alg = build_algebra(p)
    order = maximal_order(alg)
    B = int(-spec.alpha.trace())
    den = math.lcm(*(c.denominator for bvec in order.basis for c in bvec.c))
    # box enumeration of order elements by coordinates (not Fincke-Pohst)
    G = sp.Matrix([[sp.Rational(v.numerator, v.denominator) for v in row] for row in order.gram])
    Ginv = G.inv()
    rad = [math.isqrt(int(B * Ginv[i, i])) + 1 for i in range(4)]
    diag, off = defaultdict(list), defaultdict(list)
    for c in itertools.product(*(range(-r, r + 1) for r in rad)):
        x = order.element(c)
        n = x.nrd()
        if n > B:
            continue
        sc = tuple(int(v * den) for v in x.c)
        if x.trd() == 0:
            diag[int(n)].append(sc)
        if 2 * n <= B:
            off[int(n)].append(sc)
    a, b = alg.a, alg.b
    cub = spec.alpha_charpoly
    d2 = den * den
    c3, c2, c1, c0 = (int(cub.coeff(3 - i)) * d2 ** i for i in range(4))
    found = set()
    for n1, n2, n3, m12, m13 in itertools.product(sorted(diag), sorted(diag), sorted(diag), sorted(off), sorted(off)):
        rem = B - n1 - n2 - n3 - 2 * m12 - 2 * m13
        if rem < 0 or rem % 2 or rem // 2 not in off:
            continue
        m23 = rem // 2
        lists = [diag[n1], diag[n2], diag[n3], off[m12], off[m13], off[m23]]
        combo = np.array(list(itertools.product(*lists)), dtype=np.int64)
        if len(combo) == 0:
            continue
        r, v, z, s, t, w = (combo[:, k, :] for k in range(6))
        Q = [[r, s, t], [-_np_conj(s), v, w], [-_np_conj(t), -_np_conj(w), z]]

        def mm(A, C):
            return [[sum(_np_qmul(A[i][k], C[k][j], a, b) for k in range(3)) for j in range(3)] for i in range(3)]

        M = mm(Q, Q)
        M2 = mm(M, M)
        M3 = mm(M2, M)
        ok = np.ones(len(combo), dtype=bool)
        for i in range(3):
            for j in range(3):
                val = c3 * M3[i][j] + c2 * M2[i][j] + c1 * M[i][j]
                if i == j:
                    val[:, 0] += c0
                ok &= np.all(val == 0, axis=1)
        for row in combo[ok]:
            found.add(tuple(tuple(int(x) for x in q) for q in row))
    return found, den


def outcome_tuples(outcome, den):
    out = set()
    for cand in outcome.solutions:
        Q = cand.N
        ents = (Q[0, 0], Q[1, 1], Q[2, 2], Q[0, 1], Q[0, 2], Q[1, 2])
        out.add(tuple(tuple(int(c * den) for c in q.c) for q in ents))
    return out


@pytest.mark.parametrize("p", [5, 7, 11, 13])
def test_pruned_search_matches_naive_search(zeta7, p):
    naive, den = naive_search(zeta7, p)
    assert outcome_tuples(search_solutions(zeta7, p), den) == naive


def test_pruned_search_matches_naive_search_at_3(zeta7, zeta7_p3_outcome):
    naive, den = naive_search(zeta7, 3)
    got = outcome_tuples(zeta7_p3_outcome, den)
    assert len(got) == len(zeta7_p3_outcome.solutions) == len(naive) > 0
    assert got == naive


def test_search_solutions_pass_the_battery(zeta7_p3_outcome):
    rng = random.Random(7)
    for cand in rng.sample(zeta7_p3_outcome.solutions, 25):
        assert check_candidate(cand).overall
        assert charpoly12_matches(cand)
        _, T = lift_T_normalized(cand.N)
        assert charpoly12(to_M12Q(T * T)) == cand.spec.alpha_charpoly ** 4


def test_solution_set_is_closed_under_symmetries(zeta7_p3_outcome):
    sols = zeta7_p3_outcome.solutions
    alg = sols[0].N.alg
    key = {c.N for c in sols}
    order = sols[0].order
    units = [x for x in enumerate_norm_le(order, 1) if x.nrd() == 1]
    rng = random.Random(11)
    for cand in rng.sample(sols, 30):
        Q = cand.N
        for perm in itertools.permutations(range(3)):
            assert Q.permuted(perm) in key
        for signs in itertools.product((1, -1), repeat=3):
            D = QMatrix3.from_rational(alg, [[signs[i] if i == j else 0 for j in range(3)] for i in range(3)])
            assert D * Q * D in key
        for u in units:
            conj = QMatrix3(alg, [[u * Q[i, j] * u.inverse() for j in range(3)] for i in range(3)])
            assert conj in key


def test_search_rejects_rational_alpha(d12):
    with pytest.raises(InvalidInput):
        search_solutions(d12, 5)


def test_small_budget_prefilter(zeta7):
    out = search_solutions(zeta7, 5, budget=3)
    assert out.exhausted and out.solutions == [] and out.nodes_visited == 0


def test_search_is_deterministic_across_workers(case3):
    a = search_solutions(case3, 13)
    b = search_solutions(case3, 13, workers=2)
    assert a.to_json() == b.to_json()


def test_skew_matrix_is_skew():
    alg = build_algebra(3)
    Q = skew_matrix(alg, alg.i, alg.j, alg.k, alg(1, 1), alg(0, 0, 1), alg(2))
    assert Q.is_skew()
