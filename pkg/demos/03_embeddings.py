"""Embedding problem: an explicit solution, an exhaustive search, and a nonexistence certificate.

Run: python demos/03_embeddings.py
"""

from sexticcm.cli import _resolve
from sexticcm.cmfield import prime_bound
from sexticcm.embedding import check_candidate, degenerate_solution, search_solutions
from sexticcm.exactmath import load_spec
from sympy import nextprime


def main():
    zeta7 = load_spec(_resolve("zeta7.json"))
    case3 = load_spec(_resolve("case3.json"))

    # Q(zeta_7) contains Q(sqrt(-7)), so a diagonal solution exists where 7 is inert or ramified
    cand = degenerate_solution(zeta7, 7)
    rep = check_candidate(cand)
    print("degenerate solution for Q(zeta_7) at p = 7")
    print("  M =", cand.M)
    print("  N =", cand.N)
    print(f"  {sum(rep.status.values())}/{len(rep.status)} conditions hold")

    out = search_solutions(zeta7, 3)
    print(f"\nexhaustive search for Q(zeta_7) at p = 3: {len(out.solutions)} solutions, "
          f"{out.nodes_visited} nodes")

    b = prime_bound(case3)
    p = nextprime(int(b.bound))
    out = search_solutions(case3, p)
    print(f"\ncase 3 field: bound {b.bound}, searching at p = {p}")
    print(f"  exhausted = {out.exhausted}, solutions = {len(out.solutions)}, nodes = {out.nodes_visited}")


if __name__ == "__main__":
    main()
