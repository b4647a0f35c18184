"""Quaternion algebras ramified at p and infinity, with a certified maximal order.

Shows the (epsilon, q) presentation, the Hilbert-symbol ramification check,
and the fact that small-norm elements at a large prime all commute.

Run: python demos/02_quaternion_orders.py
"""

import itertools

from sexticcm.quaternion import build_algebra, enumerate_norm_le, maximal_order, ramification_set


def main():
    for p in (2, 3, 5, 13, 17, 101):
        alg = build_algebra(p)
        order = maximal_order(alg)
        order.certify()
        ram = sorted(str(v) for v in ramification_set(alg))
        print(f"p = {p:>3}: i^2 = -{alg.epsilon}, j^2 = -{alg.q}, ramified at {ram}, "
              f"reduced discriminant {order.reduced_discriminant()}")

    order = maximal_order(build_algebra(101))
    small = enumerate_norm_le(order, 5)
    bad = [(x, y) for x, y in itertools.combinations(small, 2) if not x.commutes_with(y)]
    print(f"\n{len(small)} elements of reduced norm <= 5 in the order at p = 101; "
          f"non-commuting pairs: {len(bad)}")
    for x in small:
        print(f"  {x}  (Nrd {x.nrd()})")


if __name__ == "__main__":
    main()
