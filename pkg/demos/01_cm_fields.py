"""Classify the three bundled sextic CM-fields and list their CM-types.

Run: python demos/01_cm_fields.py
"""

import warnings

from sexticcm.cmfield import classify, enumerate_cm_types, imaginary_quadratic_subfield, prime_bound
from sexticcm.exactmath import load_spec
from sexticcm.cli import _resolve


def main():
    for name in ("zeta7.json", "d12.json", "case3.json"):
        spec = load_spec(_resolve(name))
        galois = classify(spec)
        w = imaginary_quadratic_subfield(spec)
        print(f"{name}: Galois group {galois.tag.value} (case {galois.case_index})")
        print(f"  imaginary quadratic subfield: {'Q(sqrt(%d))' % w.d if w else 'none'}")
        for t in enumerate_cm_types(spec, galois):
            print(f"  CM-type {t.encoding}  {'primitive' if t.primitive else 'imprimitive'}")
        if spec.alpha.is_rational():
            continue
        # the bound only proves anything in case 3; elsewhere it is informational
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            b = prime_bound(spec, galois)
        print(f"  Tr(alpha) = {b.trace}, bound = {b.bound}, largest prime below = {b.max_prime}")


if __name__ == "__main__":
    main()
