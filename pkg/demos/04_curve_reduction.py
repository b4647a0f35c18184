"""Reduction types of cyclic covers and of a Picard curve, from point counts.

Run: python demos/04_curve_reduction.py [max_prime]
"""

import sys
from collections import defaultdict

from sexticcm.cli import _resolve
from sexticcm.curves import CoverSpec, PicardSpec, cover_cm_type, rh_genus, sweep, zeta_classify
import json


def summarize(spec, modulus, p_max):
    by_class = defaultdict(list)
    for row in sweep(spec, p_max):
        by_class[row.get("class", "bad")].append(row["p"])
    print(f"y^{spec.N} = x^{spec.a1} (x-1)^{spec.a2}: genus {rh_genus(spec)}, "
          f"CM-type {cover_cm_type(spec).cm_type}")
    for cls, ps in sorted(by_class.items()):
        residues = sorted({p % modulus for p in ps})
        print(f"  {cls:<14} {ps}  (residues mod {modulus}: {residues})")


def main():
    p_max = int(sys.argv[1]) if len(sys.argv) > 1 else 60
    summarize(CoverSpec(9, 1, 3), 9, p_max)
    summarize(CoverSpec(7, 1, 1), 7, p_max)

    picard = PicardSpec.from_json(json.loads(_resolve("picard_c4.json").read_text()))
    z = zeta_classify(picard, 7)
    print("\nPicard curve at p = 7")
    print(f"  counts {z.counts}, L = {z.L}")
    print(f"  slopes {[(str(s), m) for s, m in z.slopes]}, p-rank {z.p_rank}, {z.classification.value}")


if __name__ == "__main__":
    main()
