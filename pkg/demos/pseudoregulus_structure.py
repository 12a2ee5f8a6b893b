"""
Linear sets of pseudoregulus type
=================================

Build the scattered linear set of x -> x^q in PG(3, 8), find its lines of
weight n with no prior knowledge, and recover the two transversal lines.
"""

# %%
from __future__ import annotations

from pseudoregulus.linsets import (
    LinearSetSpec,
    build_from_spec,
    detect_pseudoregulus,
    is_h_scattered,
    max_weight_offpseudoregulus,
    pseudoregulus_elements_from_spec,
    weight,
)

ls = build_from_spec(LinearSetSpec.from_exponents(2, 3, 2, [0, 1]))
print("rank", ls.rank, "points", ls.size, "weights", ls.weight_spectrum())

# %%
rep = detect_pseudoregulus(ls)
print(len(rep.elements), "lines of weight 3, pairwise disjoint")
for T in rep.transversals:
    print("transversal", T.basis.tolist(), "weight in L:", weight(ls, T))

# %%
# h = 2: the three-term exponent set gives planes and three transversals
ls2 = build_from_spec(LinearSetSpec.from_exponents(2, 3, 2, [0, 1, 2]))
print("2-scattered:", is_h_scattered(ls2, 2).is_scattered)
rep2 = detect_pseudoregulus(ls2)
print(len(rep2.elements), "planes,", len(rep2.transversals), "transversal planes")

# %%
# away from the pseudoregulus no line carries more than n - 1 points (n = 4)
ls4 = build_from_spec(LinearSetSpec.from_exponents(2, 4, 2, [0, 1]))
off = max_weight_offpseudoregulus(ls4, 1, pseudoregulus_elements_from_spec(ls4.spec))
print("lines swept", off.swept, "max off-P weight", off.max_weight)
