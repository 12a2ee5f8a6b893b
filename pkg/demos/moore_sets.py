"""
Moore exponent sets and monomial MRD codes
==========================================

A walk through the two criteria for a Moore exponent set: the determinant
check over all tuples and the rank-distance check on the monomial code.
Run with ``python demos/moore_sets.py``.
"""

# %%
from __future__ import annotations

from pseudoregulus.fields import tower
from pseudoregulus.moore import is_moore, is_moore_det, moore_det, search_all, shift_orbit_census
from pseudoregulus.rankcodes import monomial_code, monomial_equivalent, mrd_check

# F_16 over F_2: codes are integers, 10 is a primitive cube root of unity
T = tower(2, 4)
print("F_16 modulus (constant term first):", T.Fqn.modulus)

# %%
# {0,1} is a classical Moore set, {0,2} is not: x^4 - x vanishes on F_4
print(is_moore((0, 1), T).to_dict())
bad = is_moore_det((0, 2), T)
print("witness", bad.witness, "det", moore_det(T, bad.witness, (0, 2)))

# %%
# the same question asked of the code <x, x^{q^2}>: a rank-deficient codeword
rep = mrd_check(monomial_code(T, (0, 2)))
print("MRD:", rep.is_mrd, "witness codeword:", rep.witness)

# %%
# exhaustive search up to cyclic shift, and the orbit census for pairs
for n in (5, 6, 7):
    Tn = tower(2, n)
    found = [v.exps for v in search_all(Tn, 3, up_to_shift=True, method="mrd") if v.is_moore]
    print(f"n={n}: size-3 Moore sets up to shift {found}, pair classes {shift_orbit_census(n)}")

# %%
# {0,1,3} and {0,4,5} give equivalent codes at n=7
print(monomial_equivalent([0, 1, 3], [0, 4, 5], 7))
