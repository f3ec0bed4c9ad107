"""
How escape-time bounds survive changes of setup
===============================================

Escape times N(z) depend on a choice of expansion parameters (r, M, c).
The useful fact is that nothing essential depends on the choice: comparable
heights, shifted thresholds, commuting maps, and factor inclusions all
change N by controlled amounts.  Each check below verifies one of those
transfers on concrete sample points and prints where the slack went.
"""

from smallpoints import (
    HeightedSystem,
    StarParams,
    TorusElement,
    check_prop2,
    check_prop3,
    check_prop4,
    derive_prop1_params,
    n_function,
    radical,
)

sq = HeightedSystem("torus", 2)              # z -> z^2
star = StarParams(r=1, M=2.0, c=1.5)
samples = [TorusElement(radical(2, n)) for n in (1, 2, 4, 8)]

# 1. comparable heights: if h' is within factors (e, e') of h, the derived
# parameters below make (*) hold for h' as well
derived = derive_prop1_params(star, e=2.0, e_prime=2.0)
print("derived parameters for a 2-comparable height:"
      f" r = {derived.r}, M = {derived.M:.4f}, c = {derived.c}")

# 2. raising the threshold to M' only delays escape by a bounded number
# of extra rounds: N' <= N + p*r with p independent of the point
rep2 = check_prop2(sq, star, m_prime=8.0, e_prime=1.0, samples=samples)
print(f"threshold 2.0 -> 8.0: N grows by at most {rep2.offset} steps"
      f" (p = {rep2.p}, violations = {len(rep2.violations)})")
for row in rep2.rows:
    print(f"   N = {row['n']}, N' = {row['n_prime']}")

# parts 3 and 4 want a strictly positive shifted height (h + delta), so
# the one-step growth bound h(f z) < d h(z) stays strict at height zero
sq1 = HeightedSystem("torus", 2, shift=1.0)
cube1 = HeightedSystem("torus", 3, shift=1.0)
shifted = [TorusElement(radical(2, n)) for n in (1, 2, 4, 8)]

# 3. a commuting map g cannot outrun f by more than a fixed factor:
# N_g <= ceil(log d / log c) * r * N_f, where d bounds f's growth
rep3 = check_prop3(sq1, cube1, star, d=2.0, samples=shifted)
print(f"commuting map z -> z^3: N_g <= {rep3.factor} * N_f"
      f" (d valid: {rep3.d_valid}, violations = {len(rep3.violations)})")

# 4. a factor inclusion z -> (0, z) preserves escape times: the new
# threshold M' barely exceeds alpha * M, so N can only grow, and on the
# torus factor nothing changes at all
rep4 = check_prop4("include", sq1, sq1, star, m_prime=2.00001, samples=shifted)
print(f"inclusion as a factor: alpha = {rep4.alpha},"
      f" N preserved on {rep4.equalities}/{len(rep4.rows)} samples,"
      f" violations = {len(rep4.violations)}")
