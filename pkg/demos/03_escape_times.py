"""
Escape times under a height-expanding map
=========================================

Raising to the m-th power roughly multiplies a torus height by m, so once
a point's height clears a threshold M it keeps growing by a factor c > 1
per step.  N(z) is the first iterate whose height exceeds M: large N means
the point started very close to the height-zero locus.
"""

import math

from smallpoints import (
    HeightedSystem,
    StarParams,
    TorusElement,
    classify_small_sequence,
    n_function,
    radical,
    root_of_unity,
    torus_height,
    verify_star,
)

sq = HeightedSystem("torus", 2)          # z -> z^2 on G_m
star = StarParams(r=1, M=0.5, c=1.9)

samples = [TorusElement(radical(2, k)) for k in (1, 2, 4, 8)]
report = verify_star(sq, star, samples=samples)
print("expansion certificate for z -> z^2:", "holds" if report.holds else "fails")

# the closer to the unit circle, the longer the escape
for n in (1, 4, 16, 64, 256):
    z = TorusElement(radical(2, n))
    nv = n_function(sq, z, star)
    print(f"N(2^(1/{n})) = {nv.n:>2}   h = {torus_height(z):.6f}")

# roots of unity never escape: height stays zero forever
zeta = TorusElement(root_of_unity(5))
print("N(zeta_5) =", n_function(sq, zeta, star).kind)

# a sequence marching toward the unit circle has N -> infinity,
# which is the dynamical shadow of "heights are bounded away from zero
# outside the torsion locus"
seq = [TorusElement(radical(2, n)) for n in range(1, 120)]
summary = classify_small_sequence(sq, seq, star)
finite = [v.n for v in summary.n_values if v.n is not None]
print("staircase over 2^(1/n), n = 1..119:")
print("  N diverges      :", summary.n_diverges)
print("  heights to zero :", summary.heights_to_zero)
print("  last N          :", finite[-1])
print("  last height     :", f"{summary.heights[-1]:.6f}"
      f"   (log2/119 = {math.log(2) / 119:.6f})")
