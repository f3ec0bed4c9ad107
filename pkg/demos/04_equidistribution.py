"""
Galois orbits crowding the unit circle
======================================

As algebraic numbers of shrinking height march through a family, their
conjugates spread out toward the uniform measure on the unit circle.  Two
numbers watch this happen: the star discrepancy of the conjugate angles,
and the mean distance of conjugate moduli from 1.
"""

from smallpoints import (
    AlgebraicNumber,
    bilu_report,
    orbit_measure,
    radial_deviation,
    radical,
    star_discrepancy,
    weyl_sum,
)

# the 2^(1/n) family: all n conjugates share modulus 2^(1/n) and their
# angles are exactly the n-th roots of unity, so D* = 1/n on the nose
print("family 2^(1/n):")
print(f"  {'n':>4} {'discrepancy':>12} {'radial dev':>12}")
for n in (1, 5, 25, 125):
    mu = orbit_measure(radical(2, n))
    print(f"  {n:>4} {star_discrepancy(mu):>12.6f} {radial_deviation(mu):>12.6f}")

# Lehmer's number has the smallest known positive height; its ten
# conjugates already hug the circle (eight sit exactly on it)
lehmer = AlgebraicNumber.from_minpoly([1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1])
mu = orbit_measure(lehmer)
on_circle = sum(1 for r in mu.radii if abs(r - 1.0) < 1e-12)
print("\nLehmer's number:")
print("  conjugates:", len(mu.angles), " on the unit circle:", on_circle)
print(f"  discrepancy = {star_discrepancy(mu):.6f}")
print(f"  radial dev  = {radial_deviation(mu):.6f}")
for k in (1, 2, 3):
    print(f"  |weyl sum k={k}| = {weyl_sum(mu, k):.6f}")

# the batch report tracks all diagnostics down a family at once
family = [radical(3, n) for n in range(1, 80)]
rep = bilu_report(family)
print("\nfamily 3^(1/n), n = 1..79:")
print("  discrepancy -> 0 :", rep.discrepancy_to_zero)
print("  radial dev  -> 0 :", rep.radial_to_zero)
print("  heights     -> 0 :", rep.heights_to_zero)
last = rep.rows[-1]
print(f"  final row: degree {last['degree']}, "
      f"D* = {last['discrepancy']:.6f}, radial = {last['radial']:.6f}")
