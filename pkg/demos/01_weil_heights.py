"""
Weil heights from minimal polynomials
=====================================

The height of an algebraic number is log(Mahler measure)/degree of its
minimal polynomial, so exact statements about polynomials turn into exact
statements about heights.
"""

import math

from smallpoints import (
    IntPolynomial,
    mahler_log,
    radical,
    root_of_unity,
    weil_height,
)

from smallpoints import AlgebraicNumber
from fractions import Fraction

# rationals: h(p/q) = log max(|p|, |q|)
for r in (Fraction(2, 3), Fraction(-7), Fraction(22, 7)):
    print(f"h({r}) = {weil_height(AlgebraicNumber.from_rational(r)):.12f}")

# radicals scale the height down: h(2^(1/n)) = log(2)/n
for n in (1, 2, 12, 100):
    print(f"h(2^(1/{n})) = {weil_height(radical(2, n)):.12f}"
          f"   (log2/n = {math.log(2) / n:.12f})")

# roots of unity are the height-zero points (Kronecker)
print("h(zeta_7) =", weil_height(root_of_unity(7)))

# Lehmer's polynomial: the smallest known positive log Mahler measure
lehmer = IntPolynomial((1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1))
m = mahler_log(lehmer)
print(f"log M(lehmer) = {m.value:.15f} +- {m.error:.1e}")
salem = AlgebraicNumber.from_minpoly(list(lehmer.coeffs))
print(f"h(lehmer root) = {weil_height(salem):.15f}")
