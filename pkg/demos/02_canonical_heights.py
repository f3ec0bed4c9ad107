"""
Canonical heights on elliptic curves
====================================

The naive height of a point P = (x, y) only sees the arithmetic size of x.
The canonical height fixes that by averaging over the duplication map:
hhat(P) = lim h(x(2^k P)) / 4^k.  It is the height that makes the group
law quadratic.
"""

from fractions import Fraction

from smallpoints import (
    EllipticCurveQ,
    ECPoint,
    canonical_height,
    ec_add,
    ec_mul,
    ec_neg,
    is_torsion,
    naive_height,
)

E = EllipticCurveQ(Fraction(0), Fraction(-2))   # y^2 = x^3 - 2
P = ECPoint(Fraction(3), Fraction(5))

h = naive_height(P)
hhat = canonical_height(E, P)
print(f"curve y^2 = x^3 - 2, P = (3, 5)")
print(f"naive height     h(P)    = {h:.12f}")
print(f"canonical height hhat(P) = {hhat:.12f}")

# quadraticity: hhat(nP) = n^2 hhat(P)
for n in (2, 3, 5):
    nP = ec_mul(E, n, P)
    print(f"hhat({n}P) / hhat(P) = {canonical_height(E, nP) / hhat:.9f}"
          f"   (expect {n * n})")

# the parallelogram law, the defining identity of a quadratic form
Q = ec_mul(E, 2, P)
lhs = (canonical_height(E, ec_add(E, P, Q))
       + canonical_height(E, ec_add(E, P, ec_neg(Q))))
rhs = 2 * canonical_height(E, P) + 2 * canonical_height(E, Q)
print(f"parallelogram law gap = {abs(lhs - rhs):.2e}")

# torsion points are exactly the points of canonical height zero
E1 = EllipticCurveQ(Fraction(0), Fraction(1))   # y^2 = x^3 + 1, torsion Z/6
for pt in (ECPoint(Fraction(2), Fraction(3)), ECPoint(Fraction(0), Fraction(1)),
           ECPoint(Fraction(-1), Fraction(0))):
    print(f"({pt.x}, {pt.y}) on y^2 = x^3 + 1: hhat = "
          f"{canonical_height(E1, pt):.2e}, torsion = {is_torsion(E1, pt)}")
print(f"(3, 5) on y^2 = x^3 - 2: torsion = {is_torsion(E, P)}")
