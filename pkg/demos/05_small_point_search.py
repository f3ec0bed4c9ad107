"""
Searching a curve for small points near a finite-rank subgroup
==============================================================

On a semiabelian variety E x G_m, the points of a curve X that land
eps-close (in height) to a finite-rank subgroup Gamma should be confined
to finitely many translates of subtori.  This script runs that search on
a worked example small enough to audit by hand.

Ambient variety: y^2 = x^3 - 2 times one torus factor.
Gamma: generated by (O, 2), so its torus part is the powers of 2.
X: the locus t_1 = 2, a single fiber.
"""

from fractions import Fraction

from smallpoints import (
    AmbientVariety,
    CurveRelation,
    ECPoint,
    EllipticCurveQ,
    ExploreConfig,
    SemiabelianPoint,
    SubgroupGamma,
    TorusElement,
    explore_theorem,
    gamma_eps_certificate,
)

E = EllipticCurveQ(Fraction(0), Fraction(-2))
A = AmbientVariety(curve=E, torus_rank=1)

O = ECPoint(None, None)
gen = SemiabelianPoint(O, (TorusElement.from_rational(Fraction(2)),))
G = SubgroupGamma(generators=(gen,), torus_rank=1)

# t_1 - 2 = 0, written as {exponent vector (x, y, t_1): coefficient}
X = CurveRelation.of([{(0, 0, 1): Fraction(1), (0, 0, 0): Fraction(-2)}], 1)

config = ExploreConfig(gen_bound=2, rou_order=8)
result = explore_theorem(A, G, X, eps=0.1, config=config)

print("catalog of small points :", result["catalog_size"])
print("gamma box searched      :", result["search_size"])
print("hits on X               :", result["hit_count"])
for hit in result["hits"]:
    print(f"  gamma coefficients {hit['gamma_coefficients']}, "
          f"small point {hit['small_point']}")
    print(f"  point on X = {hit['point']}   membership {hit['membership']}, "
          f"certificate {hit['certificate']}")
print("cosets covering the hits:", result["cosets"])

# only one point can match: t must equal 2, which forces the gamma part
# to be the generator itself and the small point to be the identity
z = SemiabelianPoint(O, (TorusElement.from_rational(Fraction(4)),))
verdict = gamma_eps_certificate(A, z, gen, eps=0.1)
print("\n(O; 4) near gamma point (O; 2)?", verdict.value,
      "(height gap is log 2, far beyond eps)")

# the search reports no-hit honestly: it cannot prove absence
print("\n" + result["disclaimer"])
