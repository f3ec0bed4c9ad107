"""Exact height calculus and small-point dynamics on E x G_m^n.

The package splits into five layers:

  algebraic    exact algebraic numbers, Mahler measure, and Weil heights;
  elliptic     rational-point arithmetic and the canonical height on
               y^2 = x^3 + a x + b;
  dynamics     the height-expansion condition (*), N-functions, and the
               four transfer results that make "small sequence" well defined;
  equidist     empirical angle measures, discrepancy/Weyl statistics, and
               radial deviation for Galois orbits;
  semiabelian  product heights on E x G_m^n, the balls B_eps, subgroup
               enumeration, and the bounded search for X meet (Gamma + B_eps).

The cli module exposes all of it as the `smallpoints` command.
"""

from .algebraic import (
    AlgebraicError,
    AlgebraicNumber,
    IntPolynomial,
    TorusElement,
    is_root_of_unity,
    mahler_log,
    radical,
    root_of_unity,
    torus_height,
    torus_power,
    weil_height,
)
from .dynamics import (
    DynamicsError,
    HeightedSystem,
    InconclusiveComparisonError,
    NValue,
    SearchBudgetError,
    StarParams,
    check_prop2,
    check_prop3,
    check_prop4,
    classify_small_sequence,
    derive_prop1_params,
    empirical_height_comparison,
    is_preperiodic,
    n_ball_membership,
    n_function,
    system_height,
    verify_star,
)
from .elliptic import (
    ECPoint,
    EllipticCurveQ,
    EllipticError,
    OffCurveError,
    canonical_height,
    ec_add,
    ec_mul,
    ec_neg,
    is_torsion,
    naive_height,
    require_on_curve,
    torsion_points,
)
from .equidist import (
    BiluReport,
    EmpiricalAngleMeasure,
    EquidistError,
    bilu_report,
    orbit_measure,
    radial_deviation,
    star_discrepancy,
    weyl_sum,
)
from .semiabelian import (
    AmbientVariety,
    BallVerdict,
    CurveRelation,
    ExploreConfig,
    Membership,
    SearchSpaceError,
    SemiabelianError,
    SemiabelianPoint,
    SubgroupGamma,
    curve_membership,
    explore_theorem,
    gamma_enumerate,
    gamma_eps_certificate,
    in_B_eps,
    product_height,
)

__version__ = "0.1.0"
