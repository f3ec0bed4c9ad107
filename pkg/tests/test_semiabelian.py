"""Tests for product heights, B_eps membership, Gamma enumeration, relation
loci, and the bounded theorem explorer on E x G_m^n."""

import json
import math
from fractions import Fraction

import pytest

from smallpoints.algebraic import TorusElement, radical, root_of_unity
from smallpoints.elliptic import ECPoint, EllipticCurveQ, canonical_height, ec_mul
from smallpoints.semiabelian import (
    AmbientVariety,
    BallVerdict,
    CurveRelation,
    ExploreConfig,
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

E_MINUS2 = EllipticCurveQ(Fraction(0), Fraction(-2))
E_PLUS1 = EllipticCurveQ(Fraction(0), Fraction(1))  # torsion Z/6
AMBIENT = AmbientVariety(E_MINUS2, 1)

GEN_EC = ECPoint.of(Fraction(3), Fraction(5))


def pt(ec, *torus):
    return SemiabelianPoint(ec, tuple(torus))


def t_rat(r):
    return TorusElement.from_rational(Fraction(r))


def t_rad(r, m):
    return TorusElement(radical(Fraction(r), m), 1)


def t_rou(n, k=1):
    return TorusElement(root_of_unity(n, k), 1)


class TestTypes:
    def test_ambient_validation(self):
        with pytest.raises(SemiabelianError):
            AmbientVariety(E_MINUS2, -1)
        ident = AmbientVariety(E_MINUS2, 3).identity()
        assert ident.ec.is_identity and len(ident.torus) == 3

    def test_on_variety(self):
        with pytest.raises(SemiabelianError):
            pt(ECPoint.identity(), t_rat(2), t_rat(3)).on_variety(AMBIENT)
        with pytest.raises(Exception):
            pt(ECPoint.of(Fraction(1), Fraction(1)), t_rat(2)).on_variety(AMBIENT)
        pt(GEN_EC, t_rat(2)).on_variety(AMBIENT)

    def test_subgroup_needs_rational_torus(self):
        with pytest.raises(SemiabelianError):
            SubgroupGamma.of([pt(ECPoint.identity(), t_rad(2, 3))])
        with pytest.raises(SemiabelianError):
            SubgroupGamma.of([], torus_rank=None)
        g = SubgroupGamma.of([pt(GEN_EC, t_rat(2))])
        assert g.torus_rank == 1


class TestProductHeight:
    def test_identity_is_zero(self):
        assert product_height(AMBIENT, AMBIENT.identity()) == 0.0

    def test_torus_only(self):
        z = pt(ECPoint.identity(), t_rat(2))
        assert product_height(AMBIENT, z) == pytest.approx(math.log(2), abs=1e-12)

    def test_sum_of_components(self):
        z = pt(GEN_EC, t_rat(2))
        expected = canonical_height(E_MINUS2, GEN_EC, 1e-10) + math.log(2)
        assert product_height(AMBIENT, z, tol=1e-9) == pytest.approx(
            expected, abs=2e-9
        )

    def test_torus_doubling_scales_exactly(self):
        ambient = AmbientVariety(E_MINUS2, 1)
        base = t_rad(2, 7)
        one = product_height(ambient, pt(ECPoint.identity(), base))
        two = product_height(
            ambient, pt(ECPoint.identity(), TorusElement(base.base, 2))
        )
        assert two == pytest.approx(2 * one, abs=1e-12)

    def test_elliptic_quadraticity(self):
        tol = 1e-9
        z1 = pt(GEN_EC, t_rat(1))
        z2 = pt(ec_mul(E_MINUS2, 2, GEN_EC), t_rat(1))
        h1 = product_height(AMBIENT, z1, tol)
        h2 = product_height(AMBIENT, z2, tol)
        assert abs(h2 - 4 * h1) <= 5 * tol

    def test_zero_iff_torsion_times_rou(self):
        ambient6 = AmbientVariety(E_PLUS1, 1)
        torsion = ECPoint.of(Fraction(2), Fraction(3))
        assert product_height(ambient6, pt(torsion, t_rou(5))) == 0.0
        assert product_height(ambient6, pt(torsion, t_rad(2, 9))) > 1e-3
        assert product_height(AMBIENT, pt(GEN_EC, t_rou(5))) > 1e-3

    def test_validation(self):
        with pytest.raises(SemiabelianError):
            product_height(AMBIENT, AMBIENT.identity(), tol=0.0)


class TestInBeps:
    def test_contract_examples(self):
        z7 = pt(ECPoint.identity(), t_rad(2, 7))  # h = (log 2)/7 = 0.0990
        assert in_B_eps(AMBIENT, z7, 0.1) is BallVerdict.IN
        z2 = pt(ECPoint.identity(), t_rat(2))
        assert in_B_eps(AMBIENT, z2, 0.1) is BallVerdict.OUT

    def test_exact_zero_in_for_eps_zero(self):
        ambient6 = AmbientVariety(E_PLUS1, 1)
        z = pt(ECPoint.of(Fraction(0), Fraction(1)), t_rou(7, 3))
        assert in_B_eps(ambient6, z, 0.0) is BallVerdict.IN

    def test_boundary_band(self):
        z7 = pt(ECPoint.identity(), t_rad(2, 7))
        assert in_B_eps(AMBIENT, z7, math.log(2) / 7) is BallVerdict.BOUNDARY

    def test_monotone_in_eps(self):
        zs = [pt(ECPoint.identity(), t_rad(2, m)) for m in (3, 7, 20)]
        for z in zs:
            if in_B_eps(AMBIENT, z, 0.1) is BallVerdict.IN:
                assert in_B_eps(AMBIENT, z, 0.25) is BallVerdict.IN

    def test_validation(self):
        with pytest.raises(SemiabelianError):
            in_B_eps(AMBIENT, AMBIENT.identity(), -0.1)


class TestGammaEnumerate:
    def test_counts(self):
        g1 = SubgroupGamma.of([pt(ECPoint.identity(), t_rat(2))])
        assert len(list(gamma_enumerate(g1, 1, AMBIENT))) == 3
        assert len(list(gamma_enumerate(g1, 3, AMBIENT))) == 7
        g2 = SubgroupGamma.of(
            [pt(ECPoint.identity(), t_rat(2)), pt(GEN_EC, t_rat(1))]
        )
        out = list(gamma_enumerate(g2, 1, AMBIENT))
        assert len(out) == 9
        assert len({c for c, _ in out}) == 9

    def test_trivial_subgroup(self):
        g0 = SubgroupGamma.of([], torus_rank=1)
        out = list(gamma_enumerate(g0, 5, AMBIENT))
        assert len(out) == 1
        coeffs, point = out[0]
        assert coeffs == () and point.ec.is_identity and point.torus[0].is_one

    def test_lexicographic_order_and_values(self):
        g1 = SubgroupGamma.of([pt(ECPoint.identity(), t_rat(2))])
        out = list(gamma_enumerate(g1, 2, AMBIENT))
        assert [c for c, _ in out] == [(-2,), (-1,), (0,), (1,), (2,)]
        values = [p.torus[0].rational_value() for _, p in out]
        assert values == [Fraction(1, 4), Fraction(1, 2), 1, 2, 4]

    def test_elliptic_generator(self):
        g1 = SubgroupGamma.of([pt(GEN_EC, t_rat(1))])
        out = dict(gamma_enumerate(g1, 1, AMBIENT))
        assert out[(1,)].ec == GEN_EC
        assert out[(-1,)].ec == ECPoint.of(Fraction(3), Fraction(-5))

    def test_validation(self):
        g1 = SubgroupGamma.of([pt(ECPoint.identity(), t_rat(2))])
        with pytest.raises(SemiabelianError):
            list(gamma_enumerate(g1, -1, AMBIENT))
        with pytest.raises(SemiabelianError):
            list(gamma_enumerate(g1, 1, AmbientVariety(E_MINUS2, 2)))


class TestCertificate:
    GAMMA_PT = pt(GEN_EC, t_rat(2))

    def test_x_equals_gamma(self):
        assert gamma_eps_certificate(
            AMBIENT, self.GAMMA_PT, self.GAMMA_PT, 0.0
        ) is BallVerdict.IN

    def test_small_offset(self):
        x = pt(GEN_EC, _mul_torus(t_rat(2), t_rad(2, 7)))
        got = gamma_eps_certificate(AMBIENT, x, self.GAMMA_PT, 0.1)
        assert got is BallVerdict.IN

    def test_large_offset(self):
        x = pt(GEN_EC, t_rat(4))
        got = gamma_eps_certificate(AMBIENT, x, self.GAMMA_PT, 0.1)
        assert got is BallVerdict.OUT

    def test_gamma0_is_torsion_times_rou(self):
        x = pt(GEN_EC, _mul_torus(t_rat(2), t_rou(3)))
        assert gamma_eps_certificate(AMBIENT, x, self.GAMMA_PT, 0.0) is BallVerdict.IN

    def test_unsupported_division(self):
        x = pt(ECPoint.identity(), t_rad(2, 3))
        other = pt(ECPoint.identity(), t_rad(3, 3))
        got = gamma_eps_certificate(AMBIENT, x, other, 1.0)
        assert got is BallVerdict.UNSUPPORTED


def _mul_torus(a, b):
    from smallpoints.semiabelian import _torus_mul

    out = _torus_mul(a, b)
    assert out is not None
    return out


class TestCurveRelation:
    def test_validation(self):
        with pytest.raises(SemiabelianError):
            CurveRelation.of([], 1)
        with pytest.raises(SemiabelianError):
            CurveRelation.of([{(0, 0, 1): Fraction(0)}], 1)
        with pytest.raises(SemiabelianError):
            CurveRelation.of([{(0, 0): Fraction(1)}], 1)
        with pytest.raises(SemiabelianError):
            CurveRelation.of([{(-1, 0, 0): Fraction(1)}], 1)

    def test_canonical_equality(self):
        a = CurveRelation.of([{(0, 0, 1): Fraction(1), (0, 0, 0): Fraction(-2)}], 1)
        b = CurveRelation.of([{(0, 0, 0): Fraction(-2), (0, 0, 1): Fraction(1)}], 1)
        assert a == b

    def test_uses_ec_coordinates(self):
        t_only = CurveRelation.of([{(0, 0, 2): Fraction(1)}], 1)
        assert not t_only.uses_ec_coordinates()
        with_x = CurveRelation.of([{(1, 0, 0): Fraction(1)}], 1)
        assert with_x.uses_ec_coordinates()


class TestMembership:
    T_EQ_2 = CurveRelation.of([{(0, 0, 1): Fraction(1), (0, 0, 0): Fraction(-2)}], 1)

    def test_rational_substitution(self):
        t_eq_1 = CurveRelation.of([{(0, 0, 1): Fraction(1), (0, 0, 0): Fraction(-1)}], 1)
        got = curve_membership(t_eq_1, pt(ECPoint.identity(), TorusElement.one()))
        assert got.kind == "ExactYes"
        # x = t + 1 with ((2,3), t=1) on y^2 = x^3 + 1
        line = CurveRelation.of(
            [{(1, 0, 0): Fraction(1), (0, 0, 1): Fraction(-1), (0, 0, 0): Fraction(-1)}],
            1,
        )
        z = pt(ECPoint.of(Fraction(2), Fraction(3)), TorusElement.one())
        assert curve_membership(line, z).kind == "ExactYes"
        assert curve_membership(self.T_EQ_2, pt(ECPoint.identity(), t_rat(2))).kind == (
            "ExactYes"
        )

    def test_divisibility_oracle(self):
        zsq = pt(ECPoint.identity(), t_rad(2, 2))
        assert curve_membership(self.T_EQ_2, zsq).kind == "ExactNo"
        square = CurveRelation.of([{(0, 0, 2): Fraction(1), (0, 0, 0): Fraction(-2)}], 1)
        assert curve_membership(square, zsq).kind == "ExactYes"

    def test_negative_exponents(self):
        # t + 1/t vanishes at the fourth root of unity
        pal = CurveRelation.of([{(0, 0, 1): Fraction(1), (0, 0, -1): Fraction(1)}], 1)
        assert curve_membership(pal, pt(ECPoint.identity(), t_rou(4))).kind == (
            "ExactYes"
        )
        assert curve_membership(pal, pt(ECPoint.identity(), t_rou(3))).kind == (
            "ExactNo"
        )

    def test_identity_fails_affine_equations(self):
        x_zero = CurveRelation.of([{(1, 0, 0): Fraction(1)}], 1)
        got = curve_membership(x_zero, pt(ECPoint.identity(), t_rat(5)))
        assert got.kind == "ExactNo"

    def test_symbolic_exponent_slot(self):
        # t = alpha^-1 for alpha = 2^(1/3): t^3 - 1/2 = 0 holds
        inv = pt(ECPoint.identity(), TorusElement(radical(Fraction(2), 3), -1))
        cube = CurveRelation.of(
            [{(0, 0, 3): Fraction(1), (0, 0, 0): Fraction(-1, 2)}], 1
        )
        assert curve_membership(cube, inv).kind == "ExactYes"

    def test_multiple_equations(self):
        zsq = pt(ECPoint.identity(), t_rad(2, 2))
        both = CurveRelation.of(
            [
                {(0, 0, 2): Fraction(1), (0, 0, 0): Fraction(-2)},
                {(0, 0, 4): Fraction(1), (0, 0, 0): Fraction(-4)},
            ],
            1,
        )
        assert curve_membership(both, zsq).kind == "ExactYes"
        mixed = CurveRelation.of(
            [
                {(0, 0, 2): Fraction(1), (0, 0, 0): Fraction(-2)},
                {(0, 0, 1): Fraction(1), (0, 0, 0): Fraction(-2)},
            ],
            1,
        )
        assert curve_membership(mixed, zsq).kind == "ExactNo"

    def test_numeric_fallback(self):
        rel = CurveRelation.of(
            [{(0, 0, 1, 0): Fraction(1), (0, 0, 0, 1): Fraction(-1)}], 2
        )
        same = pt(ECPoint.identity(), t_rad(2, 3), t_rad(2, 3))
        got = curve_membership(rel, same)
        assert got.kind == "NumericYes" and got.residual < 1e-9
        different = pt(ECPoint.identity(), t_rad(2, 3), t_rad(3, 3))
        got = curve_membership(rel, different)
        assert got.kind == "NumericNo" and got.residual > 0.1

    def test_rank_mismatch(self):
        with pytest.raises(SemiabelianError):
            curve_membership(self.T_EQ_2, pt(ECPoint.identity()))


class TestExplorer:
    def scenario(self):
        gen = pt(ECPoint.identity(), t_rat(2))
        gamma = SubgroupGamma.of([gen])
        relation = CurveRelation.of(
            [{(0, 0, 1): Fraction(1), (0, 0, 0): Fraction(-2)}], 1
        )
        config = ExploreConfig(gen_bound=3, rou_order=12,
                               radicals=((Fraction(2), 8),))
        return gamma, relation, config

    def test_t_equals_2_has_one_hit(self):
        gamma, relation, config = self.scenario()
        report = explore_theorem(AMBIENT, gamma, relation, 0.0, config)
        assert report["hit_count"] == 1
        hit = report["hits"][0]
        assert hit["gamma_coefficients"] == [1]
        assert hit["point"] == "(O; (2)^1)"
        assert hit["membership"] == "ExactYes" and hit["exact"]
        assert hit["certificate"] == "In"
        assert report["cosets"] == [[0]]
        assert "non-effective" in report["disclaimer"]
        assert "integrality" in report["integrality_note"]

    def test_rerun_is_identical(self):
        gamma, relation, config = self.scenario()
        a = explore_theorem(AMBIENT, gamma, relation, 0.0, config)
        b = explore_theorem(AMBIENT, gamma, relation, 0.0, config)
        assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)

    def test_radical_hit_at_positive_eps(self):
        gamma, _, config = self.scenario()
        seventh = CurveRelation.of(
            [{(0, 0, 7): Fraction(1), (0, 0, 0): Fraction(-2)}], 1
        )
        report = explore_theorem(AMBIENT, gamma, seventh, 0.2, config)
        assert report["hit_count"] == 1
        assert report["hits"][0]["gamma_coefficients"] == [0]
        assert "root#" in report["hits"][0]["point"]

    def test_torsion_hits_group_into_one_coset(self):
        ambient = AmbientVariety(E_PLUS1, 0)
        relation = CurveRelation.of([{(1, 0): Fraction(1)}], 0)
        trivial = SubgroupGamma.of([], torus_rank=0)
        report = explore_theorem(ambient, trivial, relation, 0.0,
                                 ExploreConfig(gen_bound=0, rou_order=1))
        assert report["hit_count"] == 2
        assert {h["point"] for h in report["hits"]} == {"((0, 1))", "((0, -1))"}
        assert report["cosets"] == [[0, 1]]

    def test_no_hits_when_locus_avoids_identity(self):
        trivial = SubgroupGamma.of([], torus_rank=1)
        relation = CurveRelation.of(
            [{(0, 0, 1): Fraction(1), (0, 0, 0): Fraction(-3)}], 1
        )
        report = explore_theorem(AMBIENT, trivial, relation, 0.0,
                                 ExploreConfig(gen_bound=0, rou_order=1))
        assert report["hit_count"] == 0 and report["hits"] == []

    def test_boundary_candidates_are_counted(self):
        gamma, relation, config = self.scenario()
        report = explore_theorem(AMBIENT, gamma, relation, math.log(2) / 7, config)
        assert report["boundary_skipped"] >= 1

    def test_oversized_search_rejected(self):
        gamma, relation, _ = self.scenario()
        tight = ExploreConfig(gen_bound=3, rou_order=12,
                              radicals=((Fraction(2), 8),), max_search=50)
        with pytest.raises(SearchSpaceError) as info:
            explore_theorem(AMBIENT, gamma, relation, 0.0, tight)
        assert info.value.estimate > 50

    def test_validation(self):
        gamma, relation, config = self.scenario()
        with pytest.raises(SemiabelianError):
            explore_theorem(AMBIENT, gamma, relation, -1.0, config)
        with pytest.raises(SemiabelianError):
            explore_theorem(AmbientVariety(E_MINUS2, 2), gamma, relation, 0.0, config)
