import math
import random
from fractions import Fraction

import pytest

from smallpoints.algebraic import (
    AlgebraicError,
    AlgebraicNumber,
    IntPolynomial,
    ReducibleMinpolyError,
    TorusElement,
    conjugates,
    is_root_of_unity,
    mahler_log,
    radical,
    root_of_unity,
    roots,
    scale_by_rational,
    torus_height,
    torus_power,
    weil_height,
)

# log Mahler measure of x^10+x^9-x^7-x^6-x^5-x^4-x^3+x+1, frozen from an
# 80-digit independent evaluation (smallest known measure > 1)
LEHMER_MAHLER = 0.1623576120077381394321988035549658077079
# log golden ratio = log Mahler measure of x^2-x-1
LOG_PHI = 0.4812118250596034474977589134243684231352

LEHMER = IntPolynomial((1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1))


def rand_fraction(rng, span=10**6):
    num = rng.randint(-span, span)
    den = rng.randint(1, span)
    return Fraction(num, den)


def rand_poly(rng, max_deg=4, span=9):
    d = rng.randint(1, max_deg)
    cs = [rng.randint(-span, span) for _ in range(d)]
    lead = 0
    while lead == 0:
        lead = rng.randint(-span, span)
    return IntPolynomial(tuple(cs) + (lead,))


class TestWeilHeight:
    def test_radical_12(self):
        h = weil_height(radical(2, 12))
        assert abs(h - math.log(2) / 12) <= 1e-9

    def test_rationals_exact(self):
        rng = random.Random(7)
        for _ in range(20):
            r = rand_fraction(rng)
            h = weil_height(AlgebraicNumber.from_rational(r))
            want = 0.0 if r == 0 else math.log(max(abs(r.numerator), r.denominator))
            assert abs(h - want) <= 1e-12

    def test_cyclotomic_zero(self):
        for n in range(1, 31):
            z = root_of_unity(n)
            if z.degree <= 8:
                assert weil_height(z) <= 1e-12

    def test_integer_height(self):
        assert abs(weil_height(AlgebraicNumber.from_rational(7)) - math.log(7)) < 1e-14

    def test_inverse_symmetry(self):
        # h(1/a) = h(a): reversed minimal polynomial
        a = AlgebraicNumber.from_minpoly((2, 3, 5))
        inv = AlgebraicNumber.from_minpoly((5, 3, 2))
        assert abs(weil_height(a) - weil_height(inv)) <= 1e-12


class TestMahler:
    def test_lehmer_oracle(self):
        m = mahler_log(LEHMER, 1e-12)
        assert abs(m.value - LEHMER_MAHLER) <= 1e-12
        assert m.error <= 1e-12

    def test_golden_ratio(self):
        m = mahler_log(IntPolynomial((-1, -1, 1)), 1e-12)
        assert abs(m.value - LOG_PHI) <= 1e-12

    def test_binomial_exact(self):
        m = mahler_log(IntPolynomial((-2,) + (0,) * 199 + (1,)), 1e-12)
        assert abs(m.value - math.log(2)) <= 1e-14

    def test_linear(self):
        m = mahler_log(IntPolynomial((-3, 7)), 1e-12)
        assert abs(m.value - math.log(7)) <= 1e-14

    def test_additivity(self):
        rng = random.Random(1234)
        for _ in range(15):
            p, q = rand_poly(rng), rand_poly(rng)
            ab = mahler_log(p * q, 1e-10)
            a = mahler_log(p, 1e-10)
            b = mahler_log(q, 1e-10)
            assert abs(ab.value - a.value - b.value) <= 1e-9

    def test_error_is_bound(self):
        m = mahler_log(LEHMER, 1e-6)
        assert m.error <= 1e-6
        assert abs(m.value - LEHMER_MAHLER) <= m.error + 1e-15


class TestRoots:
    def test_count_and_radius(self):
        rng = random.Random(99)
        for _ in range(10):
            p = rand_poly(rng, max_deg=6)
            rs = roots(p, 1e-10)
            assert len(rs) == p.degree
            assert all(float(r.radius) <= 1e-10 for r in rs)

    def test_disjoint_squarefree(self):
        p = IntPolynomial((-2, 0, 0, 0, 0, 0, 0, 0, 1))
        rs = roots(p, 1e-12)
        for i in range(len(rs)):
            for j in range(i + 1, len(rs)):
                d = abs(complex(rs[i].center) - complex(rs[j].center))
                assert d > float(rs[i].radius) + float(rs[j].radius)

    def test_residual_bound(self):
        rng = random.Random(5)
        for _ in range(10):
            p = rand_poly(rng, max_deg=5)
            d = p.degree
            cmax = max(abs(c) for c in p.coeffs)
            for r in roots(p, 1e-10):
                z = complex(r.center)
                res = abs(p(z))
                bound = d * cmax * (1 + abs(z)) ** d * float(r.radius)
                assert res <= bound + 1e-12

    def test_conjugate_symmetry(self):
        p = IntPolynomial((3, -1, 2, 0, 1))
        rs = roots(p, 1e-12)
        for r in rs:
            if not r.is_real:
                mates = [
                    s
                    for s in rs
                    if abs(float(s.re - r.re)) <= 1e-9
                    and abs(float(s.im + r.im)) <= 1e-9
                ]
                assert len(mates) == 1

    def test_ordering_deterministic(self):
        p = IntPolynomial((-2, 0, 0, 0, 0, 0, 0, 0, 0, 1))
        a = roots(p, 1e-9)
        b = roots(p, 1e-15)
        for x, y in zip(a, b):
            assert abs(float(x.re - y.re)) < 1e-8
            assert abs(float(x.im - y.im)) < 1e-8
            assert x.is_real == y.is_real

    def test_real_recentred(self):
        for r in roots(IntPolynomial((-2, 0, 0, 1)), 1e-12):
            if r.is_real:
                assert float(r.im) == 0.0
                assert r.angle_unit() in (0.0, 0.5)

    def test_multiplicity_expansion(self):
        sq = IntPolynomial((-1, 1)) * IntPolynomial((-1, 1)) * IntPolynomial((2, 1))
        rs = roots(sq, 1e-10)
        assert len(rs) == 3
        assert sorted(r.multiplicity for r in rs) == [1, 2, 2]

    def test_linear_exact(self):
        (r,) = roots(IntPolynomial((-2, 3)), 1e-12)
        assert r.exact == Fraction(2, 3)
        assert r.is_real

    def test_degree_zero_rejected(self):
        with pytest.raises(AlgebraicError):
            roots(IntPolynomial((5,)), 1e-9)


class TestAlgebraicNumber:
    def test_reducible_rejected(self):
        with pytest.raises(ReducibleMinpolyError) as ei:
            AlgebraicNumber.from_minpoly((-1, 0, 1))
        assert ei.value.factor.degree >= 1
        assert ei.value.factor.divides(IntPolynomial((-1, 0, 1)))

    def test_reducible_high_degree(self):
        # (x^2+1)(x^2-2)
        with pytest.raises(ReducibleMinpolyError):
            AlgebraicNumber.from_minpoly((-2, 0, -1, 0, 1))

    def test_index_out_of_range(self):
        with pytest.raises(AlgebraicError):
            AlgebraicNumber.from_minpoly((-2, 0, 1), index=5)

    def test_select_by_approx(self):
        a = AlgebraicNumber.from_minpoly((-2, 0, 1), approx=1.414)
        assert abs(a.approx().real - math.sqrt(2)) < 1e-9
        b = AlgebraicNumber.from_minpoly((-2, 0, 1), approx=-1.414)
        assert abs(b.approx().real + math.sqrt(2)) < 1e-9

    def test_canonicalization(self):
        a = AlgebraicNumber.from_minpoly((4, 0, -2))  # -2x^2 + 4
        assert a.minpoly.coeffs == (-2, 0, 1)

    def test_strict_canonical_rejects(self):
        with pytest.raises(AlgebraicError):
            AlgebraicNumber.from_minpoly((4, 0, -2), strict_canonical=True)

    def test_conjugates(self):
        a = radical(2, 5)
        cs = conjugates(a)
        assert len(cs) == 5
        hs = [weil_height(c) for c in cs]
        assert max(hs) - min(hs) <= 1e-12

    def test_rational_detection(self):
        a = AlgebraicNumber.from_rational(Fraction(-3, 4))
        assert a.is_rational and a.as_rational() == Fraction(-3, 4)


class TestRootsOfUnity:
    def test_orders(self):
        for n in [1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 30]:
            assert is_root_of_unity(root_of_unity(n)) == n

    def test_nonprimitive_k(self):
        z = root_of_unity(12, 5)
        assert is_root_of_unity(z) == 12

    def test_radical_not(self):
        assert is_root_of_unity(radical(2, 8)) is None

    def test_unit_but_not_rou(self):
        # Lehmer's polynomial is monic with constant 1 but not cyclotomic
        a = AlgebraicNumber(LEHMER, 0)
        assert is_root_of_unity(a) is None

    def test_rational_prefilter(self):
        assert is_root_of_unity(AlgebraicNumber.from_rational(2)) is None
        assert is_root_of_unity(AlgebraicNumber.from_rational(-1)) == 2
        assert is_root_of_unity(AlgebraicNumber.from_rational(1)) == 1

    def test_angle(self):
        i = root_of_unity(4)
        assert abs(i.enclosure().angle_unit() - 0.25) < 1e-12

    def test_coprimality_required(self):
        with pytest.raises(AlgebraicError):
            root_of_unity(12, 4)


class TestScaling:
    def test_exact_rational(self):
        a = AlgebraicNumber.from_rational(Fraction(3, 7))
        b = scale_by_rational(a, Fraction(7, 3))
        assert b.as_rational() == 1

    def test_triangle(self):
        rng = random.Random(21)
        for _ in range(10):
            a = radical(rng.randint(2, 9), rng.randint(2, 6))
            r = rand_fraction(rng, span=50)
            if r == 0:
                continue
            hr = weil_height(AlgebraicNumber.from_rational(r))
            assert weil_height(scale_by_rational(a, r)) <= hr + weil_height(a) + 1e-9

    def test_roundtrip(self):
        a = radical(5, 3)
        r = Fraction(4, 9)
        back = scale_by_rational(scale_by_rational(a, r), 1 / r)
        assert back.minpoly == a.minpoly and back.index == a.index

    def test_value(self):
        a = radical(2, 2)
        b = scale_by_rational(a, 3)
        assert abs(b.approx().real - 3 * math.sqrt(2)) < 1e-9
        # both conjugates have modulus 3*sqrt(2), so the height is its log
        assert abs(weil_height(b) - math.log(3 * math.sqrt(2))) < 1e-9


class TestTorus:
    def test_power_height(self):
        t = TorusElement(radical(2, 12))
        assert abs(torus_height(torus_power(t, 8)) - 8 * math.log(2) / 12) <= 1e-12

    def test_power_composition(self):
        t = TorusElement(radical(3, 5))
        assert torus_power(torus_power(t, 2), 3) == torus_power(t, 6)

    def test_negative_exponent(self):
        t = TorusElement.from_rational(Fraction(2, 3), -2)
        assert t.rational_value() == Fraction(9, 4)
        assert abs(torus_height(t) - 2 * math.log(3)) <= 1e-12

    def test_unit_circle(self):
        assert TorusElement(root_of_unity(7), 3).is_unit_circle()
        assert not TorusElement(radical(2, 3)).is_unit_circle()
        assert torus_height(TorusElement(root_of_unity(7), 5)) == 0.0

    def test_zero_base_rejected(self):
        with pytest.raises(AlgebraicError):
            TorusElement.from_rational(0)


class TestRadical:
    def test_negative_odd(self):
        a = radical(-2, 3)
        assert a.approx().real < 0
        assert abs(weil_height(a) - math.log(2) / 3) <= 1e-12

    def test_negative_even_rejected(self):
        with pytest.raises(AlgebraicError):
            radical(-2, 2)

    def test_reducible_power(self):
        # x^4 - 4 factors; the real 4th root of 4 is sqrt(2)
        a = radical(4, 4)
        assert a.minpoly.coeffs == (-2, 0, 1)
        assert abs(a.approx().real - math.sqrt(2)) < 1e-12

    def test_rational_radical(self):
        a = radical(Fraction(8, 27), 3)
        assert a.is_rational and a.as_rational() == Fraction(2, 3)
