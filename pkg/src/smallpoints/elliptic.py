"""Elliptic curves over Q: exact group law and certified canonical heights.

Curves are short Weierstrass y^2 = x^3 + a x + b with rational a, b; points
carry exact rational coordinates. The canonical height is the duplication
limit

    hhat(P) = lim 4^(-n) h(x(2^n P))

where h(p/q) = log max(|p|, |q|). The tail after n steps is bounded by
C(E)/(3*4^n), with the envelope constant C(E) coming from explicit Bezout
identities between the duplication forms:

    F(p, q) = p^4 - 2 a p^2 q^2 - 8 b p q^3 + a^2 q^4
    G(p, q) = 4 q (p^3 + a p q^2 + b q^3)
    x(2P)   = F(p, q) / G(p, q)            for x(P) = p/q in lowest terms.

Evaluating the limit naively needs integers of astronomically many digits,
so after an exact big-integer prefix the orbit continues in interval
arithmetic, while the gcd cancellation g_k = gcd(F, G) (which the naive
height depends on) is tracked exactly through l-adic residues: g_k divides
the Bezout resultant R1, so only primes dividing R1 can cancel, and their
valuations are read off residues of p_k, q_k modulo l^K.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import List, Optional, Tuple

import sympy
from mpmath import iv, mp, mpf

Rat = Fraction

__all__ = [
    "EllipticError",
    "SingularCurveError",
    "OffCurveError",
    "CanonicalHeightBudgetError",
    "EllipticCurveQ",
    "ECPoint",
    "WeierstrassReduction",
    "DuplicationEnvelope",
    "ec_neg",
    "ec_add",
    "ec_mul",
    "naive_height",
    "canonical_height",
    "canonical_height_estimates",
    "is_torsion",
    "torsion_points",
    "duplication_envelope",
    "from_long_weierstrass",
]


class EllipticError(ValueError):
    """Invalid elliptic-curve construction or computation."""


class SingularCurveError(EllipticError):
    """Discriminant vanishes."""


class OffCurveError(EllipticError):
    """Point does not satisfy the curve equation."""


class CanonicalHeightBudgetError(EllipticError):
    """Certified height evaluation exceeded its precision/size budget."""


@dataclass(frozen=True)
class EllipticCurveQ:
    """y^2 = x^3 + a x + b with rational coefficients, nonsingular."""

    a: Fraction
    b: Fraction

    def __post_init__(self):
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))
        if self.discriminant == 0:
            raise SingularCurveError(f"discriminant vanishes for a={self.a}, b={self.b}")

    @property
    def discriminant(self) -> Fraction:
        return -16 * (4 * self.a**3 + 27 * self.b**2)

    def contains(self, x: Fraction, y: Fraction) -> bool:
        return y * y == x**3 + self.a * x + self.b

    def integral_model(self) -> Tuple["EllipticCurveQ", int]:
        """Smallest u with (u^4 a, u^6 b) integral; map is x -> u^2 x."""
        den = math.lcm(self.a.denominator, self.b.denominator)
        u = 1
        for ell, _ in sympy.factorint(den).items():
            va = _val_int(self.a.denominator, ell)
            vb = _val_int(self.b.denominator, ell)
            u *= int(ell) ** max(-(-va // 4), -(-vb // 6))
        return EllipticCurveQ(self.a * u**4, self.b * u**6), u


def _val_int(n: int, ell: int) -> int:
    v = 0
    while n % ell == 0:
        n //= ell
        v += 1
    return v


@dataclass(frozen=True)
class ECPoint:
    """Affine rational point or the identity (x = y = None)."""

    x: Optional[Fraction]
    y: Optional[Fraction]

    def __post_init__(self):
        if (self.x is None) != (self.y is None):
            raise EllipticError("both coordinates or neither")
        if self.x is not None:
            object.__setattr__(self, "x", Fraction(self.x))
            object.__setattr__(self, "y", Fraction(self.y))

    @classmethod
    def identity(cls) -> "ECPoint":
        return cls(None, None)

    @classmethod
    def of(cls, x, y) -> "ECPoint":
        return cls(Fraction(x), Fraction(y))

    @property
    def is_identity(self) -> bool:
        return self.x is None

    def __str__(self):
        return "O" if self.is_identity else f"({self.x}, {self.y})"


def require_on_curve(curve: EllipticCurveQ, point: ECPoint) -> ECPoint:
    if not point.is_identity and not curve.contains(point.x, point.y):
        raise OffCurveError(f"{point} is not on y^2 = x^3 + {curve.a}x + {curve.b}")
    return point


def ec_neg(point: ECPoint) -> ECPoint:
    if point.is_identity:
        return point
    return ECPoint(point.x, -point.y)


def ec_add(curve: EllipticCurveQ, p: ECPoint, q: ECPoint) -> ECPoint:
    if p.is_identity:
        return q
    if q.is_identity:
        return p
    if p.x == q.x:
        if p.y + q.y == 0:
            return ECPoint.identity()
        # doubling; p.y == q.y != 0 here
        lam = (3 * p.x * p.x + curve.a) / (2 * p.y)
    else:
        lam = (q.y - p.y) / (q.x - p.x)
    x3 = lam * lam - p.x - q.x
    y3 = lam * (p.x - x3) - p.y
    return ECPoint(x3, y3)


def ec_mul(curve: EllipticCurveQ, k: int, point: ECPoint) -> ECPoint:
    k = int(k)
    if k < 0:
        return ec_mul(curve, -k, ec_neg(point))
    acc = ECPoint.identity()
    add = point
    while k:
        if k & 1:
            acc = ec_add(curve, acc, add)
        k >>= 1
        if k:
            add = ec_add(curve, add, add)
    return acc


def naive_height(point: ECPoint) -> float:
    """log max(|numerator|, denominator) of the x coordinate; 0 for O."""
    if point.is_identity:
        return 0.0
    n, d = abs(point.x.numerator), point.x.denominator
    with mp.workdps(30):
        return float(mp.log(mpf(max(n, d))))


def is_torsion(curve: EllipticCurveQ, point: ECPoint, kmax: int = 12) -> bool:
    """Exact: kP = O for some 1 <= k <= kmax (12 suffices over Q)."""
    require_on_curve(curve, point)
    acc = ECPoint.identity()
    for _ in range(kmax):
        acc = ec_add(curve, acc, point)
        if acc.is_identity:
            return True
    return False


# ---------------------------------------------------------------------------
# duplication envelope via Bezout identities
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DuplicationEnvelope:
    """Constants with |h(x(2P)) - 4 h(x(P))| <= C for all rational P (2P != O).

    R1, R2 are the cleared-denominator Bezout constants:
      U1*F + V1*G = R1 * q^7   and   U2*F + V2*G = R2 * p^7
    with integer coefficient forms U*, V*; gcd(F, G) divides R1.
    """

    C: float
    R1: int
    R2: int
    D1: int
    D2: int
    C_upper: float


_Y = sympy.Symbol("y")


def _clear_bezout(f, g):
    """Integer Bezout data for coprime f, g in Z[y]: (U, V, R) with
    U f + V g = R, U, V integer polynomials, R a positive integer."""
    fp = sympy.Poly(f, _Y, domain="QQ")
    gp = sympy.Poly(g, _Y, domain="QQ")
    s, t, h = fp.gcdex(gp)
    if h.degree() != 0:
        raise SingularCurveError("duplication forms share a factor")
    c = h.LC()
    s = sympy.Poly(s.as_expr() / c, _Y, domain="QQ")
    t = sympy.Poly(t.as_expr() / c, _Y, domain="QQ")
    dens = [sympy.Rational(x).q for x in s.all_coeffs() + t.all_coeffs()]
    L = int(sympy.ilcm(*dens)) if dens else 1
    U = [int(x * L) for x in s.all_coeffs()]
    V = [int(x * L) for x in t.all_coeffs()]
    return U, V, L


@lru_cache(maxsize=128)
def _envelope_cached(A: int, B: int) -> DuplicationEnvelope:
    f = _Y**4 - 2 * A * _Y**2 - 8 * B * _Y + A * A
    g = 4 * (_Y**3 + A * _Y + B)
    U1, V1, R1 = _clear_bezout(f, g)
    D1 = sum(abs(c) for c in U1) + sum(abs(c) for c in V1)
    # reversed forms: identities in p instead of q
    fr = A * A * _Y**4 - 8 * B * _Y**3 - 2 * A * _Y**2 + 1
    gr = 4 * (B * _Y**4 + A * _Y**3 + _Y)
    U2, V2, R2 = _clear_bezout(fr, gr)
    D2 = sum(abs(c) for c in U2) + sum(abs(c) for c in V2)
    c_upper = max(1 + 2 * abs(A) + 8 * abs(B) + A * A, 4 * (1 + abs(A) + abs(B)))
    with mp.workdps(30):
        C = float(
            max(mp.log(c_upper), mp.log(D1), mp.log(mpf(D2) * R1 / R2)) * (1 + mpf(1e-12))
        )
    return DuplicationEnvelope(C=C, R1=R1, R2=R2, D1=D1, D2=D2, C_upper=float(mp.log(c_upper)))


def duplication_envelope(curve: EllipticCurveQ) -> DuplicationEnvelope:
    """Envelope for the integral model of the curve."""
    icurve, _ = curve.integral_model()
    return _envelope_cached(int(icurve.a), int(icurve.b))


# ---------------------------------------------------------------------------
# certified canonical height
# ---------------------------------------------------------------------------

_PREFIX_BITS = 1 << 15
_PREFIX_BITS_MAX = 1 << 21


def _dup_forms(A: int, B: int, p: int, q: int) -> Tuple[int, int]:
    p2, q2 = p * p, q * q
    F = p2 * p2 - 2 * A * p2 * q2 - 8 * B * p * q * q2 + A * A * q2 * q2
    G = 4 * q * (p * p2 + A * p * q2 + B * q * q2)
    return F, G


def _iv_from_int(n: int):
    """Certified interval for a (possibly huge) integer at current iv.prec."""
    if n == 0:
        return iv.mpf(0)
    neg = n < 0
    n = abs(n)
    bits = n.bit_length()
    keep = iv.prec - 8
    if bits <= keep:
        out = iv.mpf(n)
    else:
        e = bits - keep
        m = n >> e
        out = iv.mpf([m, m + 1]) * iv.mpf(2) ** e
    return -out if neg else out


def _iv_max_abs(a, b):
    aa, bb = abs(a), abs(b)
    return iv.mpf([max(aa.a, bb.a), max(aa.b, bb.b)])


class _ResidueTracker:
    """Exact residues of the duplication orbit modulo ell^K.

    Division by the cancellation g consumes v_ell(g) digits of precision per
    step; K is provisioned so at least c_ell + 2 digits always remain, which
    is enough to read valuations (they never exceed c_ell = v_ell(R1)).
    """

    def __init__(self, ell: int, c_ell: int, steps: int, p0: int, q0: int):
        self.ell = ell
        self.c = c_ell
        self.known = (steps + 2) * c_ell + 8
        m = ell**self.known
        self.p = p0 % m
        self.q = q0 % m

    def valuations(self, A: int, B: int):
        """(vF, vG) read from residues; None means >= readable precision."""
        m = self.ell**self.known
        F, G = _dup_forms(A, B, self.p, self.q)
        F %= m
        G %= m
        self._F, self._G = F, G
        return (_residue_val(F, self.ell), _residue_val(G, self.ell))

    def advance(self, g: int, e_self: int):
        """Divide the stored F, G residues by g and step; g = ell^e_self * unit."""
        self.known -= e_self
        m = self.ell**self.known
        unit = g // self.ell**e_self
        inv = pow(unit, -1, m)
        self.p = (self._F // self.ell**e_self) * inv % m
        self.q = (self._G // self.ell**e_self) * inv % m


def _residue_val(r: int, ell: int) -> Optional[int]:
    if r == 0:
        return None
    v = 0
    while r % ell == 0:
        r //= ell
        v += 1
    return v


class _WitnessTracker:
    """Residues modulo a large prime not dividing R1; certifies F != 0."""

    def __init__(self, w: int, p0: int, q0: int):
        self.w = w
        self.p = p0 % w
        self.q = q0 % w

    def forms(self, A: int, B: int) -> Tuple[int, int]:
        F, G = _dup_forms(A, B, self.p, self.q)
        self._F, self._G = F % self.w, G % self.w
        return self._F, self._G

    def advance(self, g: int):
        inv = pow(g % self.w, -1, self.w)
        self.p = self._F * inv % self.w
        self.q = self._G * inv % self.w


class _SuspectedExactZero(Exception):
    """The float continuation could not certify F != 0; extend the prefix."""


def _witness_primes(R1: int, count: int = 3) -> List[int]:
    out = []
    w = 1 << 61
    while len(out) < count:
        w = int(sympy.nextprime(w))
        if R1 % w != 0:
            out.append(w)
    return out


def _interval_continue(A, B, p0, q0, start, n_target, env, dps):
    """Continue the duplication orbit from exact (p0, q0) in intervals.

    Returns the interval for 4^(-n_target) * h_{n_target}. Raises
    _SuspectedExactZero if an exact F = 0 cannot be ruled out.
    """
    steps = n_target - start
    trackers = []
    for ell, c in sympy.factorint(env.R1).items():
        trackers.append(_ResidueTracker(int(ell), int(c), steps, p0, q0))
    witnesses = [_WitnessTracker(w, p0, q0) for w in _witness_primes(env.R1)]

    old_prec = iv.prec
    try:
        iv.dps = dps
        M = max(abs(p0), abs(q0))
        Mi = _iv_from_int(M)
        H = iv.log(Mi)
        ph = _iv_from_int(p0) / Mi
        qh = _iv_from_int(q0) / Mi
        for _ in range(steps):
            Fi = ph**4 - 2 * A * ph**2 * qh**2 - 8 * B * ph * qh**3 + A * A * qh**4
            Gi = 4 * qh * (ph**3 + A * ph * qh**2 + B * qh**3)
            wf = [w.forms(A, B) for w in witnesses]
            if 0 in Fi and all(f == 0 for f, _ in wf):
                raise _SuspectedExactZero()
            g = 1
            vals = []
            for t in trackers:
                vF, vG = t.valuations(A, B)
                if vF is None and vG is None:
                    # impossible for F != 0 since min(vF, vG) <= c_ell
                    raise _SuspectedExactZero()
                e = vG if vF is None else (vF if vG is None else min(vF, vG))
                e = min(e, t.c)
                vals.append(e)
                g *= t.ell**e
            for t, e in zip(trackers, vals):
                t.advance(g, e)
            for w in witnesses:
                w.advance(g)
            mi = _iv_max_abs(Fi, Gi)
            if not mi.a > 0:
                return None  # precision loss; retry at higher dps
            H = 4 * H + iv.log(mi) - iv.log(iv.mpf(g))
            ph, qh = Fi / mi, Gi / mi
        return H / iv.mpf(4) ** n_target
    finally:
        iv.prec = old_prec


def _hybrid_height(A: int, B: int, p0: int, q0: int, tol: float, want_estimates=False):
    """Certified 4^(-n) h_n with n chosen so tail + evaluation error <= tol."""
    env = _envelope_cached(A, B)
    # internal target stricter than tol so m^2-linear combinations of
    # results stay within acceptance-style bands
    tail = tol / 32
    n_target = max(1, math.ceil(math.log(env.C / (3 * tail)) / math.log(4)))
    prefix_bits = _PREFIX_BITS
    while True:
        p, q = p0, q0
        estimates = [float(_log_max_int(abs(p), q))] if want_estimates else None
        k = 0
        while k < n_target and max(abs(p).bit_length(), q.bit_length()) <= prefix_bits:
            F, G = _dup_forms(A, B, p, q)
            if G == 0:
                raise EllipticError("duplication orbit hit a 2-torsion point")
            g = math.gcd(abs(F), abs(G))
            p, q = F // g, G // g
            if q < 0:
                p, q = -p, -q
            k += 1
            if want_estimates:
                estimates.append(float(_log_max_int(abs(p), q) / 4**k))
        if k == n_target:
            with mp.workdps(40):
                val = float(_log_max_int(abs(p), q) / 4**n_target)
            return val, env.C / (3 * 4**n_target), estimates, env
        try:
            for dps in (60, 120, 240, 480):
                box = _interval_continue(A, B, p, q, k, n_target, env, dps)
                if box is not None:
                    width = float(mp.mpf(box.delta))
                    if width <= tol / 4:
                        if want_estimates:
                            estimates = _estimates_via_intervals(
                                A, B, p, q, k, n_target, env, dps, estimates
                            )
                        val = float(mp.mpf(box.mid))
                        return val, env.C / (3 * 4**n_target) + width, estimates, env
            raise CanonicalHeightBudgetError(
                "interval continuation would not certify the requested tolerance"
            )
        except _SuspectedExactZero:
            prefix_bits *= 4
            if prefix_bits > _PREFIX_BITS_MAX:
                raise CanonicalHeightBudgetError(
                    "orbit passes too close to x = 0 for the exact prefix budget"
                ) from None


def _estimates_via_intervals(A, B, p, q, start, n_target, env, dps, prefix_estimates):
    ests = list(prefix_estimates)
    for n in range(start + 1, n_target + 1):
        box = _interval_continue(A, B, p, q, start, n, env, dps)
        if box is None:
            break
        ests.append(float(mp.mpf(box.mid)))
    return ests


def _log_max_int(a: int, b: int):
    """log max(a, b) for nonnegative ints of arbitrary size."""
    m = max(a, b)
    if m <= 1:
        return mpf(0)
    with mp.workdps(40):
        bits = m.bit_length()
        if bits <= 900:
            return mp.log(mpf(m))
        top = m >> (bits - 600)
        return mp.log(mpf(top)) + (bits - 600) * mp.log(mpf(2))


def canonical_height(curve: EllipticCurveQ, point: ECPoint, tol: float = 1e-8) -> float:
    """Neron-Tate height in the x-coordinate normalization, error <= tol.

    Exactly 0 for torsion points. Model-independent: the curve is rescaled
    to integral coefficients first, which does not change the limit.
    """
    require_on_curve(curve, point)
    if tol <= 0:
        raise EllipticError("tol must be positive")
    if point.is_identity or is_torsion(curve, point):
        return 0.0
    icurve, u = curve.integral_model()
    x = point.x * u * u
    val, _, _, _ = _hybrid_height(
        int(icurve.a), int(icurve.b), x.numerator, x.denominator, tol
    )
    return val


def canonical_height_estimates(
    curve: EllipticCurveQ, point: ECPoint, tol: float = 1e-8
) -> List[float]:
    """The convergents 4^(-n) h_n, n = 0..n_target; diagnostics for the
    envelope bound |e_{n+1} - e_n| <= C/4^(n+1)."""
    require_on_curve(curve, point)
    if point.is_identity or is_torsion(curve, point):
        return [0.0]
    icurve, u = curve.integral_model()
    x = point.x * u * u
    _, _, ests, _ = _hybrid_height(
        int(icurve.a), int(icurve.b), x.numerator, x.denominator, tol, want_estimates=True
    )
    return ests


# ---------------------------------------------------------------------------
# torsion enumeration (integral models, Lutz-Nagell)
# ---------------------------------------------------------------------------


def torsion_points(curve: EllipticCurveQ) -> List[ECPoint]:
    """All torsion points, via Lutz-Nagell candidates checked exactly.

    Candidates on the integral model have integer coordinates with y = 0 or
    y^2 dividing 16(4A^3 + 27B^2); every candidate is verified with kP = O,
    k <= 12, so the superset does not matter.
    """
    icurve, u = curve.integral_model()
    A, B = int(icurve.a), int(icurve.b)
    disc16 = 16 * abs(4 * A**3 + 27 * B**2)
    ys = {0}
    for d in _square_divisors(disc16):
        ys.add(d)
    found = [ECPoint.identity()]
    seen = set()
    for y in sorted(ys):
        for x in _integer_cubic_roots(A, B - y * y):
            for sy in ({0} if y == 0 else {y, -y}):
                if (x, sy) in seen:
                    continue
                seen.add((x, sy))
                pt = ECPoint(Fraction(x), Fraction(sy))
                if icurve.contains(pt.x, pt.y) and is_torsion(icurve, pt):
                    found.append(pt)
    # map back to the original model: x = X / u^2, y = Y / u^3
    out = []
    for pt in found:
        if pt.is_identity:
            out.append(pt)
        else:
            out.append(ECPoint(pt.x / u**2, pt.y / u**3))
    return sorted(out, key=lambda t: (0,) if t.is_identity else (1, t.x, t.y))


def _square_divisors(n: int) -> List[int]:
    """Positive y with y^2 | n."""
    if n == 0:
        return []
    fac = sympy.factorint(n)
    out = [1]
    for ell, e in fac.items():
        ell = int(ell)
        out = [d * ell**k for d in out for k in range(e // 2 + 1)]
    return sorted(out)


def _integer_cubic_roots(A: int, c: int) -> List[int]:
    """Integer roots of x^3 + A x + c."""
    if c == 0:
        roots = [0]
        # x^2 = -A
        if A < 0:
            s = sympy.integer_nthroot(-A, 2)
            if s[1]:
                roots.extend([s[0], -s[0]])
        return roots
    roots = []
    for d in sympy.divisors(abs(c)):
        for x in (d, -d):
            if x**3 + A * x + c == 0:
                roots.append(x)
    return roots


# ---------------------------------------------------------------------------
# long Weierstrass normalization
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WeierstrassReduction:
    """Change of variables from y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6
    to short form: X = x + b2/12, Y = y + (a1 x + a3)/2."""

    curve: EllipticCurveQ
    a1: Fraction
    a2: Fraction
    a3: Fraction

    @property
    def x_shift(self) -> Fraction:
        return (self.a1**2 + 4 * self.a2) / 12

    def to_short(self, point: ECPoint) -> ECPoint:
        if point.is_identity:
            return point
        x, y = point.x, point.y
        return ECPoint(x + self.x_shift, y + (self.a1 * x + self.a3) / 2)

    def from_short(self, point: ECPoint) -> ECPoint:
        if point.is_identity:
            return point
        x = point.x - self.x_shift
        return ECPoint(x, point.y - (self.a1 * x + self.a3) / 2)


def from_long_weierstrass(a1, a2, a3, a4, a6) -> WeierstrassReduction:
    a1, a2, a3, a4, a6 = (Fraction(t) for t in (a1, a2, a3, a4, a6))
    b2 = a1 * a1 + 4 * a2
    b4 = 2 * a4 + a1 * a3
    b6 = a3 * a3 + 4 * a6
    A = (24 * b4 - b2 * b2) / 48
    B = (b2**3 - 36 * b2 * b4 + 216 * b6) / 864
    return WeierstrassReduction(curve=EllipticCurveQ(A, B), a1=a1, a2=a2, a3=a3)
