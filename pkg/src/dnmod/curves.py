"""Spectral elliptic curves, point counts, L-coefficients, torsion, isogenies."""
from __future__ import annotations

from dataclasses import dataclass, field
from gmpy2 import mpq

from . import kernels, upoly
from .dnop import D2Params, D3Params
from .errors import CurveError
from .mpoly import poly_ring
from .numfield import factor_rational, root_field
from .rings import Rat, _INT_TYPES, _rat_mod, is_prime, primes_upto, rat


def _prime_factors(n: int) -> set[int]:
    n = abs(int(n))
    out, d = set(), 2
    while d * d <= n:
        while n % d == 0:
            out.add(d)
            n //= d
        d += 1
    if n > 1:
        out.add(n)
    return out


def _is_rational(x) -> bool:
    return isinstance(x, (Rat, *_INT_TYPES))


def _exact(x):
    return mpq(x) if isinstance(x, _INT_TYPES) else x


class _PlaneCubic:
    """Shared machinery for y^2 = f(x) with f monic of degree 3 or 4."""

    def f(self) -> list:
        raise NotImplementedError

    @property
    def disc(self):
        return upoly.discriminant(self.f())

    def bad_primes(self) -> set[int]:
        """2, primes dividing the numerator of the discriminant, and primes in
        coefficient denominators (where this model cannot be reduced)."""
        d = self.disc
        if not d:
            raise CurveError("singular curve")
        bad = {2} | _prime_factors(rat(d).numerator)
        for c in self.f():
            bad |= _prime_factors(rat(c).denominator)
        return bad

    def ap(self, p: int) -> int:
        return ap_count(self, p)

    def contains(self, P: "AffinePoint") -> bool:
        if P.is_infinity:
            return True
        return P.y * P.y == upoly.evaluate(self.f(), P.x)


class WeierstrassCurve(_PlaneCubic):
    """y^2 = x^3 + B x + C."""

    def __init__(self, B, C):
        self.B = _exact(B)
        self.C = _exact(C)

    def f(self) -> list:
        one = self.B * 0 + 1
        return [self.C, self.B, one * 0, one]

    @property
    def delta(self):
        """4 B^3 + 27 C^2."""
        return 4 * self.B ** 3 + 27 * self.C ** 2

    def j(self):
        d = self.delta
        if not d:
            raise CurveError("j-invariant of a singular curve")
        return 1728 * 4 * self.B ** 3 / d

    def a1a2(self):
        return self.B * 0, self.B

    def __repr__(self):
        return f"y^2 = x^3 + ({self.B})x + ({self.C})"


class GeneralCubicCurve(_PlaneCubic):
    """y^2 = z^3 + a2 z^2 + a1 z + a0."""

    def __init__(self, a2, a1, a0):
        self.a2, self.a1, self.a0 = _exact(a2), _exact(a1), _exact(a0)

    def f(self) -> list:
        one = self.a2 * 0 + 1
        return [self.a0, self.a1, self.a2, one]

    def short(self) -> WeierstrassCurve:
        """Via z = x - a2/3."""
        a2, a1, a0 = self.a2, self.a1, self.a0
        return WeierstrassCurve(a1 - a2 * a2 / 3, 2 * a2 ** 3 / 27 - a2 * a1 / 3 + a0)

    def j(self):
        return self.short().j()

    def __repr__(self):
        return f"y^2 = z^3 + ({self.a2})z^2 + ({self.a1})z + ({self.a0})"


class QuarticCurve(_PlaneCubic):
    """w^2 = F(z) with F monic quartic; point counts come with two points at infinity."""

    def __init__(self, F: list):
        F = upoly.trim([_exact(c) for c in F])
        if len(F) != 5 or F[4] != 1:
            raise CurveError("QuarticCurve needs a monic quartic")
        self.F = F

    def f(self) -> list:
        return self.F

    def jacobian(self) -> WeierstrassCurve:
        return spectral_from_quartic(self.F)

    def __repr__(self):
        return f"w^2 = {upoly.to_str(list(self.F))}"


def spectral_from_quartic(F: list) -> WeierstrassCurve:
    a0, a1, a2, a3 = F[0], F[1], F[2], F[3]
    B = a1 * a3 - a2 * a2 / 3 - 4 * a0
    C = a0 * a3 * a3 - a1 * a2 * a3 / 3 + 2 * a2 ** 3 / 27 - 8 * a0 * a2 / 3 + a1 * a1
    return WeierstrassCurve(B, C)


def spectral_d3(params: D3Params) -> WeierstrassCurve:
    return spectral_from_quartic(params.F())


def curve_d2(params: D2Params) -> GeneralCubicCurve:
    return GeneralCubicCurve(params.a2, params.a1, params.a0)


def j_invariant(B, C):
    return WeierstrassCurve(B, C).j()


# -- point counting --------------------------------------------------------------

def _residues(coeffs: list, p: int) -> list[int]:
    out = []
    for c in coeffs:
        if not _is_rational(c):
            raise CurveError("point counting needs rational coefficients")
        try:
            out.append(_rat_mod(rat(c), p))
        except ArithmeticError as exc:
            raise CurveError(f"coefficient {c} has denominator divisible by {p}") from exc
    return out


def ap_count(curve, p: int) -> int:
    """a_p = p + 1 - #E(F_p) by a Legendre-symbol sum, for a good odd prime p."""
    if p == 2 or not is_prime(p):
        raise CurveError(f"ap_count needs an odd prime, got {p}")
    f = curve.f()
    res = _residues(f, p)
    d = rat(curve.disc)
    if d.numerator % p == 0:
        raise CurveError(f"bad reduction at {p}")
    s = kernels.legendre_sum(res, p)
    a = -1 - s if isinstance(curve, QuarticCurve) else -s
    if a * a > 4 * p:
        raise CurveError(f"Hasse bound violated: a_{p} = {a}")
    return a


@dataclass
class LCoeffs:
    """a_n for n <= N with every prime factor good; ``None`` marks excluded n."""

    N: int
    a: list
    bad: set = field(default_factory=set)

    def __getitem__(self, n: int):
        return self.a[n]

    def good_indices(self) -> list[int]:
        return [n for n in range(1, self.N + 1) if self.a[n] is not None]


def an_sequence(curve, N: int, extra_bad=()) -> LCoeffs:
    bad = set(curve.bad_primes()) | set(extra_bad)
    a: list = [None] * (N + 1)
    if N >= 1:
        a[1] = 1
    primes = [p for p in primes_upto(N) if p not in bad]
    for p in primes:
        ap = ap_count(curve, p)
        prev, cur = 1, ap
        pk = p
        while pk <= N:
            a[pk] = cur
            prev, cur = cur, ap * cur - p * prev
            pk *= p
    # multiplicativity over coprime prime-power factors
    for n in range(2, N + 1):
        if a[n] is not None:
            continue
        m = n
        ok = True
        val = 1
        for p in sorted(_prime_factors(n)):
            if p in bad:
                ok = False
                break
            pk = 1
            while m % p == 0:
                m //= p
                pk *= p
            val *= a[pk]
        if ok:
            a[n] = val
    return LCoeffs(N, a, bad)


@dataclass
class ASDReport:
    checked: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def _vp(n: int, p: int) -> int:
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def asd_verify(c: list, curve, P: int, N: int, denominator: int = 1) -> ASDReport:
    """Check c_{np} - a_p c_n + p c_{n/p} = 0 mod p^(ord_p(n)+1) for good p in [5, P], np <= N.

    ``c`` is indexed by n (c[0] ignored).  The values times ``denominator`` must be integers.
    """
    ints = [None]
    for n in range(1, min(N, len(c) - 1) + 1):
        x = rat(c[n]) * denominator
        if x.denominator != 1:
            raise CurveError(f"c_{n} = {c[n]} is not integral")
        ints.append(int(x.numerator))
    N = len(ints) - 1
    bad = curve.bad_primes() | {2, 3}
    rep = ASDReport()
    for p in primes_upto(P):
        if p in bad:
            continue
        ap = ap_count(curve, p)
        for n in range(1, N // p + 1):
            val = ints[n * p] - ap * ints[n] + (p * ints[n // p] if n % p == 0 else 0)
            rep.checked += 1
            if val % p ** (_vp(n, p) + 1):
                rep.failures.append((p, n, val))
    return rep


# -- group law -------------------------------------------------------------------

@dataclass(frozen=True)
class AffinePoint:
    x: object = None
    y: object = None

    @property
    def is_infinity(self) -> bool:
        return self.x is None

    def __repr__(self):
        return "O" if self.is_infinity else f"({self.x}, {self.y})"


INFINITY = AffinePoint()


def group_law(curve, P: AffinePoint, Q: AffinePoint) -> AffinePoint:
    """Chord-tangent addition on y^2 = x^3 + a2 x^2 + a4 x + a6."""
    for R in (P, Q):
        if not curve.contains(R):
            raise CurveError(f"point {R} is not on {curve}")
    if P.is_infinity:
        return Q
    if Q.is_infinity:
        return P
    f = curve.f()
    a2, a4 = f[2], f[1]
    if P.x == Q.x:
        if P.y != Q.y or not P.y:
            return INFINITY
        lam = (3 * P.x * P.x + 2 * a2 * P.x + a4) / (2 * P.y)
    else:
        lam = (Q.y - P.y) / (Q.x - P.x)
    x3 = lam * lam - a2 - P.x - Q.x
    y3 = lam * (P.x - x3) - P.y
    return AffinePoint(x3, y3)


def point_order(curve, P: AffinePoint, bound: int = 16) -> int | None:
    R = P
    for k in range(1, bound + 1):
        if R.is_infinity:
            return k
        R = group_law(curve, R, P)
    return None


# -- quartic to Weierstrass ------------------------------------------------------

@dataclass(frozen=True)
class QuarticMap:
    """(z, w) -> (t1/(z-z0) + t2/3, t1 w/(z-z0)^2) with t_i = F^(i)(z0)/i!."""

    z0: object
    t1: object
    t2: object
    t3: object

    def __call__(self, z, w) -> AffinePoint:
        h = z - self.z0
        return AffinePoint(self.t1 / h + self.t2 / 3, self.t1 * w / (h * h))

    def base_point(self) -> AffinePoint:
        """Image of the point at infinity with w ~ +z^2."""
        return AffinePoint(self.t2 / 3, self.t1)


def quartic_to_weierstrass(F: list, z0) -> tuple[QuarticMap, WeierstrassCurve]:
    F, z0 = [_exact(c) for c in F], _exact(z0)
    Fz = upoly.taylor_shift(F, z0)
    Fz = Fz + [z0 * 0] * (5 - len(Fz))
    if Fz[0]:
        raise CurveError(f"{z0} is not a root of F")
    m = QuarticMap(z0, Fz[1], Fz[2], Fz[3])
    t1, t2, t3 = Fz[1], Fz[2], Fz[3]
    B = t1 * t3 - t2 * t2 / 3
    C = t1 * t1 + 2 * t2 ** 3 / 27 - t1 * t2 * t3 / 3
    return m, WeierstrassCurve(B, C)


def quartic_map_residual(F: list, z0) -> list:
    """h X^3 + B h^3 X + C h^4 - t1^2 F(z0 + h) with X = h x; zero iff the map lands on the curve."""
    m, E = quartic_to_weierstrass(F, z0)
    F, z0 = [_exact(c) for c in F], _exact(z0)
    X = [m.t1, m.t2 / 3]
    lhs = upoly.add(upoly.add(upoly.mul([z0 * 0, z0 * 0 + 1], upoly.mul(X, upoly.mul(X, X))),
                              upoly.mul([z0 * 0] * 3 + [E.B], X)),
                    [z0 * 0] * 4 + [E.C])
    rhs = upoly.scale(upoly.taylor_shift(list(F), z0), m.t1 * m.t1)
    return upoly.sub(lhs, rhs)


def quartic_pullback_ratio(F: list, z0, z, w):
    """(dx/dz) / y * w at a point; equals -1 when dx/y = -dz/w."""
    m, _ = quartic_to_weierstrass(F, z0)
    z, w, z0 = _exact(z), _exact(w), _exact(z0)
    h = z - z0
    dx_dz = -m.t1 / (h * h)
    return dx_dz / m(z, w).y * w


@dataclass
class TorsionResult:
    factor: list
    point: AffinePoint
    order: int | None
    curve: WeierstrassCurve


def constructed_point(params: D3Params, bound: int = 16) -> list[TorsionResult]:
    """For each irreducible factor of F over Q: the point P = (t2/3, t1) at a root z0
    of that factor, on the spectral curve over Q(z0), with its order."""
    F = [rat(c) for c in params.F()]
    out = []
    for fac, _ in factor_rational(F):
        K, z0 = root_field(fac)
        Fk = [K(c) for c in F]
        m, E = quartic_to_weierstrass(Fk, z0)
        P = m.base_point()
        if not E.contains(P):
            raise CurveError("constructed point is off the curve")
        out.append(TorsionResult(fac, P, point_order(E, P, bound), E))
    return out


def torsion_order(params: D3Params, bound: int = 16) -> int | None:
    """Smallest order of the constructed point over the roots of F (None if unbounded)."""
    orders = [r.order for r in constructed_point(params, bound) if r.order is not None]
    return min(orders) if orders else None


# -- isogenies of the bridge -----------------------------------------------------

@dataclass
class IsogenyReport:
    first_map_residual: object
    second_map_residual: object
    ap_mismatches: list
    checked_primes: list

    @property
    def ok(self) -> bool:
        return not self.first_map_residual and not self.second_map_residual and not self.ap_mismatches


def isogeny_residuals(a2=None, a1=None):
    """Residuals of the maps E2 -> E2' and E3 -> E2' modulo the curve relation, as
    polynomials in z (and symbolic a2, a1 when not given); both vanish."""
    R = poly_ring("z", "a2", "a1")
    z = R.gen("z")
    A2 = R.gen("a2") if a2 is None else R(a2)
    A1 = R.gen("a1") if a1 is None else R(a1)
    y2 = z ** 3 + A2 * z ** 2 + A1 * z
    # (z, y) -> (y^2/z^2, y(a1 - z^2)/z^2), everything times z^6, y^2 replaced
    r1 = y2 * (A1 - z * z) ** 2 * z * z - (y2 ** 3 - 2 * A2 * y2 ** 2 * z * z + (A2 * A2 - 4 * A1) * y2 * z ** 4)
    # (z, y) -> (z/4 + 2 a2/3, y/8) carries the D3 spectral curve onto E2'
    # (it is the inverse of E2' -> E3, (z, y) -> (4z - 8 a2/3, 8y))
    B = -A2 * A2 * mpq(16, 3) - 64 * A1
    C = A2 ** 3 * mpq(128, 27) - A1 * A2 * mpq(512, 3)
    y2e3 = z ** 3 + B * z + C
    X = z / 4 + A2 * mpq(2, 3)
    r2 = y2e3 / 64 - (X ** 3 - 2 * A2 * X ** 2 + (A2 * A2 - 4 * A1) * X)
    return r1, r2


def isogeny_checks(a2, a1, pmax: int = 50) -> IsogenyReport:
    a2, a1 = rat(a2), rat(a1)
    E2 = GeneralCubicCurve(a2, a1, mpq(0))
    if not E2.disc:
        raise CurveError("degenerate input curve")
    E3 = spectral_from_quartic([16 * a1, mpq(0), 4 * a2, mpq(0), mpq(1)])
    r1, r2 = isogeny_residuals(a2, a1)
    bad = E2.bad_primes() | E3.bad_primes()
    checked, bad_ap = [], []
    for p in primes_upto(pmax):
        if p in bad:
            continue
        x, y = ap_count(E2, p), ap_count(E3, p)
        checked.append(p)
        if x != y:
            bad_ap.append((p, x, y))
    return IsogenyReport(r1, r2, bad_ap, checked)


def hasse_ok(a: int, p: int) -> bool:
    return a * a <= 4 * p
