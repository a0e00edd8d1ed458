import pytest
import sympy
from gmpy2 import mpq
from hypothesis import assume, given, settings
from hypothesis import strategies as st

import frozen
from dnmod.curves import (INFINITY, AffinePoint, CurveError, GeneralCubicCurve, QuarticCurve, WeierstrassCurve,
                          an_sequence, ap_count, asd_verify, constructed_point, curve_d2, group_law, hasse_ok,
                          isogeny_checks, isogeny_residuals, j_invariant, point_order, quartic_map_residual,
                          quartic_pullback_ratio, quartic_to_weierstrass, spectral_d3, torsion_order)
from dnmod.dnop import d2, d3, nondegenerate, shift, twist
from dnmod.mirror import c_series
from dnmod.rings import primes_upto
from oracles import ap_bruteforce, quartic_ap_bruteforce
from strategies import d3_params, rationals

ROW15 = d3(-4, -88, -300, -304, 0, -8)


# -- spectral curve ------------------------------------------------------------

def test_spectral_examples():
    E = spectral_d3(d3(0, 0, 0, -256, 0, 0))
    assert (E.B, E.C, E.j()) == (1024, 0, 1728)
    assert spectral_d3(ROW15).j() == mpq(-122023936, 161051)
    assert spectral_d3(d3(0, 0, -108, 0, 0, 0)).j() == 0


def test_j_invariant_formula():
    B, C = mpq(-7, 3), mpq(5, 2)
    assert j_invariant(B, C) == 1728 * 4 * B ** 3 / (4 * B ** 3 + 27 * C ** 2)
    assert WeierstrassCurve(B, C).j() == j_invariant(B, C)


@settings(max_examples=30)
@given(d3_params(), rationals(8, 4))
def test_spectral_shift_invariant(p, eps):
    E, E2 = spectral_d3(p), spectral_d3(shift(p, eps))
    assert (E.B, E.C) == (E2.B, E2.C)


@settings(max_examples=30)
@given(d3_params(), rationals(6, 4, nonzero=True))
def test_spectral_twist_covariant(p, lam):
    E, E2 = spectral_d3(p), spectral_d3(twist(p, lam))
    assert (E2.B, E2.C) == (lam ** 4 * E.B, lam ** 6 * E.C)


@settings(max_examples=40)
@given(st.lists(st.integers(-4, 4), min_size=4, max_size=4), st.booleans())
def test_disc_cubic_vanishes_with_disc_F(a, force_double):
    a3, a2, a1, a0 = map(mpq, a)
    if force_double:
        # (z - r)^2 (z^2 + u z + v)
        r, u, v = a[0], a[1], a[2]
        F = sympy.Poly((sympy.Symbol("z") - r) ** 2 * (sympy.Symbol("z") ** 2 + u * sympy.Symbol("z") + v))
        _, a3, a2, a1, a0 = (mpq(int(c)) for c in F.all_coeffs())
    p = d3(a3, a2, a1, a0, 0, 0)
    assert (spectral_d3(p).delta == 0) == (not nondegenerate(p))


# -- quartic to Weierstrass ---------------------------------------------------------

def test_quartic_map_row15():
    F = ROW15.F()
    m, E = quartic_to_weierstrass(F, -4)
    assert (m.t1, m.t2) == (-44, 56)
    P = m.base_point()
    assert (P.x, P.y) == (mpq(56, 3), -44)
    assert E.contains(P)
    assert (E.B, E.C) == (spectral_d3(ROW15).B, spectral_d3(ROW15).C)


def test_quartic_map_identity_symmetric():
    F = d3(0, -40, 0, 144, 0, 0).F()
    for z0 in (2, -2, 6, -6):
        assert not any(quartic_map_residual(F, z0))


def test_quartic_map_identity_sympy_oracle():
    z, w = sympy.symbols("z w")
    F = z ** 4 - 4 * z ** 3 - 88 * z ** 2 - 300 * z - 304
    m, E = quartic_to_weierstrass(ROW15.F(), -4)
    t1, t2 = sympy.Integer(-44), sympy.Integer(56)
    x = t1 / (z + 4) + t2 / 3
    y = t1 * w / (z + 4) ** 2
    B, C = sympy.Rational(str(E.B)), sympy.Rational(str(E.C))
    expr = sympy.together(y ** 2 - x ** 3 - B * x - C)
    num = sympy.numer(expr).subs(w ** 2, F)
    assert sympy.expand(num) == 0


def test_quartic_map_not_a_root():
    with pytest.raises(CurveError):
        quartic_to_weierstrass(ROW15.F(), 1)


@given(rationals(20, 5), rationals(20, 5, nonzero=True))
def test_pullback_ratio(z, w):
    assume(z != -4)
    assert quartic_pullback_ratio(ROW15.F(), -4, z, w) == -1


# -- point counting -------------------------------------------------------------

def test_ap_examples():
    E = GeneralCubicCurve(0, -16, 0)
    assert ap_count(E, 5) == -2
    assert {p: ap_count(E, p) for p in frozen.AP_Z3_M16Z} == frozen.AP_Z3_M16Z
    E = GeneralCubicCurve(1, -24, 36)
    assert {p: ap_count(E, p) for p in frozen.AP_Z3_Z2_M24Z_36} == frozen.AP_Z3_Z2_M24Z_36


def test_ap_bad_prime_and_denominator():
    with pytest.raises(CurveError):
        ap_count(GeneralCubicCurve(0, -16, 0), 2)
    with pytest.raises(CurveError):
        ap_count(spectral_d3(ROW15), 3)


def test_quartic_model_gives_a3():
    Q = QuarticCurve(ROW15.F())
    assert ap_count(Q, 3) == -1
    assert {p: ap_count(Q, p) for p in frozen.AP_QUARTIC_ROW15} == frozen.AP_QUARTIC_ROW15


@pytest.mark.parametrize("params", [d3(0, -44, 0, -16, 0, -4), ROW15, d3(-2, -43, -156, -216, 0, -5)])
def test_quartic_and_weierstrass_counts_agree(params):
    Q, E = QuarticCurve(params.F()), spectral_d3(params)
    for p in primes_upto(100):
        if p in Q.bad_primes() | E.bad_primes():
            continue
        assert ap_count(Q, p) == ap_count(E, p)


@settings(max_examples=40)
@given(st.integers(-30, 30), st.integers(-30, 30), st.integers(-30, 30), st.sampled_from(primes_upto(200)[2:]))
def test_hasse_bound_and_bruteforce(a2, a1, a0, p):
    E = GeneralCubicCurve(a2, a1, a0)
    assume(E.disc and p not in E.bad_primes())
    a = ap_count(E, p)
    assert hasse_ok(a, p)
    assert a == ap_bruteforce([a0, a1, a2, 1], p)


@settings(max_examples=20)
@given(st.lists(st.integers(-20, 20), min_size=4, max_size=4), st.sampled_from(primes_upto(100)[2:]))
def test_quartic_bruteforce(a, p):
    F = [a[3], a[2], a[1], a[0], 1]
    Q = QuarticCurve(F)
    assume(Q.disc and p not in Q.bad_primes())
    assert ap_count(Q, p) == quartic_ap_bruteforce(F, p)


# -- L-coefficients ---------------------------------------------------------------

def test_an_sequence_structure():
    L = an_sequence(GeneralCubicCurve(0, -16, 0), 60)
    assert L[1] == 1
    assert L[15] == L[3] * L[5]
    assert L[9] == L[3] ** 2 - 3
    assert L[2] is None and L[6] is None
    assert 2 in L.bad


def test_d2_c_equals_an():
    c = c_series(d2(0, -16, 0, 0), 100).c
    L = an_sequence(GeneralCubicCurve(0, -16, 0), 100)
    assert all(c[n] == L[n] for n in L.good_indices())


# -- ASD ---------------------------------------------------------------------

def test_asd_d2_example():
    p = d2(0, -16, 0, 0)
    rep = asd_verify(c_series(p, 31).c, curve_d2(p), 31, 31)
    assert rep.ok and rep.checked > 0


def test_asd_d3_example():
    p = d3(0, -44, 0, -16, 0, -4)
    rep = asd_verify(c_series(p, 124).c, QuarticCurve(p.F()), 31, 124)
    assert rep.ok and rep.checked > 0


def test_asd_wrong_curve_fails():
    p = d3(0, -44, 0, -16, 0, -4)
    rep = asd_verify(c_series(p, 60).c, QuarticCurve(ROW15.F()), 31, 60)
    assert not rep.ok and rep.failures


def test_asd_perturbed_b0_rejected():
    # perturbing b0 breaks integrality of c_n, so no congruence can be checked
    p = d3(0, -44, 0, -16, 0, -3)
    with pytest.raises(CurveError):
        asd_verify(c_series(p, 30).c, QuarticCurve(p.F()), 31, 30)


# -- group law and torsion -------------------------------------------------------

def test_group_law_identity():
    E = spectral_d3(ROW15)
    P = AffinePoint(mpq(56, 3), mpq(-44))
    assert group_law(E, P, INFINITY) == P
    assert group_law(E, INFINITY, P) == P


def test_group_law_off_curve():
    E = spectral_d3(ROW15)
    with pytest.raises(CurveError):
        group_law(E, AffinePoint(mpq(0), mpq(1)), INFINITY)


def test_point_order_row15():
    x, y, order = frozen.TORSION_ROW15
    E = spectral_d3(ROW15)
    assert point_order(E, AffinePoint(mpq(x), mpq(y))) == order == 5


def test_constructed_point_orders():
    assert torsion_order(d3(0, -44, 0, -16, 0, -4)) == 4
    res = constructed_point(d3(-2, -59, -136, -80, 0, -5))
    x, y, order = frozen.TORSION_ROW18
    lin = [r for r in res if len(r.factor) == 2 and r.factor[0] == 5]
    assert lin and (lin[0].point.x, lin[0].point.y) == (mpq(x), mpq(y)) and lin[0].order == order


# -- isogenies ----------------------------------------------------------------

def test_isogeny_symbolic_identity():
    r1, r2 = isogeny_residuals()
    assert not r1 and not r2


def test_isogeny_sympy_oracle():
    z, y, a2, a1 = sympy.symbols("z y a2 a1")
    curve = z ** 3 + a2 * z ** 2 + a1 * z
    X, Y = y ** 2 / z ** 2, y * (a1 - z ** 2) / z ** 2
    target = X ** 3 - 2 * a2 * X ** 2 + (a2 ** 2 - 4 * a1) * X
    num = sympy.numer(sympy.together(Y ** 2 - target))
    assert sympy.rem(sympy.expand(num), y ** 2 - curve, y) == 0


@pytest.mark.parametrize("a2,a1", [(0, -16), (-7, -8), (-11, -1), (-12, 32)])
def test_isogeny_checks(a2, a1):
    rep = isogeny_checks(a2, a1)
    assert rep.ok and rep.checked_primes


def test_isogeny_degenerate():
    with pytest.raises(CurveError):
        isogeny_checks(2, 1)
