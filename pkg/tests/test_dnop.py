from fractions import Fraction
from math import comb

import pytest
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

import frozen
from dnmod.dnop import (DNMatrix, apply_t, apply_t_log, apply_z, bridge_d2_to_d3, d2, d3, from_zagier, frobenius,
                        half_operator, local_solutions, matrix_from_d2, matrix_from_d3, nondegenerate, operator_form,
                        params_from_matrix, parse_params, phi_series, shift, twist)
from dnmod.errors import DnmodError
from dnmod.mirror import symbolic_params
from strategies import d2_params, d3_params, rationals


def as_str(seq):
    return [str(Fraction(int(x.numerator), int(x.denominator))) for x in seq]


# -- matrices ---------------------------------------------------------------

def test_matrix_zero_params():
    m = matrix_from_d2(d2(0, 0, 0, 0))
    assert m.a == [[0, 0, 0], [1, 0, 0], [0, 1, 0]]


def test_matrix_recovery_formulas():
    m = matrix_from_d2(d2(0, -16, 0, 0))
    assert (m[0, 0], m[1, 1], m[0, 1], m[0, 2]) == (0, 0, 8, 0)


@given(d2_params())
def test_d2_matrix_round_trip(p):
    m = matrix_from_d2(p)
    assert params_from_matrix(m) == p
    b, a2, a1, a0 = p.b, p.a2, p.a1, p.a0
    assert m[0, 0] == b and m[1, 1] == -2 * b - a2
    assert m[0, 1] == -mpq(3, 2) * b * b - b * a2 - a1 / 2
    assert m[0, 2] == -b ** 3 - b * b * a2 - b * a1 - a0


@given(d3_params())
def test_d3_matrix_round_trip(p):
    assert params_from_matrix(matrix_from_d3(p)) == p


def test_persymmetry_enforced():
    with pytest.raises(DnmodError):
        DNMatrix([[1, 2, 3], [1, 0, 5], [0, 1, 7]])


def test_charpoly_is_F():
    p = d3(1, -2, 3, -4, 5, -6)
    assert matrix_from_d3(p).charpoly() == p.F()


@settings(max_examples=10)
@given(st.sampled_from([2, 3]), st.data())
def test_det_right_reproduces_operator(order, data):
    p = data.draw(d2_params() if order == 2 else d3_params())
    m = matrix_from_d2(p) if order == 2 else matrix_from_d3(p)
    assert m.operator_inf() == [list(c) for c in operator_form(p).z_coeffs]


@settings(max_examples=10)
@given(d3_params(), rationals(6, 3), rationals(6, 3, nonzero=True))
def test_matrix_transforms_match_params(p, eps, lam):
    m = matrix_from_d3(p)
    assert params_from_matrix(m.shift(eps)) == shift(p, eps)
    assert params_from_matrix(m.twist(lam)) == twist(p, lam)


# -- operator forms ------------------------------------------------------------

def test_d2_with_a0_zero_is_zagier_operator():
    # D^2 - t(A D^2 + A D + lam) + B t^2 (D+1)^2 for (A, B, lam) = (7, -8, 2)
    f = operator_form(from_zagier(7, -8, 2))
    assert f.t_poly(0) == [0, 0, 1]
    assert f.t_poly(1) == [-2, -7, -7]
    assert f.t_poly(2) == [-8, -16, -8]


def test_d3_zero_params_is_D_cubed():
    f = operator_form(d3(0, 0, 0, 0, 0, 0))
    assert f.t_poly(0) == [0, 0, 0, 1]
    assert all(not any(f.t_poly(j)) for j in range(1, len(f.t_coeffs)))


def test_d3_row1_t2_coefficient():
    # (D+1)(-44 (D+1)^2 - 4) = -44 D^3 - 132 D^2 - 136 D - 48
    assert operator_form(d3(0, -44, 0, -16, 0, -4)).t_poly(2) == [-48, -136, -132, -44]


def test_parse_params():
    assert parse_params("0,-44,0,-16,0,-4") == d3(0, -44, 0, -16, 0, -4)
    assert parse_params("1/2,0,0,3") == d2(mpq(1, 2), 0, 0, 3)
    with pytest.raises(ValueError):
        parse_params("1,2,3")


# -- Frobenius solutions ---------------------------------------------------------

def test_phi0_zagier_row():
    assert phi_series(d2(-7, -8, 0, 2), N=5).c == [1, 2, 10, 56, 346, 2252]
    assert as_str(phi_series(d2(-7, -8, 0, 2), N=12).c) == frozen.U_D2_7_M8_2


def test_phi0_d2_against_recurrence_and_sympy():
    p = d2(mpq(3, 2), -5, mpq(7, 3), mpq(-1, 4))
    assert as_str(phi_series(p, N=10).c) == frozen.U_D2_RANDOM
    assert as_str(phi_series(p, N=6).c) == frozen.PHI0_D2_SYMPY


def test_phi0_d3_against_sympy():
    assert as_str(phi_series(d3(0, -44, 0, -16, 0, -4), N=6).c) == frozen.PHI0_D3_ROW1
    p = d3(mpq(1, 2), -3, 2, mpq(5, 7), 1, mpq(-2, 3))
    assert as_str(phi_series(p, N=5).c) == frozen.PHI0_D3_RANDOM


def test_phi0_d3_generic_t2():
    p, R = symbolic_params(3)
    a3, a2, a1, a0, b1, b0 = R.gens()
    u = phi_series(p, N=2).c
    assert u[1] == -b1 / 2
    assert u[2] == mpq(3, 16) * a3 * b1 + mpq(3, 32) * b1 * b1 - a2 / 8 - b0 / 8


def test_psi_d2_generic_t1():
    p, R = symbolic_params(2)
    a2, a1, a0, b = R.gens()
    psi = phi_series(p, "log_part", 2)
    assert psi.c[0] == 0 and psi.c[1] == -a2 - 2 * b


def test_phi_series_bad_kind():
    with pytest.raises(ValueError):
        phi_series(d2(0, 0, 0, 0), "neither")


@settings(max_examples=20)
@given(st.one_of(d2_params(), d3_params()))
def test_frobenius_pair_solves_operator(p):
    N = 30
    phi0 = phi_series(p, N=N)
    psi = phi_series(p, "log_part", N)
    form = operator_form(p)
    assert not any(apply_t(form, phi0).c)
    log_coeff, rest = apply_t_log(form, phi0, psi)
    assert not any(log_coeff.c) and not any(rest.c)


# -- symmetric square ------------------------------------------------------------

def test_half_operator_zero_params():
    h = half_operator(d3(0, 0, 0, 0, 0, 0))
    assert [list(c) for c in h.z_coeffs] == [[0, 0, mpq(1, 4)], [0, 0, 0, 2], [0, 0, 0, 0, 1]]


def test_half_operator_row1():
    h = half_operator(d3(0, -44, 0, -16, 0, -4))
    assert list(h.z_coeffs[2]) == [-16, 0, -44, 0, 1]
    assert list(h.z_coeffs[0]) == [-1, 0, mpq(1, 4)]


@settings(max_examples=20)
@given(d3_params(q=rationals(6, 3)), rationals(5, 4))
def test_symmetric_square_products(p, z0):
    if not sum(c * z0 ** i for i, c in enumerate(p.F())):
        return
    y1, y2 = local_solutions(half_operator(p), z0, 43)
    form = operator_form(p)
    for a, b in ((y1, y1), (y1, y2), (y2, y2)):
        res = apply_z(form, z0, a * b)
        assert res.order >= 40 and not any(res.c)


@settings(max_examples=20)
@given(d3_params())
def test_half_operator_square_is_phi0(p):
    h = half_operator(p)
    assert h.t_poly(0) == [0, 0, 1]
    phi_h, _ = frobenius(h, 16, p.ring)
    assert phi_h * phi_h == phi_series(p, N=16)


def test_local_solutions_singular_point():
    with pytest.raises(DnmodError):
        local_solutions(half_operator(d3(0, 0, 0, 0, 0, 0)), 0, 10)


# -- transforms ---------------------------------------------------------------

def test_shift_example():
    assert shift(d2(1, -24, 36, 0), -2) == d2(7, -8, 0, -2)


@given(d2_params())
def test_shift_zero_and_formula(p):
    assert shift(p, 0) == p
    e = mpq(3, 7)
    q = shift(p, e)
    assert q == d2(p.a2 - 3 * e, 3 * e * e - 2 * p.a2 * e + p.a1,
                   -e ** 3 + p.a2 * e * e - p.a1 * e + p.a0, p.b + e)


@given(st.one_of(d2_params(), d3_params()), rationals(8, 5), rationals(8, 5))
def test_shift_composition(p, e1, e2):
    assert shift(shift(p, e1), e2) == shift(p, e1 + e2)


@given(st.one_of(d2_params(), d3_params()), rationals(8, 5, nonzero=True), rationals(8, 5, nonzero=True))
def test_twist_composition(p, l1, l2):
    assert twist(twist(p, l1), l2) == twist(p, l1 * l2)
    assert twist(p, 1) == p


def test_twist_minus_one_even_row():
    p = d3(0, -44, 0, -16, 0, -4)
    assert twist(p, -1) == p


@settings(max_examples=15)
@given(d3_params(), rationals(5, 3, nonzero=True))
def test_twist_scales_phi0(p, lam):
    N = 12
    lhs = phi_series(twist(p, lam), N=N)
    rhs = phi_series(p, N=N).subs_scale(lam)
    assert lhs == rhs


# -- nondegeneracy ------------------------------------------------------------

def test_nondegenerate_examples():
    assert nondegenerate(d2(-1, -24, 36, 0))
    assert not nondegenerate(d2(1, 0, 0, 0))
    assert not nondegenerate(d3(0, 4, 0, 0, 0, 0))


# -- bridge ---------------------------------------------------------------

def test_bridge_examples():
    assert bridge_d2_to_d3(d2(-7, -8, 0, 2)) == d3(0, -28, 0, -128, 0, -4)
    assert bridge_d2_to_d3(d2(0, -16, 0, 0)) == d3(0, 0, 0, -256, 0, 0)
    assert bridge_d2_to_d3(d2(-12, 32, 0, 4)) == d3(0, -48, 0, 512, 0, -16)


def test_bridge_needs_a0_zero():
    with pytest.raises(DnmodError):
        bridge_d2_to_d3(d2(1, 2, 3, 4))


@settings(max_examples=20)
@given(rationals(12, 4), rationals(12, 4), rationals(12, 4))
def test_bridge_binomial_law(a2, a1, b):
    p = d2(a2, a1, 0, b)
    u = phi_series(p, N=15).c
    v = phi_series(bridge_d2_to_d3(p), N=30).c
    assert v == [comb(n, n // 2) * u[n // 2] if n % 2 == 0 else 0 for n in range(31)]
