"""Mirror map q(t) = t exp(psi/phi0), its inverse, and the q-expansions c_n.

For D2 the expansion lives in Q = q^(1/2); every half-integral power is handled
by writing t = s^2 so all series stay ordinary power series in s.
"""
from __future__ import annotations

from functools import lru_cache

from .dnop import D2Params, D3Params, frobenius_basis
from .errors import CostGuardError
from .mpoly import poly_ring
from .series import PSeries

SYMBOLIC_NMAX = 30

D2_VARS = ("a2", "a1", "a0", "b")
D3_VARS = ("a3", "a2", "a1", "a0", "b1", "b0")


def _g(params, N: int):
    phi0, psi = frobenius_basis(params, N)
    return phi0, psi / phi0


def mirror_q(params, N: int) -> PSeries:
    """q(t) to order N."""
    _, g = _g(params, N - 1)
    return _times_t(g.exp())


def _times_t(f: PSeries) -> PSeries:
    """t * f, one order longer."""
    return PSeries._raw([f.ring.zero] + f.c, f.ring)


def t_of_q(params, N: int) -> PSeries:
    return mirror_q(params, N).revert()


def _ambient(params, order: int) -> PSeries:
    """1 + a_{top} t + ... : t^deg F(1/t) as a series in t."""
    F = params.F()
    return PSeries(list(reversed(F)), params.ring, order)


def c_series_d3(params: D3Params, N: int) -> PSeries:
    """Index n holds c_n (c_0 = 0): t phi0(t) evaluated at t = t(q)."""
    phi0, g = _g(params, N)
    tq = _times_t(g.truncate(N - 1).exp()).revert()
    return _times_t(phi0.truncate(N - 1)).compose(tq)


def c_series_d2(params: D2Params, N: int) -> PSeries:
    """Index n holds c_n, the coefficient of Q^n with Q = q^(1/2)."""
    ring = params.ring
    M = N // 2
    phi0, g = _g(params, M)
    # all functions of t re-expressed in s = t^(1/2), order N in s
    gs = g.subs_power(2)
    gs = PSeries._raw(gs.c[:N] + [ring.zero] * (N - len(gs.c)), ring)  # order N-1
    half = ring.one / 2
    Q = _times_t((gs * half).exp())
    s_of_Q = Q.revert()
    amb = _ambient(params, M).sqrt() * phi0 * phi0
    amb_s = amb.subs_power(2)
    amb_s = PSeries._raw(amb_s.c[:N] + [ring.zero] * (N - len(amb_s.c)), ring)
    return _times_t(amb_s).compose(s_of_Q)


def c_series_d2_q(params: D2Params, N: int) -> PSeries:
    """Same coefficients by an independent route in q: sum c_(2k+1) q^k = K(t(q)),
    K = exp(-g/2) sqrt(1 + a2 t + a1 t^2 + a0 t^3) phi0^2.  Index n holds c_n."""
    ring = params.ring
    M = N // 2
    phi0, g = _g(params, M)
    K = (g * (-ring.one / 2)).exp() * _ambient(params, M).sqrt() * phi0 * phi0
    tq = _times_t(g.truncate(M - 1).exp()).revert() if M >= 1 else PSeries.zero(0, ring)
    odd = K.compose(tq) if M >= 1 else K
    out = [ring.zero] * (N + 1)
    for k, x in enumerate(odd.c):
        if 2 * k + 1 <= N:
            out[2 * k + 1] = x
    return PSeries._raw(out, ring)


def c_series(params, N: int) -> PSeries:
    if isinstance(params, D2Params):
        return c_series_d2(params, N)
    return c_series_d3(params, N)


def c_list(params, N: int) -> list:
    """[c_1, ..., c_N]."""
    return c_series(params, N).c[1 : N + 1]


# -- symbolic ------------------------------------------------------------------

def symbolic_params(order: int, fixed: dict | None = None):
    """Params whose entries are generators of a polynomial ring; ``fixed`` pins
    some names to rational constants (those drop out of the ring)."""
    fixed = dict(fixed or {})
    names = D2_VARS if order == 2 else D3_VARS if order == 3 else None
    if names is None:
        raise ValueError("order must be 2 or 3")
    unknown = set(fixed) - set(names)
    if unknown:
        raise ValueError(f"unknown parameter names {sorted(unknown)}")
    ring = poly_ring(*(v for v in names if v not in fixed))
    vals = [ring(fixed[v]) if v in fixed else ring.gen(v) for v in names]
    cls = D2Params if order == 2 else D3Params
    return cls(*vals), ring


@lru_cache(maxsize=32)
def _symbolic(order: int, nmax: int, fixed_items: tuple):
    params, _ = symbolic_params(order, dict(fixed_items))
    return tuple(c_series(params, nmax).c[1:])


def c_series_symbolic(order: int, nmax: int, fixed: dict | None = None) -> list:
    """[c_1, ..., c_nmax] as polynomials in the parameter symbols."""
    if nmax > SYMBOLIC_NMAX:
        raise CostGuardError(f"symbolic c_n capped at nmax={SYMBOLIC_NMAX}, got {nmax}")
    return list(_symbolic(order, nmax, tuple(sorted((fixed or {}).items()))))


# -- Wronskian -----------------------------------------------------------------

def wronskian_residual(params, N: int) -> PSeries:
    """Zero series iff the normalized Wronskian identity holds to order N.

    D3: phi0 (1 + t g') - U^(-1/2), D2: U phi0^2 (1 + t g') - 1, where
    g = psi/phi0 and U(t) = t^deg F(1/t).
    """
    phi0, g = _g(params, N + 1)
    ring = params.ring
    core = phi0.truncate(N) * (PSeries.one(N, ring) + _times_t(g.derivative()).truncate(N))
    U = _ambient(params, N)
    if isinstance(params, D3Params):
        return core - U.sqrt().inverse()
    return U * phi0.truncate(N) * core - PSeries.one(N, ring)

