"""Determinantal operators of orders 2 and 3.

Parameter tuples, their defining persymmetric matrices, the operator forms at
z = infinity and at t = 1/z = 0 (in terms of D = t d/dt), Frobenius solutions,
shifts and twists, and the map from Zagier-type D2 to D3.
"""
from __future__ import annotations

from dataclasses import astuple, dataclass, fields
from functools import lru_cache
from math import comb, factorial

from . import upoly
from .errors import DnmodError, RingError
from .rings import QQ, rat, ring_of
from .series import PSeries


@dataclass(frozen=True)
class D2Params:
    """F(z) = z^3 + a2 z^2 + a1 z + a0 and accessory parameter b (= beta)."""

    a2: object
    a1: object
    a0: object
    b: object

    order = 2
    names = ("a2", "a1", "a0", "b")

    def F(self) -> list:
        return [self.a0, self.a1, self.a2, self.ring.one]

    @property
    def ring(self):
        return ring_of(self.a2 + self.a1 + self.a0 + self.b)

    def astuple(self) -> tuple:
        return astuple(self)

    def zagier(self) -> tuple:
        """(A, B, lambda) with A = -a2, B = a1, lambda = b; needs a0 = 0."""
        if self.a0:
            raise DnmodError("Zagier form needs a0 = 0")
        return (-self.a2, self.a1, self.b)


@dataclass(frozen=True)
class D3Params:
    """F(z) = z^4 + a3 z^3 + a2 z^2 + a1 z + a0 and G(z) = z^2 + b1 z + b0."""

    a3: object
    a2: object
    a1: object
    a0: object
    b1: object
    b0: object

    order = 3
    names = ("a3", "a2", "a1", "a0", "b1", "b0")

    def F(self) -> list:
        return [self.a0, self.a1, self.a2, self.a3, self.ring.one]

    def G(self) -> list:
        return [self.b0, self.b1, self.ring.one]

    @property
    def ring(self):
        return ring_of(self.a3 + self.a2 + self.a1 + self.a0 + self.b1 + self.b0)

    def astuple(self) -> tuple:
        return astuple(self)


def d2(a2, a1, a0, b, ring=QQ) -> D2Params:
    return D2Params(ring(a2), ring(a1), ring(a0), ring(b))


def d3(a3, a2, a1, a0, b1, b0, ring=QQ) -> D3Params:
    return D3Params(*(ring(x) for x in (a3, a2, a1, a0, b1, b0)))


def from_zagier(A, B, lam, ring=QQ) -> D2Params:
    return d2(-rat(A), B, 0, lam, ring)


def parse_params(text: str, ring=QQ):
    """``"0,-44,0,-16,0,-4"`` -> D3Params, four entries -> D2Params."""
    vals = [ring(x.strip()) for x in text.split(",")]
    if len(vals) == 4:
        return D2Params(*vals)
    if len(vals) == 6:
        return D3Params(*vals)
    raise ValueError(f"expected 4 (D2) or 6 (D3) comma-separated values, got {len(vals)}")


def map_params(params, fn):
    return type(params)(*(fn(getattr(params, f.name)) for f in fields(params)))


def ring_params(params, ring):
    return map_params(params, ring)


# -- Weyl algebra -------------------------------------------------------------

class WeylOp:
    """Finite sum of c * z^i * d^k with the z-power written to the left."""

    __slots__ = ("t",)

    def __init__(self, terms: dict | None = None):
        self.t = {k: v for k, v in (terms or {}).items() if v}

    @classmethod
    def const(cls, c) -> "WeylOp":
        return cls({(0, 0): c})

    def __add__(self, other: "WeylOp") -> "WeylOp":
        out = dict(self.t)
        for k, v in other.t.items():
            out[k] = out[k] + v if k in out else v
        return WeylOp(out)

    def __neg__(self):
        return WeylOp({k: -v for k, v in self.t.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other: "WeylOp") -> "WeylOp":
        out: dict = {}
        for (a, b), x in self.t.items():
            for (c, d), y in other.t.items():
                # d^b z^c = sum_r C(b, r) c!/(c-r)! z^(c-r) d^(b-r)
                for r in range(min(b, c) + 1):
                    coef = comb(b, r) * (factorial(c) // factorial(c - r))
                    key = (a + c - r, b + d - r)
                    val = x * y * coef
                    out[key] = out[key] + val if key in out else val
        return WeylOp(out)

    def right_divide_d(self) -> "WeylOp":
        if any(k == 0 for (_, k) in self.t):
            raise DnmodError("operator is not right-divisible by d/dz")
        return WeylOp({(i, k - 1): v for (i, k), v in self.t.items()})

    def by_d_power(self, ring) -> list[list]:
        """Coefficient polynomial (in z) of each d^k."""
        if not self.t:
            return [[ring.zero]]
        kmax = max(k for _, k in self.t)
        imax = max(i for i, _ in self.t)
        out = [[ring.zero] * (imax + 1) for _ in range(kmax + 1)]
        for (i, k), v in self.t.items():
            out[k][i] = out[k][i] + v
        return [upoly.trim(p) for p in out]


def det_right(m: list[list[WeylOp]]) -> WeylOp:
    """Column-ordered determinant: every product runs left to right over columns,
    so the rightmost column always ends up rightmost."""
    n = len(m)
    if n == 1:
        return m[0][0]
    acc = WeylOp()
    for i in range(n):
        if not m[i][0].t:
            continue
        minor = [row[1:] for r, row in enumerate(m) if r != i]
        term = m[i][0] * det_right(minor)
        acc = acc + term if i % 2 == 0 else acc - term
    return acc


class DNMatrix:
    """(N+1)x(N+1) matrix: zero below the subdiagonal, ones on it, persymmetric above."""

    def __init__(self, entries: list[list], ring=QQ):
        self.ring = ring
        self.a = [[ring(x) for x in row] for row in entries]
        self.N = len(self.a) - 1
        self._validate()

    def _validate(self):
        N = self.N
        for i in range(N + 1):
            if len(self.a[i]) != N + 1:
                raise DnmodError("matrix must be square")
            for j in range(N + 1):
                x = self.a[i][j]
                if i - j > 1 and x:
                    raise DnmodError(f"a[{i}][{j}] must vanish below the subdiagonal")
                if i - j == 1 and x != self.ring.one:
                    raise DnmodError(f"a[{i}][{j}] must be 1 on the subdiagonal")
                if i - j < 1 and x != self.a[N - j][N - i]:
                    raise DnmodError(f"persymmetry fails: a[{i}][{j}] != a[{N - j}][{N - i}]")

    @classmethod
    def from_upper(cls, N: int, upper: dict, ring=QQ) -> "DNMatrix":
        """Build from entries a[i][j] with i <= j, filling the persymmetric partner."""
        a = [[ring.zero] * (N + 1) for _ in range(N + 1)]
        for i in range(1, N + 1):
            a[i][i - 1] = ring.one
        for (i, j), v in upper.items():
            a[i][j] = ring(v)
            a[N - j][N - i] = ring(v)
        return cls(a, ring)

    def __getitem__(self, ij):
        i, j = ij
        return self.a[i][j]

    def charpoly(self) -> list:
        """det(z - A), lowest degree first."""
        n = self.N + 1
        m = [[WeylOp({(1, 0): self.ring.one} if i == j else {}) - WeylOp.const(self.a[i][j]) for j in range(n)]
             for i in range(n)]
        return det_right(m).by_d_power(self.ring)[0]

    def operator_inf(self) -> list[list]:
        """det_right(delta_ij z d - a_ij d^(j-i+1)) d^(-1), as z-polynomials per d^k."""
        n = self.N + 1
        one = self.ring.one
        m = []
        for i in range(n):
            row = []
            for j in range(n):
                op = WeylOp({(1, 1): one}) if i == j else WeylOp()
                if j - i + 1 >= 0:
                    op = op - WeylOp({(0, j - i + 1): self.a[i][j]})
                row.append(op)
            m.append(row)
        return det_right(m).right_divide_d().by_d_power(self.ring)

    def shift(self, eps) -> "DNMatrix":
        eps = self.ring(eps)
        a = [[x + eps if i == j else x for j, x in enumerate(row)] for i, row in enumerate(self.a)]
        return DNMatrix(a, self.ring)

    def twist(self, lam) -> "DNMatrix":
        lam = self.ring(lam)
        a = [[x * lam ** (j - i + 1) if j - i + 1 >= 0 else x for j, x in enumerate(row)]
             for i, row in enumerate(self.a)]
        return DNMatrix(a, self.ring)


def matrix_from_d2(p: D2Params) -> DNMatrix:
    b, a2, a1, a0 = p.b, p.a2, p.a1, p.a0
    a00 = b
    a11 = -2 * b - a2
    a01 = -rat("3/2") * b * b - b * a2 - a1 / 2
    a02 = -b ** 3 - b * b * a2 - b * a1 - a0
    return DNMatrix.from_upper(2, {(0, 0): a00, (1, 1): a11, (0, 1): a01, (0, 2): a02}, p.ring)


def matrix_from_d3(p: D3Params) -> DNMatrix:
    a00 = -p.b1 / 2
    a11 = -p.a3 / 2 - a00
    a01 = (6 * a00 * a11 + a00 * a00 - p.a2 - p.b0) / 4
    a12 = 4 * a00 * a11 + a00 * a00 + a11 * a11 - 2 * a01 - p.a2
    a02 = (-p.a1 - 2 * a11 * a00 * a00 + 2 * a00 * (a01 - a11 * a11 + a12) + 2 * a11 * a01) / 2
    a03 = 2 * a00 * a02 + (a11 * a11 - a12) * a00 * a00 - 2 * a11 * a01 * a00 + a01 * a01 - p.a0
    up = {(0, 0): a00, (1, 1): a11, (0, 1): a01, (1, 2): a12, (0, 2): a02, (0, 3): a03}
    return DNMatrix.from_upper(3, up, p.ring)


def params_from_matrix(m: DNMatrix):
    F = m.charpoly()
    a = m.a
    if m.N == 2:
        return D2Params(F[2], F[1], F[0], a[0][0])
    if m.N == 3:
        b1 = -2 * a[0][0]
        b0 = 2 * a[0][0] * a[1][1] - a[1][1] ** 2 - 2 * a[0][1] + a[1][2]
        return D3Params(F[3], F[2], F[1], F[0], b1, b0)
    raise DnmodError("only N = 2, 3 are supported")


# -- operator forms -------------------------------------------------------------

@dataclass(frozen=True)
class OperatorForm:
    """z_coeffs[k]: z-polynomial multiplying (d/dz)^k at infinity;
    t_coeffs[j]: D-polynomial P_j with L = sum_j t^j P_j(D) at t = 0."""

    order: int
    z_coeffs: tuple
    t_coeffs: tuple

    def t_poly(self, j: int) -> list:
        return list(self.t_coeffs[j]) if j < len(self.t_coeffs) else [0]


def _rising_shifted(k: int, ring, e=1) -> list:
    """(D+e)(D+e+1)...(D+e+k-1) as a D-polynomial."""
    p = [ring.one]
    for m in range(k):
        p = upoly.mul(p, [ring.one * e + m, ring.one])
    return p


def z_to_t(z_coeffs: list[list], N: int, ring, exponent=1) -> list[list]:
    """(-1)^N t^(s-e) L applied to y = t^e phi, rewritten as sum_j t^j P_j(D) phi.

    Uses d/dz = -t D and (tD)^k t^e = t^(k+e) (D+e)...(D+e+k-1); s is the
    smallest shift making every t-power non-negative (1 for D2 and D3).
    """
    s = max(len(upoly.trim(list(fk))) - 1 - k for k, fk in enumerate(z_coeffs))
    out: dict[int, list] = {}
    for k, fk in enumerate(z_coeffs):
        rk = _rising_shifted(k, ring, exponent)
        for i, c in enumerate(fk):
            if not c:
                continue
            j = k + s - i
            sign = -1 if (N + k) % 2 else 1
            term = upoly.scale(rk, c * sign)
            out[j] = upoly.add(out[j], term) if j in out else term
    J = max(out) if out else 0
    return [upoly.trim(out.get(j, [ring.zero])) for j in range(J + 1)]


def _zform(params) -> list[list]:
    ring = params.ring
    F = params.F()
    dF = upoly.deriv(F)
    if isinstance(params, D2Params):
        return [[-params.b, ring.one], dF, F]
    G = params.G()
    half = ring.one / 2
    c1 = upoly.add(upoly.scale(upoly.deriv(F, 2), half), G)
    return [upoly.scale(upoly.deriv(G), half), c1, upoly.scale(dF, 3 * half), F]


def _form_from_z(zc: list[list], N: int, ring, exponent=1) -> OperatorForm:
    tc = z_to_t(zc, N, ring, exponent)
    return OperatorForm(N, tuple(tuple(p) for p in zc), tuple(tuple(p) for p in tc))


def operator_form(params) -> OperatorForm:
    return _operator_form(params, params.ring)


@lru_cache(maxsize=4096)
def _operator_form(params, ring) -> OperatorForm:
    # the ring is part of the key: FpElem(1) == 1 must not alias QQ entries
    return _form_from_z(_zform(params), params.order, ring)


def half_operator(params: D3Params) -> OperatorForm:
    """F d^2 + F'/2 d + G/4, whose symmetric square is the D3 operator.

    Its solutions at infinity are z^(-1/2) times series in t, so the t-side
    form acts on phi with y = t^(1/2) phi."""
    ring = params.ring
    F = params.F()
    zc = [upoly.scale(params.G(), ring.one / 4), upoly.scale(upoly.deriv(F), ring.one / 2), F]
    return _form_from_z(zc, 2, ring, ring.one / 2)


def _eval_int(p, n: int):
    acc = p[-1] * 1
    for c in reversed(p[:-1]):
        acc = acc * n + c
    return acc


def frobenius(form: OperatorForm, N: int, ring, log_part: bool = True):
    """Analytic solution phi0 (phi0(0) = 1) and psi with phi1 = log(t) phi0 + psi.

    Coefficients come from extracting t^n in L(sum a_n t^(n+rho)) and
    differentiating in rho at rho = 0.
    """
    P = [list(p) for p in form.t_coeffs]
    r = form.order
    p0 = upoly.trim(P[0])
    if len(p0) != r + 1 or any(p0[:r]) or p0[r] != 1:
        raise DnmodError("t = 0 is not a point of maximal unipotent monodromy (P_0 != D^N)")
    dP = [upoly.deriv(p) for p in P]
    J = len(P) - 1
    one, zero = ring.one, ring.zero
    a = [one]
    b = [zero]
    for n in range(1, N + 1):
        if not ring.int_invertible(n):
            raise RingError(f"Frobenius recurrence divides by {n}^{r}, not invertible in {ring!r}")
        s = zero
        sb = zero
        for j in range(1, min(J, n) + 1):
            pj = P[j]
            if len(pj) == 1 and not pj[0]:
                continue
            m = n - j
            v = _eval_int(pj, m)
            s = s + v * a[m]
            if log_part:
                sb = sb + _eval_int(dP[j], m) * a[m] + v * b[m]
        nr = n ** r
        an = -s / nr
        a.append(an)
        if log_part:
            b.append(-(sb + an * (r * n ** (r - 1))) / nr)
    phi0 = PSeries._raw(a, ring)
    psi = PSeries._raw(b, ring) if log_part else None
    return phi0, psi


@lru_cache(maxsize=1024)
def _frob_cached(params, ring, N: int):
    return frobenius(operator_form(params), N, params.ring)


def phi_series(params, which: str = "analytic", N: int = 32) -> PSeries:
    phi0, psi = _frob_cached(params, params.ring, N)
    if which == "analytic":
        return phi0
    if which == "log_part":
        return psi
    raise ValueError(f"which must be 'analytic' or 'log_part', got {which!r}")


def frobenius_basis(params, N: int):
    return _frob_cached(params, params.ring, N)


def apply_t(form: OperatorForm, f: PSeries, derived: bool = False) -> PSeries:
    """sum_j t^j P_j(theta) f (or with P_j' when ``derived``)."""
    ring = f.ring
    n = f.order
    out = [ring.zero] * (n + 1)
    for j, pj in enumerate(form.t_coeffs):
        pj = upoly.deriv(list(pj)) if derived else list(pj)
        if len(pj) == 1 and not pj[0]:
            continue
        for k in range(n + 1 - j):
            if f.c[k]:
                out[k + j] = out[k + j] + _eval_int(pj, k) * f.c[k]
    return PSeries._raw(out, ring)


def apply_t_log(form: OperatorForm, phi0: PSeries, psi: PSeries) -> tuple[PSeries, PSeries]:
    """L(log t * phi0 + psi) as (coefficient of log t, log-free part)."""
    return apply_t(form, phi0), apply_t(form, phi0, derived=True) + apply_t(form, psi)


def _poly_series(p: list, z0, order: int, ring) -> PSeries:
    return PSeries(upoly.taylor_shift([ring(c) for c in p], ring(z0)), ring, order)


def apply_z(form: OperatorForm, z0, y: PSeries) -> PSeries:
    """Apply the z-form to a series in h = z - z0; the result has order y.order - N."""
    ring = y.ring
    N = form.order
    n = y.order - N
    acc = PSeries.zero(n, ring)
    dy = y
    for k, ak in enumerate(form.z_coeffs):
        acc = acc + _poly_series(list(ak), z0, n, ring) * dy.truncate(n)
        if k < N:
            dy = dy.derivative()
    return acc


def local_solutions(form: OperatorForm, z0, order: int, ring=QQ) -> list[PSeries]:
    """Basis y_i, y_i^(k)(z0) = delta_ik, at an ordinary point z0."""
    N = form.order
    A = [_poly_series(list(ak), z0, order, ring) for ak in form.z_coeffs]
    lead = A[N].c[0]
    if not lead:
        raise DnmodError("z0 is a singular point")
    basis = []
    for i in range(N):
        y = [ring.zero] * (order + 1)
        y[i] = ring.one / factorial(i)
        for m in range(0, order + 1 - N):
            s = ring.zero
            for k in range(N + 1):
                Ak = A[k].c
                for rr in range(m + 1):
                    if not Ak[rr]:
                        continue
                    idx = m - rr + k
                    if k == N and rr == 0:
                        continue
                    s = s + Ak[rr] * y[idx] * (factorial(idx) // factorial(m - rr))
            y[m + N] = -s / (lead * (factorial(m + N) // factorial(m)))
        basis.append(PSeries._raw(y, ring))
    return basis


# -- transforms -----------------------------------------------------------------

def shift(params, eps):
    """Parameters after A -> A + eps, i.e. z -> z - eps."""
    ring = params.ring
    eps = ring(eps)
    F = upoly.taylor_shift(params.F(), -eps)
    F = F + [ring.zero] * (params.order + 2 - len(F))
    if isinstance(params, D2Params):
        return D2Params(F[2], F[1], F[0], params.b + eps)
    G = upoly.taylor_shift(params.G(), -eps)
    return D3Params(F[3], F[2], F[1], F[0], G[1], G[0])


def twist(params, lam):
    """Parameters after a_ij -> lam^(j-i+1) a_ij, i.e. t -> lam t."""
    lam = params.ring(lam)
    if isinstance(params, D2Params):
        return D2Params(lam * params.a2, lam ** 2 * params.a1, lam ** 3 * params.a0, lam * params.b)
    return D3Params(lam * params.a3, lam ** 2 * params.a2, lam ** 3 * params.a1, lam ** 4 * params.a0,
                    lam * params.b1, lam ** 2 * params.b0)


def discriminant(params):
    return upoly.discriminant(params.F())


def nondegenerate(params) -> bool:
    return bool(discriminant(params))


def bridge_d2_to_d3(p: D2Params) -> D3Params:
    """(a2, a1, 0; b) -> (0, 4 a2, 0, 16 a1; 0, -16 b - 4 a2)."""
    if p.a0:
        raise DnmodError("bridge needs a D2 with a0 = 0")
    z = p.ring.zero
    return D3Params(z, 4 * p.a2, z, 16 * p.a1, z, -16 * p.b - 4 * p.a2)
