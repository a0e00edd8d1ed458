"""Truncated univariate power series over an exact coefficient ring.

A :class:`PSeries` holds coefficients ``c[0..N]`` and means
``c0 + c1 t + ... + cN t^N + O(t^(N+1))``.  Binary operations truncate to the
smaller of the two orders.  Coefficients can live in any ring from
:mod:`dnmod.rings` or :mod:`dnmod.mpoly`.
"""
from __future__ import annotations

from typing import Callable, Iterable, Sequence

from . import kernels
from .errors import RingError, SeriesError
from .rings import QQ, PrimeField, RationalField

DEFAULT_ORDER = 256


class PSeries:
    __slots__ = ("ring", "c")

    def __init__(self, coeffs: Iterable, ring=QQ, order: int | None = None):
        cs = [ring(x) for x in coeffs]
        if order is not None:
            if order < 0:
                raise SeriesError("truncation order must be >= 0")
            cs = cs[: order + 1] + [ring.zero] * (order + 1 - len(cs))
        if not cs:
            raise SeriesError("a series needs at least the constant coefficient")
        self.ring = ring
        self.c = cs

    @classmethod
    def _raw(cls, coeffs: list, ring) -> "PSeries":
        s = object.__new__(cls)
        s.ring = ring
        s.c = coeffs
        return s

    @classmethod
    def zero(cls, order: int, ring=QQ) -> "PSeries":
        return cls._raw([ring.zero] * (order + 1), ring)

    @classmethod
    def one(cls, order: int, ring=QQ) -> "PSeries":
        return cls.monomial(0, order, ring)

    @classmethod
    def monomial(cls, k: int, order: int, ring=QQ, coeff=None) -> "PSeries":
        cs = [ring.zero] * (order + 1)
        if k <= order:
            cs[k] = ring.one if coeff is None else ring(coeff)
        return cls._raw(cs, ring)

    @classmethod
    def from_poly(cls, coeffs: Sequence, order: int, ring=QQ) -> "PSeries":
        return cls(coeffs, ring, order)

    @property
    def order(self) -> int:
        return len(self.c) - 1

    N = order

    def __len__(self):
        return len(self.c)

    def __getitem__(self, k):
        if isinstance(k, slice):
            return self.c[k]
        if k > self.order:
            raise SeriesError(f"coefficient t^{k} beyond truncation order {self.order}")
        return self.c[k]

    def __iter__(self):
        return iter(self.c)

    def valuation(self) -> int | None:
        for i, x in enumerate(self.c):
            if x:
                return i
        return None

    def truncate(self, order: int) -> "PSeries":
        if order > self.order:
            raise SeriesError(f"cannot extend a series known to O(t^{self.order + 1})")
        return PSeries._raw(self.c[: order + 1], self.ring)

    def _check(self, other: "PSeries"):
        if other.ring != self.ring:
            raise RingError(f"ring mismatch: {self.ring!r} vs {other.ring!r}")

    def _scalar(self, x):
        try:
            return self.ring(x)
        except (TypeError, ValueError):
            return None

    # arithmetic -----------------------------------------------------------
    def __add__(self, other):
        if isinstance(other, PSeries):
            self._check(other)
            n = min(self.order, other.order) + 1
            return PSeries._raw([a + b for a, b in zip(self.c[:n], other.c[:n])], self.ring)
        x = self._scalar(other)
        if x is None:
            return NotImplemented
        cs = list(self.c)
        cs[0] = cs[0] + x
        return PSeries._raw(cs, self.ring)

    __radd__ = __add__

    def __neg__(self):
        return PSeries._raw([-a for a in self.c], self.ring)

    def __sub__(self, other):
        if isinstance(other, PSeries):
            self._check(other)
            n = min(self.order, other.order) + 1
            return PSeries._raw([a - b for a, b in zip(self.c[:n], other.c[:n])], self.ring)
        x = self._scalar(other)
        if x is None:
            return NotImplemented
        return self + (-x)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, PSeries):
            self._check(other)
            return PSeries._raw(_mul(self.c, other.c, min(self.order, other.order), self.ring), self.ring)
        x = self._scalar(other)
        if x is None:
            return NotImplemented
        return PSeries._raw([a * x for a in self.c], self.ring)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, PSeries):
            self._check(other)
            return self * other.inverse(min(self.order, other.order))
        x = self._scalar(other)
        if x is None:
            return NotImplemented
        if not x:
            raise RingError("series division by a zero scalar")
        return PSeries._raw([a / x for a in self.c], self.ring)

    def __rtruediv__(self, other):
        x = self._scalar(other)
        if x is None:
            return NotImplemented
        return self.inverse() * x

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = PSeries.one(self.order, self.ring)
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def __eq__(self, other):
        if isinstance(other, PSeries):
            n = min(self.order, other.order) + 1
            return self.ring == other.ring and self.c[:n] == other.c[:n]
        return NotImplemented

    def __repr__(self):
        shown = self.c[:8]
        body = " + ".join(f"({x})*t^{i}" for i, x in enumerate(shown) if x) or "0"
        return f"PSeries[{self.ring!r}]({body} + O(t^{self.order + 1}))"

    # calculus ---------------------------------------------------------------
    def inverse(self, order: int | None = None) -> "PSeries":
        n = self.order if order is None else order
        a = self.c
        if not a[0]:
            raise SeriesError("division by a series with zero constant term")
        try:
            inv0 = self.ring.one / a[0]
        except (ZeroDivisionError, RingError) as exc:
            raise SeriesError("constant term is not invertible") from exc
        out = [inv0]
        nz = [(i, a[i]) for i in range(1, n + 1) if a[i]]
        zero = self.ring.zero
        for k in range(1, n + 1):
            s = zero
            for i, ai in nz:
                if i > k:
                    break
                s = s + ai * out[k - i]
            out.append(-s * inv0)
        return PSeries._raw(out, self.ring)

    def derivative(self) -> "PSeries":
        """d/dt; the result is one order shorter."""
        return PSeries._raw([self.c[k] * k for k in range(1, len(self.c))] or [self.ring.zero], self.ring)

    def theta(self) -> "PSeries":
        """t d/dt (keeps the order)."""
        return PSeries._raw([x * k for k, x in enumerate(self.c)], self.ring)

    def integral(self) -> "PSeries":
        """Antiderivative with zero constant term (one order longer)."""
        _require_int_division(self.ring, len(self.c))
        return PSeries._raw([self.ring.zero] + [x / (k + 1) for k, x in enumerate(self.c)], self.ring)

    def shift(self, k: int) -> "PSeries":
        """Multiply by t^k (k >= 0) keeping the same order, or divide by t^-k."""
        if k >= 0:
            return PSeries._raw(([self.ring.zero] * k + self.c)[: len(self.c)], self.ring)
        k = -k
        if any(self.c[:k]):
            raise SeriesError(f"series is not divisible by t^{k}")
        return PSeries._raw(self.c[k:], self.ring)

    def subs_scale(self, lam) -> "PSeries":
        """f(lam * t)."""
        lam = self.ring(lam)
        out, pw = [], self.ring.one
        for x in self.c:
            out.append(x * pw)
            pw = pw * lam
        return PSeries._raw(out, self.ring)

    def subs_power(self, k: int) -> "PSeries":
        """f(t^k), truncated at order k*N (all known coefficients kept)."""
        out = [self.ring.zero] * (self.order * k + 1)
        for i, x in enumerate(self.c):
            out[i * k] = x
        return PSeries._raw(out, self.ring)

    def map(self, fn: Callable, ring) -> "PSeries":
        return PSeries._raw([fn(x) for x in self.c], ring)

    def exp(self) -> "PSeries":
        return ps_exp_log(self, "exp")

    def log(self) -> "PSeries":
        return ps_exp_log(self, "log")

    def sqrt(self) -> "PSeries":
        return ps_sqrt(self)

    def compose(self, inner: "PSeries") -> "PSeries":
        return ps_compose(self, inner)

    def revert(self) -> "PSeries":
        return ps_revert(self)


def _mul(a: list, b: list, n: int, ring) -> list:
    if isinstance(ring, PrimeField):
        p = ring.p
        res = kernels.mul_mod([x.v for x in a[: n + 1]], [x.v for x in b[: n + 1]], n, p)
        return [_fp(v, p) for v in res]
    if isinstance(ring, RationalField):
        return _mul_qq(a, b, n)
    zero = ring.zero
    an = [(i, x) for i, x in enumerate(a[: n + 1]) if x]
    bn = [(i, x) for i, x in enumerate(b[: n + 1]) if x]
    if len(an) > len(bn):
        an, bn = bn, an
    out = [zero] * (n + 1)
    for i, x in an:
        for j, y in bn:
            k = i + j
            if k > n:
                break
            out[k] = out[k] + x * y
    return out


def _fp(v, p):
    from .rings import FpElem

    e = object.__new__(FpElem)
    e.v = v
    e.p = p
    return e


def _mul_qq(a: list, b: list, n: int) -> list:
    """Rational Cauchy product via Kronecker substitution on scaled integers."""
    from .kronecker import mul_rational

    return mul_rational(a[: n + 1], b[: n + 1], n)


def _require_int_division(ring, upto: int):
    ch = getattr(ring, "characteristic", 0)
    if ch and ch <= upto:
        raise RingError(
            f"series operation needs division by integers up to {upto}, not possible in {ring!r}"
        )


# top-level operations ---------------------------------------------------------

def ps_arith(a: PSeries, b: PSeries, kind: str) -> PSeries:
    if not isinstance(a, PSeries) or not isinstance(b, PSeries):
        raise TypeError("ps_arith expects two series")
    a._check(b)
    if kind == "add":
        return a + b
    if kind == "mul":
        return a * b
    if kind == "div":
        return a / b
    raise ValueError(f"unknown kind {kind!r}")


def ps_exp_log(a: PSeries, kind: str) -> PSeries:
    n = a.order
    ring = a.ring
    f = a.c
    if kind == "exp":
        if f[0]:
            raise SeriesError("exp needs a series with zero constant term")
        _require_int_division(ring, n)
        df = [(k, f[k] * k) for k in range(1, n + 1) if f[k]]
        e = [ring.one]
        for m in range(1, n + 1):
            s = ring.zero
            for k, kf in df:
                if k > m:
                    break
                s = s + kf * e[m - k]
            e.append(s / m)
        return PSeries._raw(e, ring)
    if kind == "log":
        if f[0] != ring.one:
            raise SeriesError("log needs a series with constant term 1")
        _require_int_division(ring, n)
        # t L' = t f' / f
        return PSeries._raw([ring.zero] + [x / k for k, x in enumerate((a.theta() / a).c) if k], ring)
    raise ValueError(f"unknown kind {kind!r}")


def ps_sqrt(a: PSeries) -> PSeries:
    ring = a.ring
    if a.c[0] != ring.one:
        raise SeriesError("sqrt needs a series with constant term 1")
    if not ring.int_invertible(2):
        raise RingError(f"2 is not invertible in {ring!r}")
    n = a.order
    s = [ring.one]
    for m in range(1, n + 1):
        acc = a.c[m]
        for k in range(1, (m + 1) // 2):
            acc = acc - 2 * s[k] * s[m - k]
        if m % 2 == 0:
            acc = acc - s[m // 2] * s[m // 2]
        s.append(acc / 2)
    return PSeries._raw(s, ring)


def ps_compose(outer: PSeries, inner: PSeries) -> PSeries:
    """outer(inner(t)), inner(0) = 0, truncated to min order."""
    outer._check(inner)
    if inner.c[0]:
        raise SeriesError("inner series must have zero constant term")
    n = min(outer.order, inner.order)
    ring = outer.ring
    inner = inner.truncate(n)
    v = inner.valuation()
    acc = PSeries.zero(n, ring)
    acc.c[0] = outer.c[0]
    if v is None:
        return acc
    power = inner
    k = 1
    while k <= n and k * v <= n:
        ck = outer.c[k]
        if ck:
            acc = acc + power * ck
        k += 1
        if k * v <= n:
            power = power * inner
    return acc


def ps_revert(a: PSeries) -> PSeries:
    """Compositional inverse by Newton iteration, doubling precision each step."""
    ring = a.ring
    if a.c[0]:
        raise SeriesError("reversion needs zero constant term")
    n = a.order
    if n < 1 or not a.c[1]:
        raise SeriesError("reversion needs an invertible linear coefficient")
    try:
        inv1 = ring.one / a.c[1]
    except (ZeroDivisionError, RingError) as exc:
        raise SeriesError("linear coefficient is not invertible") from exc
    da = a.derivative()
    g = PSeries._raw([ring.zero, inv1], ring)
    prec = 1
    while prec < n:
        old, prec = prec, min(2 * prec, n)
        g = PSeries._raw(g.c + [ring.zero] * (prec + 1 - len(g.c)), ring)
        err = ps_compose(a.truncate(prec), g)
        err.c[1] = err.c[1] - ring.one
        # err = O(t^(old+1)), so f'(g) is only needed to order prec-old-1
        m = prec - old - 1
        df_g = ps_compose(da.truncate(m), g.truncate(m))
        corr = PSeries._raw(err.c[old + 1 :], ring) / df_g
        g = g - PSeries._raw([ring.zero] * (old + 1) + corr.c, ring)
    return g.truncate(n)


def revert_lagrange(a: PSeries) -> PSeries:
    """Reference reversion: [q^k] g = (1/k) [t^(k-1)] (t/a(t))^k.  Cubic cost, for checking."""
    ring = a.ring
    n = a.order
    if a.c[0] or n < 1 or not a.c[1]:
        raise SeriesError("reversion needs a(0)=0 and invertible a'(0)")
    _require_int_division(ring, n)
    h = PSeries._raw(a.c[1:], ring).inverse()  # t/a(t), order n-1
    out = [ring.zero]
    power = PSeries.one(n - 1, ring)
    for k in range(1, n + 1):
        power = power * h
        out.append(power.c[k - 1] / k)
    return PSeries._raw(out, ring)
