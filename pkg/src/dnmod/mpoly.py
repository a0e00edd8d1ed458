"""Sparse multivariate polynomials with rational coefficients.

Exponent vectors are packed into one Python int (16 bits per variable) so a
monomial product is a single integer addition.  Exponents must stay below
2**16; nothing here comes close.
"""
from __future__ import annotations

from functools import lru_cache, reduce
from math import gcd

from gmpy2 import mpq

from .errors import RingError
from .rings import Rat, _INT_TYPES, rat, rat_str

_BITS = 16
_MASK = (1 << _BITS) - 1


def _pack(exps) -> int:
    key = 0
    for i, e in enumerate(exps):
        key |= int(e) << (_BITS * i)
    return key


def _unpack(key: int, n: int) -> tuple[int, ...]:
    return tuple((key >> (_BITS * i)) & _MASK for i in range(n))


class PolynomialRing:
    characteristic = 0

    def __init__(self, variables):
        self.vars = tuple(variables)
        if len(set(self.vars)) != len(self.vars):
            raise ValueError(f"repeated variable in {self.vars}")
        self.index = {v: i for i, v in enumerate(self.vars)}
        self.name = "QQ[" + ",".join(self.vars) + "]"
        self.zero = MPoly(self, {})
        self.one = MPoly(self, {0: mpq(1)})

    def gen(self, name: str) -> "MPoly":
        return MPoly(self, {1 << (_BITS * self.index[name]): mpq(1)})

    def gens(self) -> tuple["MPoly", ...]:
        return tuple(self.gen(v) for v in self.vars)

    def __call__(self, x):
        if isinstance(x, MPoly):
            if x.ring != self:
                raise RingError(f"polynomial over {x.ring.name}, expected {self.name}")
            return x
        if isinstance(x, str) and x in self.index:
            return self.gen(x)
        c = rat(x)
        return MPoly(self, {0: c} if c else {})

    def from_terms(self, terms: dict) -> "MPoly":
        """``{exponent tuple: coefficient}`` to polynomial."""
        out = {}
        for exps, c in terms.items():
            if len(exps) != len(self.vars):
                raise ValueError("exponent vector arity does not match variables")
            c = rat(c)
            if c:
                k = _pack(exps)
                out[k] = out.get(k, 0) + c
        return MPoly(self, {k: v for k, v in out.items() if v})

    def int_invertible(self, n: int) -> bool:
        return n != 0

    def __eq__(self, other):
        return isinstance(other, PolynomialRing) and other.vars == self.vars

    def __hash__(self):
        return hash(("poly", self.vars))

    def __repr__(self):
        return self.name


@lru_cache(maxsize=None)
def poly_ring(*variables: str) -> PolynomialRing:
    return PolynomialRing(variables)


class MPoly:
    __slots__ = ("ring", "t")

    def __init__(self, ring: PolynomialRing, terms: dict):
        self.ring = ring
        self.t = terms

    def _coerce(self, other):
        if isinstance(other, MPoly):
            if other.ring != self.ring:
                raise RingError(f"ring mismatch: {self.ring.name} vs {other.ring.name}")
            return other
        if isinstance(other, (*_INT_TYPES, Rat)):
            c = mpq(other)
            return MPoly(self.ring, {0: c} if c else {})
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if len(o.t) > len(self.t):
            a, b = o.t, self.t
        else:
            a, b = self.t, o.t
        out = dict(a)
        for k, c in b.items():
            s = out.get(k)
            if s is None:
                out[k] = c
            else:
                s = s + c
                if s:
                    out[k] = s
                else:
                    del out[k]
        return MPoly(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return MPoly(self.ring, {k: -c for k, c in self.t.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, (*_INT_TYPES, Rat)):
            if not other:
                return MPoly(self.ring, {})
            return MPoly(self.ring, {k: c * other for k, c in self.t.items()})
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self.t, o.t
        if not a or not b:
            return MPoly(self.ring, {})
        if len(a) < len(b):
            a, b = b, a
        out: dict = {}
        get = out.get
        for kb, cb in b.items():
            for ka, ca in a.items():
                k = ka + kb
                s = get(k)
                out[k] = ca * cb if s is None else s + ca * cb
        return MPoly(self.ring, {k: v for k, v in out.items() if v})

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, MPoly):
            if other.is_constant():
                other = other.constant()
            else:
                raise RingError("polynomial division by a non-constant")
        c = rat(other)
        if c == 0:
            raise RingError("polynomial division by zero")
        inv = 1 / c
        return MPoly(self.ring, {k: v * inv for k, v in self.t.items()})

    def __pow__(self, n: int):
        if n < 0:
            raise RingError("negative power of a polynomial")
        out = self.ring.one
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        o = self._coerce(other) if not isinstance(other, MPoly) else other
        if o is None or o.ring != self.ring:
            return False
        return self.t == o.t

    def __hash__(self):
        return hash(frozenset(self.t.items()))

    def __bool__(self):
        return bool(self.t)

    # structure -----------------------------------------------------------
    def is_constant(self) -> bool:
        return not self.t or (len(self.t) == 1 and 0 in self.t)

    def constant(self) -> Rat:
        return self.t.get(0, mpq(0))

    def terms(self) -> dict[tuple[int, ...], Rat]:
        n = len(self.ring.vars)
        return {_unpack(k, n): c for k, c in self.t.items()}

    def sorted_terms(self) -> list[tuple[tuple[int, ...], Rat]]:
        """Terms in graded-lex order, highest first."""
        items = list(self.terms().items())
        items.sort(key=lambda kv: (sum(kv[0]), kv[0]), reverse=True)
        return items

    def degree(self, var: str | None = None) -> int:
        if not self.t:
            return -1
        if var is None:
            return max(sum(e) for e in self.terms())
        i = self.ring.index[var]
        return max((k >> (_BITS * i)) & _MASK for k in self.t)

    def weighted_degrees(self, weights: dict[str, int]) -> set[int]:
        w = [weights.get(v, 0) for v in self.ring.vars]
        return {sum(a * b for a, b in zip(e, w)) for e in self.terms()}

    def coeff_in(self, var: str, k: int) -> "MPoly":
        """Coefficient of ``var**k`` (still a polynomial in all variables, var absent)."""
        i = self.ring.index[var]
        sh = _BITS * i
        out = {}
        for key, c in self.t.items():
            if (key >> sh) & _MASK == k:
                out[key & ~(_MASK << sh)] = c
        return MPoly(self.ring, out)

    def denominator_lcm(self) -> int:
        return reduce(lambda a, b: a * b // gcd(a, b), (int(c.denominator) for c in self.t.values()), 1)

    def primitive_integer(self) -> "MPoly":
        """Scale to integer coefficients with content 1 (sign of leading term kept)."""
        if not self.t:
            return self
        d = self.denominator_lcm()
        ints = [int(c * d) for c in self.t.values()]
        g = reduce(gcd, (abs(x) for x in ints))
        return self * mpq(d, g)

    # evaluation ----------------------------------------------------------
    def __call__(self, point: dict | None = None, **kw):
        return mpoly_eval(self, {**(point or {}), **kw})

    def subs(self, values: dict) -> "MPoly":
        """Partial substitution of rational values; result stays in the same ring."""
        idx = {self.ring.index[v]: rat(x) for v, x in values.items()}
        n = len(self.ring.vars)
        out: dict = {}
        for key, c in self.t.items():
            e = list(_unpack(key, n))
            for i, x in idx.items():
                if e[i]:
                    c = c * x ** e[i]
                    e[i] = 0
            if c:
                k = _pack(e)
                s = out.get(k, 0) + c
                if s:
                    out[k] = s
                else:
                    out.pop(k, None)
        return MPoly(self.ring, out)

    def substitute(self, values: dict, target=None):
        """Substitute ring elements (e.g. other polynomials) for variables."""
        n = len(self.ring.vars)
        vals = [values.get(v) for v in self.ring.vars]
        if target is None:
            target = self.ring
        acc = target.zero
        cache: dict = {}
        for key, c in self.t.items():
            term = target.one * c
            for i, e in enumerate(_unpack(key, n)):
                if not e:
                    continue
                x = vals[i] if vals[i] is not None else self.ring.gen(self.ring.vars[i])
                pw = cache.get((i, e))
                if pw is None:
                    pw = cache[(i, e)] = x ** e
                term = term * pw
            acc = acc + term
        return acc

    def __repr__(self):
        if not self.t:
            return "0"
        parts = []
        for exps, c in self.sorted_terms():
            mono = "*".join(
                v if e == 1 else f"{v}^{e}" for v, e in zip(self.ring.vars, exps) if e
            )
            cs = rat_str(c)
            if mono:
                if c == 1:
                    s = mono
                elif c == -1:
                    s = "-" + mono
                else:
                    s = f"{cs}*{mono}"
            else:
                s = cs
            parts.append(s)
        return " + ".join(parts).replace("+ -", "- ")


def mpoly_eval(p: MPoly, point: dict):
    """Evaluate ``p`` at ``point`` (symbol -> ring element or exact number).

    Values may be rationals, :class:`FpElem`, :class:`QuadElem`, ... .  When any
    value is an ``FpElem`` the coefficients are reduced mod p; a coefficient
    denominator divisible by p raises :class:`RingError`.
    """
    n = len(p.ring.vars)
    missing = [v for v in p.ring.vars if v not in point and p.degree(v) > 0]
    if missing:
        raise ValueError(f"unbound variables: {missing}")
    vals = [point.get(v, 0) for v in p.ring.vars]
    vals = [rat(v) if isinstance(v, (str, int)) else v for v in vals]
    proto = next((v for v in vals if not isinstance(v, (Rat, *_INT_TYPES))), None)
    acc = proto * 0 if proto is not None else mpq(0)
    cache: dict = {}
    for key, c in p.t.items():
        term = c if proto is None else proto * 0 + c
        for i, e in enumerate(_unpack(key, n)):
            if e:
                pw = cache.get((i, e))
                if pw is None:
                    pw = cache[(i, e)] = vals[i] ** e
                term = term * pw
        acc = acc + term
    return acc
