"""Simple algebraic number fields Q[x]/(m(x)) for torsion computations.

Only what the group law needs: field arithmetic with inversion by the extended
Euclidean algorithm.  Factoring the defining polynomial over Q is delegated to
sympy.
"""
from __future__ import annotations

from functools import lru_cache

from gmpy2 import mpq

from . import upoly
from .errors import RingError
from .rings import Rat, _INT_TYPES, rat


class NumberField:
    def __init__(self, modulus: list):
        m = upoly.trim([rat(c) for c in modulus])
        if len(m) < 2:
            raise ValueError("defining polynomial must have degree >= 1")
        lead = m[-1]
        self.m = [c / lead for c in m]
        self.deg = len(self.m) - 1
        self.characteristic = 0
        self.zero = NFElem(self, [mpq(0)])
        self.one = NFElem(self, [mpq(1)])

    @property
    def gen(self) -> "NFElem":
        if self.deg == 1:
            return NFElem(self, [-self.m[0]])
        return NFElem(self, [mpq(0), mpq(1)])

    def __call__(self, x):
        if isinstance(x, NFElem):
            if x.K is not self and x.K != self:
                raise RingError("elements of different number fields")
            return x
        return NFElem(self, [rat(x)])

    def int_invertible(self, n: int) -> bool:
        return n != 0

    def __eq__(self, other):
        return isinstance(other, NumberField) and other.m == self.m

    def __hash__(self):
        return hash(("nf", tuple(self.m)))

    def __repr__(self):
        return f"Q[x]/({upoly.to_str(self.m, 'x')})"


def _reduce(p: list, m: list) -> list:
    p = upoly.trim(p)
    if len(p) < len(m):
        return p
    return upoly.divmod_field(p, m)[1]


class NFElem:
    __slots__ = ("K", "c")

    def __init__(self, K: NumberField, coeffs: list):
        self.K = K
        self.c = _reduce(coeffs, K.m)

    def _lift(self, other):
        if isinstance(other, NFElem):
            return other
        if isinstance(other, (*_INT_TYPES, Rat)):
            return NFElem(self.K, [mpq(other)])
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return NFElem(self.K, upoly.add(self.c, o.c))

    __radd__ = __add__

    def __neg__(self):
        return NFElem(self.K, upoly.neg(self.c))

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return NFElem(self.K, upoly.sub(self.c, o.c))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return NFElem(self.K, upoly.mul(self.c, o.c))

    __rmul__ = __mul__

    def inverse(self) -> "NFElem":
        # extended Euclid: s*a + t*m = g, g a nonzero constant for a field
        a, b = upoly.trim(self.c), list(self.K.m)
        s0, s1 = [mpq(1)], [mpq(0)]
        while upoly.degree(b) >= 0:
            q, r = upoly.divmod_field(a, b)
            a, b = b, r
            s0, s1 = s1, upoly.sub(s0, upoly.mul(q, s1))
        if upoly.degree(a) != 0:
            raise RingError("element is not invertible (defining polynomial not irreducible?)")
        return NFElem(self.K, upoly.scale(s0, 1 / a[0]))

    def __truediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        if not o:
            raise ZeroDivisionError("division by zero in a number field")
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out, base = self.K.one, self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        o = self._lift(other)
        return o is not None and upoly.trim(self.c) == upoly.trim(o.c)

    def __hash__(self):
        return hash(tuple(self.c))

    def __bool__(self):
        return any(self.c)

    def __repr__(self):
        return upoly.to_str(self.c, "x")


def factor_rational(poly: list) -> list[tuple[list, int]]:
    """Irreducible monic factors over Q with multiplicities (lowest degree first)."""
    return list(_factor_cached(tuple(rat(c) for c in poly)))


@lru_cache(maxsize=256)
def _factor_cached(coeffs: tuple):
    import sympy

    x = sympy.Symbol("x")
    expr = sum(sympy.Rational(int(c.numerator), int(c.denominator)) * x ** i for i, c in enumerate(coeffs))
    _, facs = sympy.factor_list(expr, x)
    out = []
    for f, e in facs:
        cs = [sympy.Rational(c) for c in reversed(sympy.Poly(f, x).all_coeffs())]
        lead = cs[-1]
        out.append(([mpq(int((c / lead).p), int((c / lead).q)) for c in cs], int(e)))
    out.sort(key=lambda fe: (len(fe[0]), fe[0]))
    return tuple(out)


def root_field(factor: list) -> tuple[NumberField, NFElem]:
    """Field generated by a root of an irreducible factor, and that root."""
    K = NumberField(factor)
    return K, K.gen
