"""Exact coefficient rings.

Every ring object exposes ``zero``, ``one``, coercion via call, and
``int_invertible(n)``.  Elements are ordinary Python objects with arithmetic
operators, so generic code (power series, recurrences, group law) can stay
ring-agnostic.

* ``QQ``                 -- rationals, backed by ``gmpy2.mpq``
* ``GF(p)``              -- prime fields, elements :class:`FpElem`
* ``QuadraticField(d)``  -- Q(sqrt d), elements :class:`QuadElem`
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
import re

import gmpy2
from gmpy2 import mpq, mpz

from .errors import RingError

Rat = type(mpq(0))
_INT_TYPES = (int, type(mpz(0)))


def rat(x) -> Rat:
    """Coerce ints, Fractions, mpq, and ``"p/q"`` strings to an exact rational."""
    if isinstance(x, Rat):
        return x
    if isinstance(x, _INT_TYPES):
        return mpq(x)
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    if isinstance(x, str):
        s = x.strip()
        if not re.fullmatch(r"[+-]?\d+(/\d+)?", s):
            raise ValueError(f"not an exact rational: {x!r}")
        return mpq(s)
    raise TypeError(f"cannot coerce {type(x).__name__} to a rational")


def rat_str(x) -> str:
    x = rat(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def is_prime(n: int) -> bool:
    return n >= 2 and bool(gmpy2.is_prime(n))


def primes_upto(n: int) -> list[int]:
    out = []
    p = 2
    while p <= n:
        out.append(p)
        p = int(gmpy2.next_prime(p))
    return out


class RationalField:
    name = "QQ"
    characteristic = 0

    def __init__(self):
        self.zero = mpq(0)
        self.one = mpq(1)

    def __call__(self, x):
        return rat(x)

    def int_invertible(self, n: int) -> bool:
        return n != 0

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")

    def __repr__(self):
        return "QQ"


QQ = RationalField()


class FpElem:
    """Residue class modulo an odd prime."""

    __slots__ = ("v", "p")

    def __init__(self, v, p: int):
        self.p = p
        self.v = int(v) % p

    def _lift(self, other):
        if isinstance(other, FpElem):
            if other.p != self.p:
                raise RingError(f"mixing F_{self.p} and F_{other.p}")
            return other.v
        if isinstance(other, _INT_TYPES):
            return int(other) % self.p
        if isinstance(other, Rat):
            return _rat_mod(other, self.p)
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return FpElem(self.v + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return FpElem(self.v - o, self.p)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return FpElem(o - self.v, self.p)

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return FpElem(self.v * o, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return FpElem(-self.v, self.p)

    def inverse(self) -> "FpElem":
        if self.v == 0:
            raise RingError(f"division by zero in F_{self.p}")
        return FpElem(pow(self.v, -1, self.p), self.p)

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        if o == 0:
            raise RingError(f"division by zero in F_{self.p}")
        return FpElem(self.v * pow(o, -1, self.p), self.p)

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return FpElem(o, self.p) / self

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return FpElem(pow(self.v, k, self.p), self.p)

    def __eq__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return False
        return self.v == o

    def __hash__(self):
        return hash((self.v, self.p))

    def __bool__(self):
        return self.v != 0

    def __int__(self):
        return self.v

    def __repr__(self):
        return f"{self.v} (mod {self.p})"


def _rat_mod(x: Rat, p: int) -> int:
    d = int(x.denominator)
    if d % p == 0:
        raise RingError(f"denominator {d} not invertible mod {p}")
    return int(x.numerator) * pow(d, -1, p) % p


class PrimeField:
    characteristic: int

    def __init__(self, p: int):
        if p == 2 or not is_prime(p):
            raise ValueError(f"GF needs an odd prime, got {p}")
        self.p = p
        self.characteristic = p
        self.name = f"GF({p})"
        self.zero = FpElem(0, p)
        self.one = FpElem(1, p)

    def __call__(self, x):
        if isinstance(x, FpElem):
            if x.p != self.p:
                raise RingError(f"mixing F_{self.p} and F_{x.p}")
            return x
        if isinstance(x, _INT_TYPES):
            return FpElem(x, self.p)
        if isinstance(x, (Rat, Fraction, str)):
            return FpElem(_rat_mod(rat(x), self.p), self.p)
        raise TypeError(f"cannot coerce {type(x).__name__} into {self.name}")

    def int_invertible(self, n: int) -> bool:
        return n % self.p != 0

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))

    def __repr__(self):
        return self.name


@lru_cache(maxsize=None)
def GF(p: int) -> PrimeField:
    return PrimeField(p)


class QuadElem:
    """``a + b*sqrt(d)`` with rational a, b and square-free d."""

    __slots__ = ("a", "b", "d")

    def __init__(self, a, b, d: int):
        self.a = rat(a)
        self.b = rat(b)
        self.d = d

    def _lift(self, other):
        if isinstance(other, QuadElem):
            if other.d != self.d:
                raise RingError(f"mixing Q(sqrt {self.d}) and Q(sqrt {other.d})")
            return other.a, other.b
        if isinstance(other, (*_INT_TYPES, Rat)):
            return mpq(other), mpq(0)
        if isinstance(other, Fraction):
            return rat(other), mpq(0)
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return QuadElem(self.a + o[0], self.b + o[1], self.d)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return QuadElem(self.a - o[0], self.b - o[1], self.d)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return QuadElem(o[0] - self.a, o[1] - self.b, self.d)

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        a, b = o
        if b == 0:
            return QuadElem(self.a * a, self.b * a, self.d)
        return QuadElem(self.a * a + self.d * self.b * b, self.a * b + self.b * a, self.d)

    __rmul__ = __mul__

    def __neg__(self):
        return QuadElem(-self.a, -self.b, self.d)

    def conjugate(self) -> "QuadElem":
        return QuadElem(self.a, -self.b, self.d)

    def norm(self) -> Rat:
        return self.a * self.a - self.d * self.b * self.b

    def inverse(self) -> "QuadElem":
        n = self.norm()
        if n == 0:
            raise RingError("division by zero in quadratic field")
        return QuadElem(self.a / n, -self.b / n, self.d)

    def __truediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        if o[1] == 0:
            if o[0] == 0:
                raise RingError("division by zero in quadratic field")
            return QuadElem(self.a / o[0], self.b / o[0], self.d)
        return self * QuadElem(o[0], o[1], self.d).inverse()

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return QuadElem(o[0], o[1], self.d) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = QuadElem(1, 0, self.d)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def is_rational(self) -> bool:
        return self.b == 0

    def __eq__(self, other):
        o = self._lift(other)
        if o is None:
            return False
        return self.a == o[0] and self.b == o[1]

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __repr__(self):
        if self.b == 0:
            return rat_str(self.a)
        sign = "+" if self.b > 0 else "-"
        return f"{rat_str(self.a)}{sign}{rat_str(abs(self.b))}*sqrt{self.d}"


class QuadraticField:
    characteristic = 0

    def __init__(self, d: int):
        if d in (0, 1) or gmpy2.is_square(abs(d)):
            raise ValueError(f"d={d} must be a non-square")
        self.d = d
        self.name = f"Q(sqrt {d})"
        self.zero = QuadElem(0, 0, d)
        self.one = QuadElem(1, 0, d)
        self.sqrt = QuadElem(0, 1, d)

    def __call__(self, x):
        if isinstance(x, QuadElem):
            if x.d != self.d:
                raise RingError(f"mixing {self.name} and Q(sqrt {x.d})")
            return x
        if isinstance(x, str) and "sqrt" in x:
            return parse_quad(x, self.d)
        return QuadElem(rat(x), 0, self.d)

    def int_invertible(self, n: int) -> bool:
        return n != 0

    def __eq__(self, other):
        return isinstance(other, QuadraticField) and other.d == self.d

    def __hash__(self):
        return hash(("Qsqrt", self.d))

    def __repr__(self):
        return self.name


_QUAD_RE = re.compile(
    r"\s*(?P<a>[+-]?\d+(?:/\d+)?)?\s*(?:(?P<sign>[+-])\s*(?P<b>\d+(?:/\d+)?)?\s*\*?\s*sqrt\s*(?P<d>\d+))?\s*"
)


def parse_quad(s: str, d: int | None = None) -> QuadElem:
    """Parse ``"22-30*sqrt5"``-style literals."""
    m = _QUAD_RE.fullmatch(s)
    if not m or (m.group("a") is None and m.group("d") is None):
        raise ValueError(f"not a quadratic literal: {s!r}")
    a = rat(m.group("a") or 0)
    if m.group("d") is None:
        if d is None:
            raise ValueError(f"no sqrt in {s!r} and no field given")
        return QuadElem(a, 0, d)
    dd = int(m.group("d"))
    if d is not None and dd != d:
        raise RingError(f"literal uses sqrt{dd}, field is sqrt{d}")
    b = rat(m.group("b") or 1)
    if m.group("sign") == "-":
        b = -b
    return QuadElem(a, b, dd)


def ring_of(x):
    """Best-effort ring detection for a single element."""
    if isinstance(x, FpElem):
        return GF(x.p)
    if isinstance(x, QuadElem):
        return QuadraticField(x.d)
    if isinstance(x, (*_INT_TYPES, Rat, Fraction)):
        return QQ
    r = getattr(x, "ring", None)
    if r is not None:
        return r
    raise TypeError(f"unknown coefficient type {type(x).__name__}")
