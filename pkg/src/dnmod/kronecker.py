"""Truncated products of rational coefficient lists by Kronecker substitution.

Both operands are scaled to integers, packed into one big integer with a
fixed digit width, multiplied once with GMP, and unpacked.  Digits are offset
by half the digit range so signed coefficients never borrow across digits.
"""
from __future__ import annotations

from functools import reduce
from math import gcd

from gmpy2 import mpq, mpz


def _lcm_den(xs) -> int:
    return reduce(lambda a, b: a // gcd(a, b) * b, (int(x.denominator) for x in xs), 1)


def _pack(ints: list[int], width: int) -> int:
    off = 1 << (8 * width - 1)
    raw = b"".join((x + off).to_bytes(width, "little") for x in ints)
    bias = int.from_bytes(off.to_bytes(width, "little") * len(ints), "little")
    return int.from_bytes(raw, "little") - bias


def mul_rational(a: list, b: list, n: int) -> list:
    """First ``n+1`` coefficients of the product of two mpq lists."""
    a = a[: n + 1]
    b = b[: n + 1]
    # strip trailing zeros; they cost digits for nothing
    while a and not a[-1]:
        a = a[:-1]
    while b and not b[-1]:
        b = b[:-1]
    zero = mpq(0)
    if not a or not b:
        return [zero] * (n + 1)
    va = next(i for i, x in enumerate(a) if x)
    vb = next(i for i, x in enumerate(b) if x)
    if va + vb > n:
        return [zero] * (n + 1)
    a = a[va : n + 1 - vb]
    b = b[vb : n + 1 - va]
    m = n - va - vb  # highest product index still needed
    if len(a) * len(b) <= 64:
        out = [zero] * (n + 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b[: m - i + 1]):
                    out[va + vb + i + j] += x * y
        return out
    da = _lcm_den(a)
    db = _lcm_den(b)
    ai = [int(x * da) for x in a]
    bi = [int(x * db) for x in b]
    ma = max(abs(x) for x in ai)
    mb = max(abs(x) for x in bi)
    bound = min(len(a), len(b)) * ma * mb
    width = (bound.bit_length() + 2 + 7) // 8
    pa = mpz(_pack(ai, width))
    pb = mpz(_pack(bi, width))
    prod = int(pa * pb)
    total = len(a) + len(b) - 1
    digits = min(m + 1, total)
    off = 1 << (8 * width - 1)
    bias = int.from_bytes(off.to_bytes(width, "little") * total, "little")
    raw = (prod + bias).to_bytes(width * total + 1, "little")
    den = da * db
    out = [zero] * (va + vb)
    for k in range(digits):
        c = int.from_bytes(raw[k * width : (k + 1) * width], "little") - off
        out.append(mpq(c, den) if c else zero)
    out.extend([zero] * (n + 1 - len(out)))
    return out
