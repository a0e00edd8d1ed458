"""Dense univariate polynomials as coefficient lists, lowest degree first."""
from __future__ import annotations

from math import comb


def trim(p: list) -> list:
    p = list(p)
    while len(p) > 1 and not p[-1]:
        p.pop()
    return p


def add(p: list, q: list) -> list:
    n = max(len(p), len(q))
    zero = (p or q)[0] * 0
    return trim([(p[i] if i < len(p) else zero) + (q[i] if i < len(q) else zero) for i in range(n)])


def neg(p: list) -> list:
    return [-x for x in p]


def sub(p: list, q: list) -> list:
    return add(p, neg(q))


def scale(p: list, c) -> list:
    return trim([x * c for x in p])


def mul(p: list, q: list) -> list:
    zero = p[0] * 0
    out = [zero] * (len(p) + len(q) - 1)
    for i, x in enumerate(p):
        if x:
            for j, y in enumerate(q):
                out[i + j] = out[i + j] + x * y
    return trim(out)


def deriv(p: list, k: int = 1) -> list:
    for _ in range(k):
        p = [p[i] * i for i in range(1, len(p))] or [p[0] * 0]
    return p


def evaluate(p: list, x):
    acc = p[-1] * 1
    for c in reversed(p[:-1]):
        acc = acc * x + c
    return acc


def taylor_shift(p: list, a) -> list:
    """Coefficients of p(z + a)."""
    n = len(p)
    out = [p[0] * 0] * n
    for k, c in enumerate(p):
        if not c:
            continue
        pw = c * 1
        # c * (z + a)^k = sum_j C(k, j) a^(k-j) z^j
        apows = [1]
        for _ in range(k):
            apows.append(apows[-1] * a)
        for j in range(k + 1):
            out[j] = out[j] + pw * comb(k, j) * apows[k - j]
    return trim(out)


def degree(p: list) -> int:
    p = trim(p)
    return -1 if len(p) == 1 and not p[0] else len(p) - 1


def divmod_field(p: list, q: list) -> tuple[list, list]:
    """Division with remainder; coefficients must live in a field."""
    p = trim(p)
    q = trim(q)
    dq = degree(q)
    if dq < 0:
        raise ZeroDivisionError("polynomial division by zero")
    zero = q[0] * 0
    r = list(p)
    quo = [zero] * max(1, len(p) - dq)
    lead_inv = 1 / q[dq]
    for k in range(len(p) - 1, dq - 1, -1):
        c = r[k] * lead_inv
        if c:
            quo[k - dq] = c
            for j in range(dq + 1):
                r[k - dq + j] = r[k - dq + j] - c * q[j]
    return trim(quo), trim(r[:dq] if dq > 0 else [zero])


def resultant(p: list, q: list):
    """Resultant over a field by the Euclidean algorithm."""
    p, q = trim(p), trim(q)
    dp, dq = degree(p), degree(q)
    one = p[0] * 0 + 1
    if dp < 0 or dq < 0:
        return one * 0
    if dq == 0:
        return q[0] ** dp
    if dp == 0:
        return p[0] ** dq
    res = one
    while True:
        _, r = divmod_field(p, q)
        dr = degree(r)
        if dr < 0:
            return one * 0
        # res(p, q) = (-1)^(dp dq) lc(q)^(dp - dr) res(q, r)
        sign = -1 if (dp * dq) % 2 else 1
        res = res * sign * q[dq] ** (dp - dr)
        if dr == 0:
            return res * r[0] ** dq
        p, q, dp, dq = q, r, dq, dr


def discriminant(p: list):
    """disc(p) = (-1)^(n(n-1)/2) res(p, p') / lc(p)."""
    p = trim(p)
    n = degree(p)
    r = resultant(p, deriv(p))
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    return r * sign / p[n]


def to_str(p: list, var: str = "z") -> str:
    parts = []
    for k in range(len(p) - 1, -1, -1):
        c = p[k]
        if not c:
            continue
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        parts.append(f"({c})*{mono}" if mono else f"({c})")
    return " + ".join(parts) or "0"


def binomial_row(k: int) -> list[int]:
    return [comb(k, j) for j in range(k + 1)]
