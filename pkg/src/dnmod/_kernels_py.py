"""Pure-Python reference versions of the compiled kernels in ``_kernels.pyx``.

Signatures and results are identical; see :mod:`dnmod.kernels`.
"""
from __future__ import annotations

from array import array


def mul_mod(a, b, n, p):
    """Truncated product of residue lists modulo p."""
    out = [0] * (n + 1)
    bn = [(j, y) for j, y in enumerate(b[: n + 1]) if y]
    for i, x in enumerate(a[: n + 1]):
        if not x:
            continue
        lim = n - i
        for j, y in bn:
            if j > lim:
                break
            out[i + j] += x * y
    return [v % p for v in out]


def legendre_sum(coeffs, p):
    """sum over m in F_p of (f(m) / p), f given low degree first."""
    chi = [-1] * p
    chi[0] = 0
    for x in range(1, (p + 1) // 2):
        chi[x * x % p] = 1
    cs = [c % p for c in reversed(coeffs)]
    total = 0
    for m in range(p):
        v = 0
        for c in cs:
            v = (v * m + c) % p
        total += chi[v]
    return total


def zero_filter(cands, nvar, exps, coeffs, p):
    """Indices of candidate points (flat, nvar per point) where the polynomial vanishes mod p.

    ``exps`` is flat (nterms * nvar), ``coeffs`` holds one residue per term.
    """
    nterms = len(coeffs)
    maxdeg = max(exps) if len(exps) else 0
    terms = [tuple(exps[t * nvar : (t + 1) * nvar]) for t in range(nterms)]
    pw = [[pow(x, e, p) for e in range(maxdeg + 1)] for x in range(p)]
    keep = array("q")
    npts = len(cands) // nvar
    for k in range(npts):
        pt = cands[k * nvar : (k + 1) * nvar]
        rows = [pw[x] for x in pt]
        s = 0
        for t in range(nterms):
            m = coeffs[t]
            for r, e in zip(rows, terms[t]):
                if e:
                    m = m * r[e] % p
            s += m
        if s % p == 0:
            keep.append(k)
    return keep
