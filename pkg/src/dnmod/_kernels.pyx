# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the loops in ``_kernels_py``; same signatures and results."""
from array import array

from . import _kernels_py

# moduli below 2^31 keep every product inside int64
SMALL = 1 << 31


def mul_mod(a, b, Py_ssize_t n, p):
    """Truncated product of residue lists modulo p."""
    if p >= SMALL:
        return _kernels_py.mul_mod(a, b, n, p)
    cdef long long pp = p
    cdef Py_ssize_t na = min(len(a), n + 1), nb = min(len(b), n + 1)
    cdef long long[:] av = array("q", [x % p for x in a[:na]])
    cdef long long[:] bv = array("q", [x % p for x in b[:nb]])
    cdef long long[:] out = array("q", bytes(8 * (n + 1)))
    cdef Py_ssize_t i, j, lim
    cdef long long x
    for i in range(na):
        x = av[i]
        if x == 0:
            continue
        lim = n - i
        if lim >= nb:
            lim = nb - 1
        for j in range(lim + 1):
            out[i + j] = (out[i + j] + x * bv[j]) % pp
    return list(out)


def legendre_sum(coeffs, p):
    """sum over m in F_p of (f(m) / p), f given low degree first."""
    if p >= SMALL:
        return _kernels_py.legendre_sum(coeffs, p)
    cdef long long pp = p
    cdef Py_ssize_t deg = len(coeffs) - 1, k
    cdef long long[:] cs = array("q", [c % p for c in reversed(coeffs)])
    cdef signed char[:] chi = array("b", bytes(p))
    cdef long long x, m, v, total = 0
    for m in range(p):
        chi[m] = -1
    chi[0] = 0
    for x in range(1, (pp + 1) // 2):
        chi[x * x % pp] = 1
    for m in range(pp):
        v = 0
        for k in range(deg + 1):
            v = (v * m + cs[k]) % pp
        total += chi[v]
    return int(total)


def zero_filter(cands, Py_ssize_t nvar, exps, coeffs, p):
    """Indices of candidate points (flat, nvar per point) where the polynomial vanishes mod p."""
    if p >= SMALL:
        return _kernels_py.zero_filter(cands, nvar, exps, coeffs, p)
    cdef long long pp = p
    cdef Py_ssize_t nterms = len(coeffs)
    cdef Py_ssize_t maxdeg = max(exps) if len(exps) else 0
    cdef Py_ssize_t width = maxdeg + 1
    cdef long long[:] cv = array("q", cands)
    cdef long long[:] ev = array("q", exps)
    cdef long long[:] kv = array("q", coeffs)
    cdef long long[:] pw = array("q", bytes(8 * p * width))
    cdef Py_ssize_t npts = len(cands) // nvar, k, t, v, e
    cdef long long x, s, mono
    for x in range(pp):
        pw[x * width] = 1
        for e in range(1, width):
            pw[x * width + e] = pw[x * width + e - 1] * x % pp
    keep = array("q")
    for k in range(npts):
        s = 0
        for t in range(nterms):
            mono = kv[t]
            for v in range(nvar):
                e = ev[t * nvar + v]
                if e:
                    mono = mono * pw[cv[k * nvar + v] * width + e] % pp
            s += mono
            if s >= pp:
                s -= pp
        if s == 0:
            keep.append(k)
    return keep
