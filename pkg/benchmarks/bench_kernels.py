"""Compiled kernels against the pure-Python fallback.

    python benchmarks/bench_kernels.py [--repeat 3] [--skip-hunt]
"""
import argparse
import random
import time
import timeit
from array import array

from dnmod import _kernels_py, hunt, kernels

try:
    from dnmod import _kernels
except ImportError:
    _kernels = None


def _cases(rng):
    p = 1_000_003
    a = [rng.randrange(p) for _ in range(400)]
    b = [rng.randrange(p) for _ in range(400)]
    quartic = [rng.randrange(10007) for _ in range(5)]
    nvar, q = 5, 13
    cands = array("q", (rng.randrange(q) for _ in range(nvar * 20000)))
    exps = array("q", (rng.randrange(4) for _ in range(nvar * 30)))
    coeffs = array("q", (rng.randrange(1, q) for _ in range(30)))
    return {
        "mul_mod 400x400 mod 1000003": lambda m: m.mul_mod(a, b, 399, p),
        "legendre_sum quartic p=10007": lambda m: m.legendre_sum(quartic, 10007),
        "zero_filter 20000 pts, 30 terms": lambda m: m.zero_filter(cands, nvar, exps, coeffs, q),
    }


def _hunt_time(mod, p=11):
    saved = kernels.zero_filter
    kernels.zero_filter = mod.zero_filter
    try:
        hunt._mod_relations(3, p)  # warm the symbolic relations cache
        t0 = time.perf_counter()
        n = len(hunt.fp_enumerate(3, p))
        return time.perf_counter() - t0, n
    finally:
        kernels.zero_filter = saved


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--skip-hunt", action="store_true")
    args = ap.parse_args()
    backends = [("python", _kernels_py)] + ([("compiled", _kernels)] if _kernels else [])
    print(f"active backend: {kernels.BACKEND}")
    rng = random.Random(0)
    for name, fn in _cases(rng).items():
        times = {b: min(timeit.repeat(lambda: fn(m), number=1, repeat=args.repeat)) for b, m in backends}
        same = len({repr(fn(m)) for _, m in backends}) == 1
        line = "  ".join(f"{b}={t * 1e3:8.2f} ms" for b, t in times.items())
        speed = f"  x{times['python'] / times['compiled']:.1f}" if "compiled" in times else ""
        print(f"{name:<34} {line}{speed}  {'agree' if same else 'DISAGREE'}")
    if not args.skip_hunt:
        res = {b: _hunt_time(m) for b, m in backends}
        line = "  ".join(f"{b}={t:6.2f} s ({n} pts)" for b, (t, n) in res.items())
        print(f"{'fp_enumerate D3 p=11':<34} {line}")


if __name__ == "__main__":
    main()
