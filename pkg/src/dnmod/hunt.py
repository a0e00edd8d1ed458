"""Multiplicativity relations c_mn = c_m c_n: exact verification and F_p search.

The search reduces the symbolic relations (cleared to primitive integer
polynomials) modulo p and filters the whole parameter grid relation by
relation.  Any p-integral rational solution reduces to a point of the grid
that survives every filter.
"""
from __future__ import annotations

from array import array
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import product
from math import gcd

from . import kernels
from .dnop import D2Params, D3Params
from .errors import CostGuardError, RingError
from .etaq import registry
from .mirror import c_series, c_series_symbolic
from .rings import is_prime, rat

FIRST8 = ((2, 3), (2, 5), (4, 3), (2, 7), (3, 5), (2, 9), (3, 7), (2, 11))

# search coordinates per order; the shift is normalized away with b = 0 / b1 = 0
SEARCH_VARS = {2: ("a2", "a1", "a0"), 3: ("a3", "a2", "a1", "a0", "b0")}
FIXED = {2: {"b": 0}, 3: {"b1": 0}}
PRIME_CAP = {2: 101, 3: 13}


@dataclass(frozen=True)
class Relation:
    m: int
    n: int
    poly: object = None

    def __post_init__(self):
        if gcd(self.m, self.n) != 1:
            raise ValueError(f"relation needs coprime indices, got ({self.m}, {self.n})")

    @property
    def mn(self) -> int:
        return self.m * self.n

    def residual(self, c: list):
        """c_mn - c_m c_n for a list indexed by n."""
        return c[self.mn] - c[self.m] * c[self.n]

    def __str__(self):
        return f"c{self.mn}=c{self.m}*c{self.n}"


def relation_pairs(stage="first8") -> list[tuple[int, int]]:
    if stage == "first8":
        return list(FIRST8)
    if isinstance(stage, int):
        nmax = stage
    elif isinstance(stage, str) and stage.startswith("extended"):
        nmax = int(stage.split(":")[1]) if ":" in stage else int(stage[len("extended(") : -1])
    else:
        raise ValueError(f"unknown stage {stage!r}")
    return [(m, n) for n in range(3, nmax + 1) for m in range(2, n) if m * n <= nmax and gcd(m, n) == 1]


def relation_set(order: int, stage="first8", symbolic: bool = False) -> list[Relation]:
    pairs = relation_pairs(stage)
    if not symbolic:
        return [Relation(m, n) for m, n in pairs]
    c = [None] + c_series_symbolic(order, max(m * n for m, n in pairs), FIXED[order])
    return [Relation(m, n, c[m * n] - c[m] * c[n]) for m, n in pairs]


@dataclass
class VerifyReport:
    params: object
    nmax: int
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def verify_params(params, nmax: int = 60) -> VerifyReport:
    """Exact check of every coprime relation with mn <= nmax."""
    c = c_series(params, nmax).c
    rep = VerifyReport(params, nmax)
    for rel in relation_set(params.order, nmax):
        r = rel.residual(c)
        if r:
            rep.failures.append((str(rel), r))
    return rep


# -- F_p enumeration ---------------------------------------------------------------

@dataclass(frozen=True)
class _ModRel:
    label: str
    exps: tuple
    coeffs: tuple


def _mod_relations(order: int, p: int, stage="first8") -> list[_ModRel]:
    out = []
    nv = len(SEARCH_VARS[order])
    for rel in relation_set(order, stage, symbolic=True):
        poly = rel.poly.primitive_integer()
        exps, coeffs = [], []
        for e, cf in poly.terms().items():
            r = int(cf.numerator) % p
            if r:
                exps.extend(e)
                coeffs.append(r)
        if not coeffs:
            # vanishes identically mod p (e.g. even D2 coefficients): no constraint
            continue
        assert len(exps) == nv * len(coeffs)
        out.append(_ModRel(str(rel), tuple(exps), tuple(coeffs)))
    return out


def _filter_chunk(args) -> list[tuple[int, ...]]:
    first, nvar, p, rels = args
    rest = nvar - 1
    cands = array("q")
    for tail in product(range(p), repeat=rest):
        cands.append(first)
        cands.extend(tail)
    for rel in rels:
        if not len(cands):
            break
        keep = kernels.zero_filter(cands, nvar, array("q", rel.exps), array("q", rel.coeffs), p)
        nxt = array("q")
        for k in keep:
            nxt.extend(cands[k * nvar : (k + 1) * nvar])
        cands = nxt
    return [tuple(cands[i : i + nvar]) for i in range(0, len(cands), nvar)]


def fp_enumerate(order: int, p: int, stage="first8", jobs: int = 1, relation_order=None) -> list[tuple[int, ...]]:
    """All F_p points (D2: (a2, a1, a0) with b = 0; D3: (a3, a2, a1, a0, b0) with b1 = 0)
    on which every relation of the stage vanishes, in lexicographic order."""
    if order not in SEARCH_VARS:
        raise ValueError("order must be 2 or 3")
    if p == 2 or not is_prime(p):
        raise ValueError(f"need an odd prime, got {p}")
    if p > PRIME_CAP[order]:
        raise CostGuardError(f"full enumeration for D{order} is capped at p <= {PRIME_CAP[order]}")
    rels = _mod_relations(order, p, stage)
    if relation_order is not None:
        rels = [rels[i] for i in relation_order]
    nvar = len(SEARCH_VARS[order])
    tasks = [(a, nvar, p, tuple(rels)) for a in range(p)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            chunks = list(ex.map(_filter_chunk, tasks))
    else:
        chunks = [_filter_chunk(t) for t in tasks]
    return sorted(pt for ch in chunks for pt in ch)


def reduce_tuple(vals, p: int) -> tuple[int, ...] | None:
    """Reduction mod p, or None when a denominator is divisible by p."""
    out = []
    for v in vals:
        v = rat(v)
        d = int(v.denominator)
        if d % p == 0:
            return None
        out.append(int(v.numerator) * pow(d, -1, p) % p)
    return tuple(out)


def search_tuple(params) -> tuple:
    if isinstance(params, D2Params):
        if params.b:
            raise RingError("search tuples use the b = 0 representative")
        return (params.a2, params.a1, params.a0)
    if isinstance(params, D3Params):
        if params.b1:
            raise RingError("search tuples use the b1 = 0 representative")
        return (params.a3, params.a2, params.a1, params.a0, params.b0)
    raise TypeError("expected D2Params or D3Params")


@dataclass
class MembershipReport:
    p: int
    members: list = field(default_factory=list)
    missing: list = field(default_factory=list)
    skipped: list = field(default_factory=list)
    extra: int = 0

    @property
    def ok(self) -> bool:
        return not self.missing


def known_tuples(order: int) -> dict:
    """Search tuples of the tabulated rational solutions, keyed by citation."""
    out = {}
    if order == 3:
        for t in ("d3_nondeg", "d3_degenerate", "d3_twist_families"):
            for r in registry(t):
                out[r.citation] = (*r.rats("a"), r.rat("b0"))
    else:
        for r in registry("d2_solutions"):
            if r.get("rational_instances"):
                for k, inst in enumerate(r["rational_instances"].split(";")):
                    out[f"{r.citation}.{k + 1}"] = tuple(rat(x) for x in inst.split(","))
            else:
                out[r.citation] = (r.rat("a2"), r.rat("a1"), r.rat("a0"))
    return out


def reduction_membership(tuples: dict, p: int, solutions) -> MembershipReport:
    """``tuples`` maps a label to a rational search tuple; checks each reduction is found."""
    sol = set(solutions)
    rep = MembershipReport(p)
    found = set()
    for label, vals in tuples.items():
        r = reduce_tuple(vals, p)
        if r is None:
            rep.skipped.append(label)
        elif r in sol:
            rep.members.append((label, r))
            found.add(r)
        else:
            rep.missing.append((label, r))
    rep.extra = len(sol - found)
    return rep


# -- lifting utilities -------------------------------------------------------------

def crt(residues, moduli) -> tuple[int, int]:
    x, M = 0, 1
    for r, m in zip(residues, moduli):
        if gcd(M, m) != 1:
            raise ValueError("moduli must be pairwise coprime")
        # x + M*k = r mod m
        k = (r - x) * pow(M, -1, m) % m
        x += M * k
        M *= m
    return x % M, M


def rational_reconstruct(a: int, m: int):
    """p/q with |p|, q <= sqrt(m/2) and p = a q mod m, or None."""
    from gmpy2 import isqrt, mpq

    bound = int(isqrt(m // 2))
    r0, r1 = m, a % m
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound or gcd(r1, abs(s1)) != 1:
        return None
    return mpq(r1, s1)
