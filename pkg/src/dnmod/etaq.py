"""Eta quotients, the mod-5 Legendre product, closed-form q-series, and the table registry."""
from __future__ import annotations

import os
import re
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

from gmpy2 import mpq

from .errors import RegistryError, SeriesError
from .rings import QQ, parse_quad, rat
from .series import PSeries


@lru_cache(maxsize=16)
def _euler(N: int) -> tuple:
    c = [0] * (N + 1)
    # pentagonal numbers k(3k-1)/2 for k = 0, 1, -1, 2, -2, ...
    k = 0
    while True:
        hit = False
        for kk in ((k,) if k == 0 else (k, -k)):
            g = kk * (3 * kk - 1) // 2
            if g <= N:
                c[g] += -1 if kk % 2 else 1
                hit = True
        if not hit:
            break
        k += 1
    return tuple(c)


def euler_product(N: int) -> PSeries:
    """prod_{n>=1} (1 - q^n) to order N (pentagonal number theorem)."""
    return PSeries(_euler(N), QQ)


@dataclass(frozen=True)
class EtaQuotient:
    """prod eta(m tau)^e as a tuple of (m, e)."""

    factors: tuple

    @classmethod
    def parse(cls, text: str) -> "EtaQuotient":
        """``1^3*6^9/2^3*3^9``: tokens ``m`` or ``m^e``; everything after ``/`` is in the denominator."""
        s = text.replace(" ", "")
        num, _, den = s.partition("/")
        facs: dict[int, int] = {}
        for part, sign in ((num, 1), (den, -1)):
            if not part:
                continue
            for tok in part.split("*"):
                m = re.fullmatch(r"(\d+)(?:\^(-?\d+))?", tok)
                if not m:
                    raise ValueError(f"bad eta token {tok!r} in {text!r}")
                mm = int(m.group(1))
                e = int(m.group(2) or 1)
                facs[mm] = facs.get(mm, 0) + sign * e
        return cls(tuple(sorted((m, e) for m, e in facs.items() if e)))

    @property
    def offset(self):
        return mpq(sum(m * e for m, e in self.factors), 24)

    @property
    def weight(self):
        return mpq(sum(e for _, e in self.factors), 2)

    def __mul__(self, other: "EtaQuotient") -> "EtaQuotient":
        facs: dict[int, int] = dict(self.factors)
        for m, e in other.factors:
            facs[m] = facs.get(m, 0) + e
        return EtaQuotient(tuple(sorted((m, e) for m, e in facs.items() if e)))

    def __str__(self):
        num = "*".join(f"{m}^{e}" if e != 1 else str(m) for m, e in self.factors if e > 0)
        den = "*".join(f"{m}^{-e}" if e != -1 else str(m) for m, e in self.factors if e < 0)
        return (num or "1") + (f"/{den}" if den else "")


def etaq_series(eq: EtaQuotient | str, N: int) -> PSeries:
    if isinstance(eq, str):
        eq = EtaQuotient.parse(eq)
    off = eq.offset
    if off.denominator != 1 or off < 0:
        raise SeriesError(f"eta quotient {eq} has offset {off}, not a non-negative integer")
    off = int(off)
    if off > N:
        return PSeries.zero(N, QQ)
    M = N - off
    E = euler_product(M)
    acc = PSeries.one(M, QQ)
    for m, e in eq.factors:
        Em = E.truncate(M // m).subs_power(m)
        Em = PSeries._raw(Em.c + [QQ.zero] * (M + 1 - len(Em.c)), QQ) if len(Em.c) < M + 1 else Em.truncate(M)
        # E(q^m) is only known to order m*(M//m); the pad above is exact because
        # the next unknown coefficient sits at m*(M//m + 1) > M
        acc = acc * (Em ** e if e > 0 else Em.inverse() ** (-e))
    return PSeries._raw([QQ.zero] * off + acc.c, QQ)


def _legendre5(n: int) -> int:
    r = n % 5
    return 0 if r == 0 else (1 if r in (1, 4) else -1)


def legendre_eta(N: int) -> PSeries:
    """q prod (1 - q^n)^(5 (n/5)) to order N."""
    M = max(N - 1, 0)
    # log prod (1-q^n)^(a_n) = -sum_M q^M sum_{n | M} a_n n / M
    lg = [QQ.zero] * (M + 1)
    for n in range(1, M + 1):
        a = 5 * _legendre5(n)
        if a:
            for mult in range(n, M + 1, n):
                lg[mult] -= mpq(a * n, mult)
    body = PSeries._raw(lg, QQ).exp()
    return PSeries._raw([QQ.zero] + body.c, QQ)


CLOSED_FORMS = ("q", "q_over_1mq2", "q_over_1mq", "q_over_1pqpq2", "q_over_1mq_sq")


def closed_form_series(name: str, N: int) -> PSeries:
    num = PSeries.monomial(1, N, QQ)
    if name == "q":
        return num
    den = {
        "q_over_1mq2": [1, 0, -1],
        "q_over_1mq": [1, -1],
        "q_over_1pqpq2": [1, 1, 1],
        "q_over_1mq_sq": [1, -2, 1],
    }.get(name)
    if den is None:
        raise ValueError(f"unknown closed form {name!r}; expected one of {CLOSED_FORMS}")
    return num / PSeries(den, QQ, N)


def form_series(form: str, N: int, t_series: PSeries | None = None) -> PSeries:
    """Expand a registry form: eta quotient, ``closed:<name>``, ``legendre5`` or
    ``sqrt_over_t:<eta>`` (the square root of eta/t, which needs ``t_series``)."""
    if form.startswith("closed:"):
        return closed_form_series(form[7:], N)
    if form == "legendre5":
        return legendre_eta(N)
    if form.startswith("sqrt_over_t:"):
        if t_series is None or t_series.order < N + 1:
            raise ValueError(f"sqrt_over_t forms need the t series to order {N + 1}")
        g = etaq_series(form[12:], N + 1)
        ratio = PSeries._raw(g.c[1:], QQ) / PSeries._raw(t_series.truncate(N + 1).c[1:], QQ)
        return ratio.sqrt()
    return etaq_series(form, N)


# -- registry --------------------------------------------------------------------

TABLE_IDS = ("zagier_d2", "d2_solutions", "d3_nondeg", "d3_twist_families", "d3_sqrt5", "d3_degenerate", "bridge")

_DEFAULT_REGISTRY = Path(__file__).with_name("data") / "registry.txt"


@dataclass(frozen=True)
class TableRow:
    table: str
    index: int
    fields: dict = field(hash=False, compare=True)

    @property
    def citation(self) -> str:
        return f"{self.table}#{self.index}"

    def __getitem__(self, key):
        return self.fields[key]

    def get(self, key, default=None):
        return self.fields.get(key, default)

    def rat(self, key):
        return rat(self.fields[key])

    def rats(self, key) -> list:
        return [rat(x) for x in self.fields[key].split(",")]

    def quads(self, key, d: int = 5) -> list:
        return [parse_quad(x, d) for x in self.fields[key].split(",")]

    def has(self, key) -> bool:
        v = self.fields.get(key)
        return v not in (None, "", "same")


def registry_path() -> Path:
    env = os.environ.get("DNMOD_REGISTRY")
    return Path(env) if env else _DEFAULT_REGISTRY


@lru_cache(maxsize=4)
def _load(path: str) -> dict:
    tables: dict[str, list[TableRow]] = {t: [] for t in TABLE_IDS}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = [p.strip() for p in line.split("|")]
            tid = parts[0]
            if tid not in tables:
                raise RegistryError(f"{path}:{lineno}: unknown table {tid!r}")
            fields = {}
            for p in parts[1:]:
                k, sep, v = p.partition("=")
                if not sep:
                    raise RegistryError(f"{path}:{lineno}: field {p!r} is not key=value")
                fields[k.strip()] = v.strip()
            tables[tid].append(TableRow(tid, len(tables[tid]) + 1, fields))
    return tables


def registry(table_id: str) -> list[TableRow]:
    if table_id not in TABLE_IDS:
        raise RegistryError(f"unknown table {table_id!r}; expected one of {TABLE_IDS}")
    return list(_load(str(registry_path()))[table_id])
