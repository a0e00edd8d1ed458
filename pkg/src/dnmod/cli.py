"""``dnmod <command> [flags]``: reproduce tables and run single computations.

Exit status is 0 when every check passes, 1 on a mathematical mismatch and 2
on a usage or precondition error.
"""
from __future__ import annotations

import argparse
import json
import sys
from math import comb

from . import hunt as _hunt
from .curves import (GeneralCubicCurve, QuarticCurve, WeierstrassCurve, an_sequence, ap_count, asd_verify,
                     curve_d2, hasse_ok, isogeny_checks, spectral_d3, spectral_from_quartic)
from .dnop import D2Params, D3Params, bridge_d2_to_d3, nondegenerate, phi_series
from .errors import CostGuardError, DnmodError
from .etaq import TABLE_IDS
from .mirror import c_series, t_of_q
from .rings import QQ, QuadraticField, is_prime, parse_quad, primes_upto, rat
from .tables import Row, reproduce

ORDER_CAP = 256


class UsageError(Exception):
    pass


# -- parsing -----------------------------------------------------------------------

def _values(text: str):
    toks = [t.strip() for t in text.split(",")]
    if any("sqrt" in t for t in toks):
        d = next(parse_quad(t).d for t in toks if "sqrt" in t)
        vals = [parse_quad(t, d) for t in toks]
        K = QuadraticField(d)
        return [K(v) for v in vals], K
    try:
        return [rat(t) for t in toks], QQ
    except (TypeError, ValueError) as e:
        raise UsageError(str(e)) from None


def parse_d2(text: str) -> D2Params:
    vals, _ = _values(text)
    if len(vals) == 3:
        vals.append(vals[0] * 0)
    if len(vals) != 4:
        raise UsageError(f"--d2 takes a2,a1,a0[,b], got {len(vals)} values")
    return D2Params(*vals)


def parse_d3(text: str) -> D3Params:
    vals, _ = _values(text)
    if len(vals) != 6:
        raise UsageError(f"--d3 takes a3,a2,a1,a0,b1,b0, got {len(vals)} values")
    return D3Params(*vals)


def parse_curve(text: str):
    kind, sep, rest = text.partition(":")
    if not sep:
        raise UsageError("--curve needs kind:values, e.g. cubic:1,-24,36")
    vals, ring = _values(rest)
    if ring is not QQ:
        raise UsageError("curves must have rational coefficients")
    shapes = {"cubic": 3, "weierstrass": 2, "quartic": 4, "spectral": 4}
    if kind not in shapes:
        raise UsageError(f"unknown curve kind {kind!r}; expected one of {', '.join(shapes)}")
    if len(vals) != shapes[kind]:
        raise UsageError(f"{kind} takes {shapes[kind]} values")
    if kind == "cubic":
        return GeneralCubicCurve(*vals)
    if kind == "weierstrass":
        return WeierstrassCurve(*vals)
    F = [vals[3], vals[2], vals[1], vals[0], QQ.one]
    return QuarticCurve(F) if kind == "quartic" else spectral_from_quartic(F)


def _params(args):
    if bool(args.d2) == bool(args.d3):
        raise UsageError("give exactly one of --d2 or --d3")
    return parse_d2(args.d2) if args.d2 else parse_d3(args.d3)


def _curve_of(args):
    if getattr(args, "curve", None):
        if args.d2 or args.d3:
            raise UsageError("--curve excludes --d2/--d3")
        return parse_curve(args.curve)
    p = _params(args)
    if p.ring is not QQ:
        raise UsageError("curves need rational parameters")
    return curve_d2(p) if isinstance(p, D2Params) else QuarticCurve(p.F())


def _order(args, default=100) -> int:
    n = default if args.order is None else args.order
    if n < 1:
        raise UsageError("--order must be positive")
    if n > ORDER_CAP:
        raise UsageError(f"--order is capped at {ORDER_CAP}")
    return n


# -- commands -----------------------------------------------------------------------

def cmd_reproduce(args) -> list[Row]:
    tables = TABLE_IDS if args.table == "all" else (args.table,)
    if args.table != "all" and args.table not in TABLE_IDS:
        raise UsageError(f"unknown table {args.table!r}; expected one of all, {', '.join(TABLE_IDS)}")
    order = _order(args)
    rows = []
    for t in tables:
        rows.extend(reproduce(t, order, args.jobs))
    return rows


def _coeff_rows(prefix: str, coeffs, start: int = 0, **extra) -> list[Row]:
    out = []
    for n, x in enumerate(coeffs):
        if n < start:
            continue
        row = Row(f"{prefix}{n}", "info")
        row.info("n", str(n))
        row.info("value", x)
        for k, v in extra.items():
            row.info(k, v[n])
        out.append(row)
    return out


def cmd_phi0(args) -> list[Row]:
    p = _params(args)
    N = _order(args, 20)
    phi = phi_series(p, N=N)
    if args.log:
        psi = phi_series(p, "log_part", N)
        return _coeff_rows("u", phi.c, psi=psi.c)
    return _coeff_rows("u", phi.c)


def cmd_qexp(args) -> list[Row]:
    p = _params(args)
    N = _order(args, 20)
    t = t_of_q(p, N)
    f = phi_series(p, N=N).compose(t)
    return _coeff_rows("q^", t.c, start=1, f=f.c)


def cmd_cn(args) -> list[Row]:
    p = _params(args)
    N = _order(args, 20)
    return _coeff_rows("c", c_series(p, N).c, start=1)


def cmd_curve(args) -> list[Row]:
    E = _curve_of(args)
    row = Row("curve", "info")
    row.info("model", repr(E))
    if isinstance(E, GeneralCubicCurve):
        S = E.short()
    elif isinstance(E, QuarticCurve):
        S = E.jacobian()
    else:
        S = E
    row.info("B", S.B)
    row.info("C", S.C)
    row.info("j", S.j())
    row.info("disc", E.disc)
    row.info("bad primes", sorted(E.bad_primes()) or "none")
    return [row]


def _ap_row(E, p: int) -> Row:
    row = Row(f"p={p}")
    if p in E.bad_primes():
        row.status = "info"
        row.info("a_p", "bad")
        return row
    a = ap_count(E, p)
    row.info("a_p", str(a))
    row.check("Hasse", hasse_ok(a, p))
    return row


def cmd_ap(args) -> list[Row]:
    E = _curve_of(args)
    if args.p is not None:
        if not is_prime(args.p):
            raise UsageError(f"--p {args.p} is not prime")
        return [_ap_row(E, args.p)]
    return [_ap_row(E, p) for p in primes_upto(args.pmax)]


def cmd_asd(args) -> list[Row]:
    p = _params(args)
    if p.ring is not QQ:
        raise UsageError("asd needs rational parameters")
    if not nondegenerate(p):
        raise UsageError("asd needs a nondegenerate F")
    N = _order(args, 120)
    c = c_series(p, N)
    E = curve_d2(p) if isinstance(p, D2Params) else QuarticCurve(p.F())
    rep = asd_verify(c.c, E, args.pmax, N)
    L = an_sequence(E, N)
    bad = [n for n in L.good_indices() if L[n] != c.c[n]]
    row = Row("asd")
    row.info("congruences", str(rep.checked))
    row.check(f"ASD p<={args.pmax}, np<={N}", rep.ok, rep.failures[:2])
    row.check(f"c_n = a_n, n<={N}", not bad, bad[:3])
    row.info("bad primes", sorted(L.bad))
    return [row]


def cmd_hunt(args) -> list[Row]:
    if args.order not in (2, 3):
        raise UsageError("hunt --order must be 2 or 3")
    primes = [int(x) for x in str(args.prime).split(",")]
    names = ",".join(_hunt.SEARCH_VARS[args.order])
    rows = []
    for p in primes:
        sol = _hunt.fp_enumerate(args.order, p, args.stage, jobs=args.jobs)
        rep = _hunt.reduction_membership(_hunt.known_tuples(args.order), p, sol)
        head = Row(f"D{args.order}/p={p}")
        head.info("solutions", str(len(sol)))
        head.info("members", str(len(rep.members)))
        head.info("skipped", ",".join(rep.skipped) or "none")
        head.check("known rows reduce into the solution set", rep.ok, rep.missing[:3])
        rows.append(head)
        if args.list:
            for pt in sol:
                r = Row(f"p={p}:({names})", "info")
                r.info("tuple", list(pt))
                rows.append(r)
    return rows


def cmd_bridge(args) -> list[Row]:
    if not args.d2:
        return reproduce("bridge", 60, args.jobs)
    p = parse_d2(args.d2)
    q = bridge_d2_to_d3(p)
    row = Row("bridge")
    row.info("d3", [q.a3, q.a2, q.a1, q.a0, q.b1, q.b0])
    row.info("j2", GeneralCubicCurve(p.a2, p.a1, 0).j())
    row.info("j3", spectral_d3(q).j())
    N = _order(args, 60)
    u = phi_series(p, N=N // 2)
    law = [QQ.zero] * (N + 1)
    for n in range(N // 2 + 1):
        law[2 * n] = comb(2 * n, n) * u.c[n]
    row.check(f"binomial law to t^{N}", phi_series(q, N=N).c == law)
    iso = isogeny_checks(p.a2, p.a1, args.pmax)
    row.check("isogeny E2 -> E2'", not iso.first_map_residual)
    row.check("isomorphism E3 -> E2'", not iso.second_map_residual)
    row.check(f"a_p(E2) = a_p(E3), p<={args.pmax}", not iso.ap_mismatches, iso.ap_mismatches[:2])
    return [row]


COMMANDS = {
    "reproduce": cmd_reproduce, "phi0": cmd_phi0, "qexp": cmd_qexp, "cn": cmd_cn, "curve": cmd_curve,
    "ap": cmd_ap, "asd": cmd_asd, "hunt": cmd_hunt, "bridge": cmd_bridge,
}


# -- output -------------------------------------------------------------------------

def render(command: str, rows: list[Row], fmt: str) -> str:
    failures = sum(r.status == "fail" for r in rows)
    if fmt == "json":
        obj = {"command": command, "rows": [{"id": r.id, "status": r.status, "data": r.data} for r in rows],
               "failures": failures}
        return json.dumps(obj, ensure_ascii=False)
    if fmt == "tsv":
        lines = ["id\tstatus\tfield\tvalue"]
        for r in rows:
            for k, v in r.data.items():
                lines.append(f"{r.id}\t{r.status}\t{k}\t{v}")
        return "\n".join(lines)
    w = max([len(r.id) for r in rows] + [2])
    lines = [f"# {command}"]
    for r in rows:
        body = "; ".join(f"{k}={v}" for k, v in r.data.items())
        lines.append(f"{r.id:<{w}}  {r.status:<4}  {body}")
    lines.append(f"# {len(rows)} rows, {failures} failed")
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="dnmod", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    out = common.add_mutually_exclusive_group()
    out.add_argument("--json", dest="fmt", action="store_const", const="json")
    out.add_argument("--tsv", dest="fmt", action="store_const", const="tsv")
    common.add_argument("--jobs", type=int, default=1, help="worker processes")
    common.add_argument("--order", type=int, help=f"truncation order (cap {ORDER_CAP})")
    sub = ap.add_subparsers(dest="command", required=True)

    def params(p, curve=False):
        p.add_argument("--d2", metavar="a2,a1,a0[,b]")
        p.add_argument("--d3", metavar="a3,a2,a1,a0,b1,b0")
        if curve:
            p.add_argument("--curve", metavar="KIND:VALUES",
                           help="cubic:a2,a1,a0 | weierstrass:B,C | quartic:a3,a2,a1,a0 | spectral:a3,a2,a1,a0")

    s = sub.add_parser("reproduce", parents=[common], help="recompute a registry table")
    s.add_argument("table", help="table id or 'all'")
    s = sub.add_parser("phi0", parents=[common], help="Frobenius solution coefficients")
    params(s)
    s.add_argument("--log", action="store_true", help="also the logarithmic partner")
    s = sub.add_parser("qexp", parents=[common], help="t(q) and phi0(t(q))")
    params(s)
    s = sub.add_parser("cn", parents=[common], help="mirror coefficients c_n")
    params(s)
    s = sub.add_parser("curve", parents=[common], help="model, (B, C), j, bad primes")
    params(s, curve=True)
    s = sub.add_parser("ap", parents=[common], help="a_p by point counting")
    params(s, curve=True)
    g = s.add_mutually_exclusive_group()
    g.add_argument("--p", type=int)
    g.add_argument("--pmax", type=int, default=50)
    s = sub.add_parser("asd", parents=[common], help="ASD congruences and c_n = a_n")
    params(s)
    s.add_argument("--pmax", type=int, default=31)
    s = sub.add_parser("hunt", parents=[common], help="F_p enumeration of relation solutions")
    s.set_defaults(order=None)
    s.add_argument("--prime", required=True, help="prime or comma list")
    s.add_argument("--stage", default="first8")
    s.add_argument("--list", action="store_true", help="print every solution tuple")
    s = sub.add_parser("bridge", parents=[common], help="D2 -> D3 bridge (table, or one --d2)")
    s.add_argument("--d2", metavar="a2,a1,0[,b]")
    s.add_argument("--pmax", type=int, default=50)
    return ap


_VALUE_FLAGS = ("--d2", "--d3", "--curve")


def _join_values(argv: list) -> list:
    """``--d2 -1,-24,-36`` -> ``--d2=-1,-24,-36`` so argparse does not read a flag."""
    out, it = [], iter(argv)
    for tok in it:
        if tok in _VALUE_FLAGS:
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(_join_values(sys.argv[1:] if argv is None else list(argv)))
    if args.jobs < 1:
        parser.error("--jobs must be >= 1")
    if args.command == "hunt" and args.order is None:
        parser.error("hunt needs --order 2 or 3")
    try:
        rows = COMMANDS[args.command](args)
    except (UsageError, CostGuardError, DnmodError, ValueError) as e:
        print(f"dnmod {args.command}: error: {e}", file=sys.stderr)
        return 2
    print(render(args.command, rows, args.fmt or "human"))
    return 1 if any(r.status == "fail" for r in rows) else 0


if __name__ == "__main__":
    sys.exit(main())
