"""Command-line interface.

Exit codes: 0 success, 1 verification failure, 2 invalid arguments,
3 resource budget exceeded.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

import mpmath

from . import checks, counting, lfunc, tauberian
from .fqcensus import BudgetExceeded, FieldParams, build_census

EXIT_OK, EXIT_VERIFY, EXIT_ARGS, EXIT_BUDGET = 0, 1, 2, 3


class InvalidArguments(ValueError):
    pass


def _num(x, digits: int) -> str:
    """Decimal string; integers are written exactly, everything else to ``digits`` places."""
    if x is None:
        return ""
    if isinstance(x, int) or (isinstance(x, Fraction) and x.denominator == 1):
        return str(int(x))
    if isinstance(x, Fraction):
        x = mpmath.mpf(x.numerator) / x.denominator
    if isinstance(x, mpmath.mpc):
        if x.imag != 0:
            return f"{mpmath.nstr(x.real, digits)}{mpmath.nstr(x.imag, digits)}j"
        x = x.real
    return mpmath.nstr(x, digits)


def _emit(args, header, rows, doc=None):
    """Write rows as CSV, or ``doc`` (default: rows keyed by header) as JSON."""
    if args.format == "json":
        if doc is None:
            doc = [dict(zip(header, r)) for r in rows]
        text = json.dumps(doc, indent=2) + "\n"
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
        text = buf.getvalue()
    if args.output and args.output != "-":
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _params(args) -> FieldParams:
    try:
        return FieldParams.from_q_ell(args.q, args.ell)
    except ValueError as e:
        raise InvalidArguments(str(e)) from e


def _positive(name, value):
    if value is None or value < 1:
        raise InvalidArguments(f"--{name} must be a positive integer")


def cmd_census(args):
    _positive("max-deg", args.max_deg)
    census = build_census(args.q, args.max_deg, with_lists=args.list)
    header = ["degree", "count"] + (["polynomials"] if args.list else [])
    rows = []
    for d in range(1, args.max_deg + 1):
        row = [d, str(census.counts[d])]
        if args.list:
            row.append(" ".join("".join(map(str, f)) for f in census.lists[d]))
        rows.append(row)
    _emit(args, header, rows)
    return EXIT_OK


def cmd_coeffs(args):
    params = _params(args)
    _positive("order", args.order)
    f = lfunc.build_f_series(params, None, args.order)
    rows = [[n, params.alpha * n, str(f[n].numerator)] for n in range(args.order + 1)]
    _emit(args, ["n", "degree", "b"], rows)
    return EXIT_OK


def cmd_count(args):
    params = _params(args)
    _positive("max-n", args.max_n)
    routes = counting.ROUTES if args.oracle == "all" else (args.oracle,)
    census = build_census(params.q, params.alpha * args.max_n)
    tables = {r: counting.count(params, args.max_n, r, census) for r in routes}
    header = ["n"] + [f"a_{r}" for r in routes] + (["agree"] if len(routes) > 1 else [])
    rows = []
    for n in range(1, args.max_n + 1):
        vals = [tables[r][n] for r in routes]
        row = [n] + [str(v) for v in vals]
        if len(routes) > 1:
            row.append(str(len(set(vals)) == 1).lower())
        rows.append(row)
    _emit(args, header, rows)
    return EXIT_OK


def _model(args):
    params = _params(args)
    _positive("order", args.order)
    _positive("cutoff", args.cutoff)
    return tauberian.field_model(params, order=args.order, cutoff=args.cutoff, precision=args.precision)


def cmd_asympt(args):
    m = _model(args)
    p, dg = m.params, args.precision
    with mpmath.workdps(dg + 10):
        doc = {
            "q": p.q, "ell": p.ell, "alpha": p.alpha, "w": p.w,
            "r": {"series": _num(m.r_series, dg), "product": _num(m.r_product, dg)},
            "r_error_radius": {"series": _num(m.r_series_radius, 5), "product": _num(m.r_product_radius, 5)},
            "Q": [_num(c, dg) for c in m.Q],
            "P_monic": [_num(c, dg) for c in m.monic_P()],
            "c1": _num(m.c1, dg),
            "c2": _num(m.c2, dg),
            "secondary_exponent": str(m.secondary_exponent),
            "g_jet": [{"j": j, "value": _num(v, dg), "radius": _num(r, 5)} for j, v, r in m.g_jet],
            "order": m.order, "cutoff": args.cutoff,
        }
    args.format = "json"
    _emit(args, None, None, doc)
    return EXIT_OK


def cmd_compare(args):
    m = _model(args)
    _positive("max-n", args.max_n)
    if args.max_n > args.order:
        raise InvalidArguments("--max-n must not exceed --order")
    exact = counting.exact_counts_series(m.params, None, args.max_n).as_dict()
    start = args.min_n or 1
    rows = tauberian.comparison_rows(exact, m.predict_a, m.params.q, range(start, args.max_n + 1))
    dg = args.precision
    with mpmath.workdps(dg + 10):
        out = [[r.n, str(r.exact), _num(r.predicted, dg), _num(r.residual, dg), _num(r.residual_exponent, 8)]
               for r in rows]
    _emit(args, ["n", "exact", "predicted", "residual", "residual_exponent"], out)
    return EXIT_OK


def cmd_tauberian(args):
    if not args.w > 0:
        raise InvalidArguments("--w must be positive")
    ns = args.n or [10, 100, 1000, 10000]
    rows = []
    for n in ns:
        d = tauberian.noninteger_pole_demo(Fraction(args.w), args.qa, n, args.precision)
        rows.append([n] + [_num(x, 12) for x in (d.normalized, d.c1, d.c2, d.raw_rel_error, d.corrected_rel_error)])
    _emit(args, ["n", "normalized", "c1", "c2", "raw_rel_error", "corrected_rel_error"], rows)
    return EXIT_OK


def cmd_lemma_check(args):
    rows = []
    if args.which in ("gamma", "all"):
        for n in args.n or [1000, 2000, 4000]:
            g = tauberian.gamma_ratio_check(Fraction(args.t), n)
            rows.append(["gamma", n, _num(g.ratio, 20), _num(g.prediction, 20), _num(g.residual, 8)])
    if args.which in ("keyhole", "all"):
        for n in args.n or [50, 100, 200]:
            k = tauberian.keyhole_integral_check(1, Fraction(args.w), Fraction(args.delta), args.q, n)
            rows.append(["keyhole", n, _num(k.integral, 20), _num(k.prediction, 20), _num(k.rel_error, 8)])
    _emit(args, ["lemma", "n", "value", "prediction", "residual"], rows)
    return EXIT_OK


def cmd_verify(args):
    status = EXIT_OK
    for check in checks.SUITE:
        r = check()
        line = f"{'PASS' if r.ok else 'FAIL'} {r.name}: {r.detail}"
        if not r.ok:
            line += f" (first failing index: {r.index})"
            status = EXIT_VERIFY
        print(line, flush=True)
        if not r.ok:
            break
    return status


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="abelcount", description="Count abelian ell-extensions of F_q(t).")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, fmt="csv"):
        p.add_argument("--format", choices=("csv", "json"), default=fmt)
        p.add_argument("--output", "-o", default="-", help="output path (default: stdout)")
        return p

    def field(p):
        p.add_argument("--q", type=int, required=True)
        p.add_argument("--ell", type=int, required=True)

    p = common(sub.add_parser("census", help="irreducible counts per degree"))
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--max-deg", type=int, required=True)
    p.add_argument("--list", action="store_true", help="also list polynomials (prime q only)")
    p.set_defaults(func=cmd_census)

    p = common(sub.add_parser("coeffs", help="Euler product coefficients b_{alpha n}"))
    field(p)
    p.add_argument("--order", type=int, default=60)
    p.set_defaults(func=cmd_coeffs)

    p = common(sub.add_parser("count", help="exact a_ell(n)"))
    field(p)
    p.add_argument("--max-n", type=int, required=True)
    p.add_argument("--oracle", choices=counting.ROUTES + ("all",), default="series")
    p.set_defaults(func=cmd_count)

    for name, func, hlp in (("asympt", cmd_asympt, "asymptotic constants"),
                            ("compare", cmd_compare, "exact vs predicted table")):
        p = common(sub.add_parser(name, help=hlp), "json" if name == "asympt" else "csv")
        field(p)
        p.add_argument("--order", type=int, default=60)
        p.add_argument("--cutoff", type=int, default=20)
        p.add_argument("--precision", type=int, default=30)
        if name == "compare":
            p.add_argument("--max-n", type=int, default=60)
            p.add_argument("--min-n", type=int, default=1)
        p.set_defaults(func=func)

    p = common(sub.add_parser("tauberian", help="non-integer pole order demo"))
    p.add_argument("--w", type=Fraction, default=Fraction(1, 2))
    p.add_argument("--qa", type=int, default=4)
    p.add_argument("--n", type=int, nargs="*")
    p.add_argument("--precision", type=int, default=30)
    p.set_defaults(func=cmd_tauberian)

    p = common(sub.add_parser("lemma-check", help="gamma ratio and keyhole integral checks"))
    p.add_argument("--which", choices=("gamma", "keyhole", "all"), default="all")
    p.add_argument("--t", type=Fraction, default=Fraction(1, 2))
    p.add_argument("--w", type=Fraction, default=Fraction(1, 2))
    p.add_argument("--delta", type=Fraction, default=Fraction(1, 2))
    p.add_argument("--q", type=int, default=2)
    p.add_argument("--n", type=int, nargs="*")
    p.set_defaults(func=cmd_lemma_check)

    p = sub.add_parser("verify", help="run every identity and oracle check")
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BudgetExceeded as e:
        print(f"abelcount: budget exceeded: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except (InvalidArguments, ValueError) as e:
        print(f"abelcount: invalid arguments: {e}", file=sys.stderr)
        return EXIT_ARGS


if __name__ == "__main__":
    sys.exit(main())
