"""Command-line front end.

Exit codes: 0 on success, 1 on domain errors, 2 on usage errors.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction
from typing import Sequence

from . import lattice, numeval, secrecy
from .errors import DomainError, InternalError
from .poly import ZPoly
from .qexp import named_form_series, theta_series
from .thetasolve import EVEN, GENERAL, LatticePrefix, ThetaWeights, basis_for, reconstruct_theta, solve

ORDER_ENV = "SECRECY_DEFAULT_ORDER"

PREFIX_HELP = (
    "comma-separated theta coefficients; with --even these are the coefficients "
    "of q^2, q^4, ..., q^(2m) (n = 24m + 8k), with --general of q^1, ..., q^(n//8)"
)


def _rat_list(text: str) -> tuple[Fraction, ...]:
    if text.strip() == "":
        return ()
    try:
        return tuple(Fraction(t.strip()) for t in text.split(","))
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected comma-separated rationals, got {text!r}")


def _float_list(text: str) -> list[float]:
    try:
        vals = [float(t) for t in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")
    if not vals or any(not v > 0 for v in vals):
        raise argparse.ArgumentTypeError("grid values must be positive")
    return vals


def _range(text: str) -> range:
    try:
        lo, hi = (int(t) for t in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO:HI, got {text!r}")
    if lo < 0 or hi < lo:
        raise argparse.ArgumentTypeError(f"need 0 <= LO <= HI, got {text!r}")
    return range(lo, hi + 1)


def _add_lattice_args(p: argparse.ArgumentParser, weights: bool = True) -> None:
    p.add_argument("--dim", type=int, required=True, help="lattice dimension n")
    par = p.add_mutually_exclusive_group(required=True)
    par.add_argument("--even", dest="parity", action="store_const", const=EVEN,
                     help="even unimodular basis E4^(3(m-j)+k) Delta^j")
    par.add_argument("--general", dest="parity", action="store_const", const=GENERAL,
                     help="general unimodular basis theta_3^(n-8r) Delta8^r")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--prefix", type=_rat_list, help=PREFIX_HELP)
    if weights:
        src.add_argument("--weights", type=_rat_list,
                         help="comma-separated weights starting with 1 (as printed by solve)")
    p.add_argument("--order", type=int, default=None,
                   help=f"series truncation order (default: derived from n, or ${ORDER_ENV})")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="secrecy-gain",
        description="Exact theta series, secrecy functions and secrecy gains of unimodular lattices.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("series", help="print a theta function or named modular form")
    p.add_argument("--form", required=True,
                   choices=["theta2", "theta3", "theta4", "E4", "Delta", "Delta8"])
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--power", type=int, default=1)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("solve", help="solve for theta weights from a kissing prefix")
    _add_lattice_args(p, weights=False)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("gain", help="exact secrecy gain at y = 1 with a minimum certificate")
    _add_lattice_args(p)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("certify", help="certify that P attains its minimum on (0, 1/4] at 1/4")
    p.add_argument("--poly", type=_rat_list, help="coefficients of P, constant term first")
    p.add_argument("--dim", type=int)
    par = p.add_mutually_exclusive_group()
    par.add_argument("--even", dest="parity", action="store_const", const=EVEN)
    par.add_argument("--general", dest="parity", action="store_const", const=GENERAL)
    p.add_argument("--prefix", type=_rat_list, help=PREFIX_HELP)
    p.add_argument("--weights", type=_rat_list)
    p.add_argument("--order", type=int, default=None)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("diff", help="per-unit difference of inverse secrecy gains")
    p.add_argument("--theorem", type=int, choices=[1, 2], required=True,
                   help="1: even lattices, count of norm-2m vectors; 2: all unimodular, count of norm n//8 vectors")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("scan", help="gains over a range of kissing values")
    p.add_argument("--dim", type=int, required=True)
    par = p.add_mutually_exclusive_group(required=True)
    par.add_argument("--even", dest="parity", action="store_const", const=EVEN)
    par.add_argument("--general", dest="parity", action="store_const", const=GENERAL)
    p.add_argument("--kissing", type=_range, required=True, metavar="LO:HI",
                   help="inclusive range for the last prescribed coefficient; earlier ones are 0")
    p.add_argument("--order", type=int, default=None)
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true")
    fmt.add_argument("--csv", action="store_true")

    p = sub.add_parser("enumerate", help="norm census of an explicit Gram matrix")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--gram", metavar="FILE", help="JSON file with a 2D integer array (or {\"gram\": ...})")
    src.add_argument("--e8", action="store_true", help="use the bundled E8 Gram matrix")
    src.add_argument("--identity", type=int, metavar="N", help="use the identity (Z^N)")
    p.add_argument("--max-norm", type=int, default=4)
    p.add_argument("--allow-large", action="store_true",
                   help=f"lift the caps n <= {lattice.MAX_DIMENSION}, norm <= {lattice.MAX_NORM}")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("sample", help="CSV samples of the secrecy function Xi(y)")
    _add_lattice_args(p)
    p.add_argument("--grid", type=_float_list, help="comma-separated y values")
    p.add_argument("--points", type=int, default=101)
    p.add_argument("--ymin", type=float, default=0.25)
    p.add_argument("--ymax", type=float, default=4.0)
    return parser


# --- helpers -----------------------------------------------------------------

def _order(args) -> int | None:
    if getattr(args, "order", None) is not None:
        return args.order
    env = os.environ.get(ORDER_ENV)
    if env:
        try:
            return int(env)
        except ValueError:
            raise DomainError(f"{ORDER_ENV} must be an integer, got {env!r}")
    return None


def _weights_from(args) -> ThetaWeights:
    if args.dim is None or args.parity is None:
        raise DomainError("need --dim and one of --even/--general")
    if getattr(args, "weights", None) is not None:
        return ThetaWeights(args.parity, args.weights, args.dim)
    if args.prefix is None:
        raise DomainError("need --prefix or --weights")
    return solve(LatticePrefix(args.dim, args.parity, args.prefix), _order(args))


def _join(values) -> str:
    return ", ".join(str(v) for v in values)


def _emit_json(obj, out) -> None:
    out.write(json.dumps(obj, indent=2, sort_keys=False) + "\n")


def _certificate_lines(cert: secrecy.MinimumCertificate) -> list[str]:
    lines = [f"certificate: {cert.verdict} ({cert.interior_critical_points} interior critical points)",
             f"  {cert.witness}"]
    if cert.verdict == secrecy.REFUTED:
        lo, hi = cert.minimizer_bracket
        lines.append(f"  interior minimum of P located in [{lo}, {hi}] (~{float(lo):.12g})")
        if cert.minimum_estimate and cert.minimum_estimate > 0:
            lines.append(f"  larger secrecy gain there ~{1 / cert.minimum_estimate:.12g}")
    return lines


# --- commands ----------------------------------------------------------------

def cmd_series(args, out) -> None:
    if args.power < 0:
        raise DomainError("power must be non-negative")
    if args.form.startswith("theta"):
        s = theta_series(int(args.form[-1]), args.order)
    else:
        s = named_form_series(args.form, args.order)
    s = s ** args.power
    if args.json:
        _emit_json(s.to_json(), out)
    else:
        out.write(s.pretty(max_terms=10 ** 6) + f"  (exact through q^{s.order})\n")


def cmd_solve(args, out) -> None:
    w = _weights_from(args)
    theta = reconstruct_theta(w, basis_for(w, _order(args)))
    if args.json:
        data = w.to_json()
        data["theta"] = theta.to_json()
        _emit_json(data, out)
        return
    out.write(f"weights: {_join(w.weights)}\n")
    coeffs = theta.integer_coefficients()
    shown = ", ".join(f"q^{k}: {c}" for k, c in enumerate(coeffs) if c)
    out.write(f"theta: {shown} (exact through q^{theta.order})\n")


def cmd_gain(args, out) -> None:
    report = secrecy.gain_report(_weights_from(args))
    if args.json:
        _emit_json(report.to_json(), out)
        return
    out.write(f"P(z) = {report.polynomial.pretty()}\n")
    out.write(
        f"gain = {report.gain} (~{secrecy.decimal_str(report.gain)}, "
        f"~{secrecy.gain_db(report.gain):.6f} dB approx), certificate: {report.certificate.verdict}\n"
    )
    for line in _certificate_lines(report.certificate)[1:]:
        out.write(line + "\n")


def cmd_certify(args, out) -> None:
    if args.poly is not None:
        p = ZPoly(args.poly)
    else:
        p = secrecy.zpoly_of(_weights_from(args))
    cert = secrecy.certify_minimum(p)
    if args.json:
        data = {"polynomial": [str(c) for c in p.coefficients]}
        data.update(cert.to_json())
        _emit_json(data, out)
        return
    out.write(f"P(z) = {p.pretty()}\n")
    out.write(f"P(1/4) = {cert.endpoint_value}\n")
    for line in _certificate_lines(cert):
        out.write(line + "\n")


def cmd_diff(args, out) -> None:
    report = secrecy.theorem1_report(args.dim) if args.theorem == 1 else secrecy.theorem2_report(args.dim)
    if args.json:
        _emit_json(report.to_json(), out)
    else:
        out.write(report.text() + "\n")


def scan_rows(dim: int, parity: str, kissing: range, order: int | None = None) -> list[dict]:
    """One row per kissing value: last weight, exact and decimal gain, verdict."""
    need = dim // 24 if parity == EVEN else dim // 8
    if need == 0:
        raise DomainError(f"dimension {dim} has no free coefficient to scan")
    rows = []
    for kv in kissing:
        prefix = LatticePrefix(dim, parity, tuple([0] * (need - 1) + [kv]))
        report = secrecy.gain_report(solve(prefix, order))
        rows.append({
            "kissing": kv,
            "last_weight": report.weights.weights[-1],
            "gain": report.gain,
            "inverse_gain": 1 / report.gain,
            "verdict": report.certificate.verdict,
        })
    for a, b in zip(rows, rows[1:]):
        if not b["gain"] < a["gain"]:
            raise InternalError("scan gains are not strictly decreasing in the kissing value")
    return rows


def cmd_scan(args, out) -> None:
    rows = scan_rows(args.dim, args.parity, args.kissing, _order(args))
    gaps = [b["inverse_gain"] - a["inverse_gain"] for a, b in zip(rows, rows[1:])]
    if args.json:
        _emit_json({
            "rows": [
                {"kissing": r["kissing"], "last_weight": str(r["last_weight"]), "gain": str(r["gain"]),
                 "gain_decimal": secrecy.decimal_str(r["gain"]), "verdict": r["verdict"]}
                for r in rows
            ],
            "inverse_gain_gaps": [str(g) for g in gaps],
        }, out)
        return
    if args.csv:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["kissing", "last_weight", "gain", "gain_decimal", "verdict"])
        for r in rows:
            w.writerow([r["kissing"], r["last_weight"], r["gain"], secrecy.decimal_str(r["gain"]), r["verdict"]])
        out.write(buf.getvalue())
        return
    out.write(f"{'kissing':>8}  {'last weight':>14}  {'gain':>24}  {'decimal':>16}  verdict\n")
    for r in rows:
        out.write(
            f"{r['kissing']:>8}  {str(r['last_weight']):>14}  {str(r['gain']):>24}  "
            f"{secrecy.decimal_str(r['gain']):>16}  {r['verdict']}\n"
        )
    if gaps:
        distinct = sorted(set(gaps))
        out.write(f"inverse-gain gaps: {_join(distinct)}\n")


def cmd_enumerate(args, out) -> None:
    if args.gram:
        try:
            g = lattice.GramMatrix.from_file(args.gram)
        except (OSError, json.JSONDecodeError, KeyError, TypeError) as exc:
            raise DomainError(f"cannot read Gram matrix from {args.gram}: {exc}")
    elif args.e8:
        g = lattice.e8_gram()
    else:
        g = lattice.GramMatrix.identity(args.identity)
    flags = lattice.check_unimodular(g)
    census = lattice.enumerate_norms(g, args.max_norm, allow_large=args.allow_large)
    positive = {k: v for k, v in census.counts.items() if k > 0}
    kiss = min(positive.items()) if positive else None
    if args.json:
        data = census.to_json()
        data.update({
            "dimension": g.dimension,
            "determinant": flags.determinant,
            "even": flags.even,
            "unimodular": flags.unimodular,
            "kissing": {"min_norm": kiss[0], "count": kiss[1]} if kiss else None,
        })
        _emit_json(data, out)
        return
    out.write(f"dimension {g.dimension}, determinant {flags.determinant}, "
              f"{'even' if flags.even else 'odd'}, {'unimodular' if flags.unimodular else 'not unimodular'}\n")
    for k, v in census.counts.items():
        out.write(f"norm {k}: {v}\n")
    if kiss:
        out.write(f"kissing: {kiss[1]} vectors of norm {kiss[0]}\n")
    else:
        out.write(f"no nonzero vectors of norm <= {census.max_norm}\n")


def cmd_sample(args, out) -> None:
    w = _weights_from(args)
    if args.grid:
        grid = args.grid
    else:
        if args.points < 1 or not 0 < args.ymin <= args.ymax:
            raise DomainError("need points >= 1 and 0 < ymin <= ymax")
        grid = numeval.default_grid(args.points, args.ymin, args.ymax)
    out.write(numeval.format_csv(numeval.sample_secrecy_function(w, grid)))


COMMANDS = {
    "series": cmd_series,
    "solve": cmd_solve,
    "gain": cmd_gain,
    "certify": cmd_certify,
    "diff": cmd_diff,
    "scan": cmd_scan,
    "enumerate": cmd_enumerate,
    "sample": cmd_sample,
}


def dispatch(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        COMMANDS[args.command](args, out)
    except DomainError as exc:
        err.write(f"error: {exc}\n")
        return 1
    return 0


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
