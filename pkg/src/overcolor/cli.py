"""Batch command-line front end.

One subcommand per object class: coefficient listings, dissection/lemma/
chain/theorem/newman/binomial verification, Hecke eigenvalue checks, cusp
orders, level-condition checks, and the empirical progression scan.

Exit codes: 0 all requested verifications pass, 1 verification failure,
2 configuration/usage error, 3 resource bound exceeded.  Reports are
deterministic; wall-clock timings only ever go to an optional sidecar
file, never into the report body.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import congruences, families, modforms, newman, theorems
from .arith import is_prime
from .eta import verify_binomial_reduction
from .report import VerificationReport
from .series import EXACT, mod_pow2, parse_ring
from .theorems import BudgetExceeded, SweepGrid


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x != "")
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def _eta_map(text: str) -> dict[int, int]:
    out: dict[int, int] = {}
    for chunk in text.split(","):
        if not chunk:
            continue
        scale, _, exp = chunk.partition(":")
        out[int(scale)] = int(exp)
    if not out:
        raise argparse.ArgumentTypeError("empty eta exponent map")
    return out


def _primes_arg(text: str) -> tuple[int, ...]:
    values = _int_list(text)
    bad = [p for p in values if not is_prime(p)]
    if bad:
        raise argparse.ArgumentTypeError(f"not prime: {bad}")
    return values


def _out_path(args) -> Path | None:
    if not args.out:
        return None
    path = Path(args.out)
    base = os.environ.get("OVERCOLOR_OUT_DIR")
    if base and not path.is_absolute():
        path = Path(base) / path
    return path


def _emit(args, text: str) -> None:
    path = _out_path(args)
    if path is None:
        sys.stdout.write(text)
    else:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")


def _emit_report(args, report: VerificationReport) -> int:
    if args.format == "json":
        _emit(args, report.to_json())
    elif args.format == "csv":
        _emit(args, report.to_csv())
    else:
        _emit(args, report.to_text())
    return 0 if report.ok else 1


def _emit_obj(args, obj: dict, csv_rows=None) -> None:
    if args.format == "json":
        _emit(args, json.dumps(obj, ensure_ascii=True, separators=(",", ":")) + "\n")
    elif args.format == "csv" and csv_rows is not None:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\r\n")
        for row in csv_rows:
            writer.writerow(row)
        _emit(args, buf.getvalue())
    else:
        _emit(args, json.dumps(obj, ensure_ascii=True, indent=2) + "\n")


def _frac_str(x) -> str:
    f = Fraction(x)
    return f"{f.numerator}/{f.denominator}" if f.denominator != 1 else str(f.numerator)


def _family_from_args(args) -> families.Family:
    kind = args.family
    if kind in ("abar", "a"):
        if args.s is None:
            raise ValueError(f"family {kind!r} needs --s")
        return families.overcolored(args.s) if kind == "abar" else families.colored_odd(args.s)
    if kind == "power":
        if args.r is None:
            raise ValueError("family 'power' needs --r")
        return families.pure_power(args.r)
    return families.Family(kind)


FAMILY_CHOICES = ("abar", "a", "pbar", "p2", "power", "c", "c1", "c2", "c3", "c4", "b4")


# ---------------------------------------------------------------------------
# Handlers
# ---------------------------------------------------------------------------

def _cmd_coeff(args) -> int:
    fam = _family_from_args(args)
    ring = parse_ring(args.ring) if args.ring else EXACT
    series = families.family_series(fam, args.upto, ring)
    rows = [(n, series.coeff(n)) for n in range(args.upto + 1)]
    if args.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\r\n")
        for n, v in rows:
            writer.writerow([n, v])
        _emit(args, buf.getvalue())
    elif args.format == "json":
        obj = {"family": fam.label(), "ring": ring.label(), "coefficients": [v for _, v in rows]}
        _emit(args, json.dumps(obj, ensure_ascii=True, separators=(",", ":")) + "\n")
    else:
        _emit(args, "".join(f"{n} {v}\n" for n, v in rows))
    return 0


def _cmd_verify_dissection(args) -> int:
    report = VerificationReport(claim="dissection", grid={"ids": list(args.ident)}, truncation=args.upto, ring="exact")
    reports = [congruences.verify_dissection(i, args.upto) for i in args.ident]
    if len(reports) == 1:
        return _emit_report(args, reports[0])
    for sub in reports:
        report.absorb(sub)
    return _emit_report(args, report)


def _grid_points(claim, args):
    names = claim.params
    k_values = args.k or (1, 2, 3)
    alpha_values = args.alpha or (1, 2, 3)
    s_values = args.s or (1, 2, 3, 4, 5, 6)
    if names == ("k", "alpha"):
        return [{"k": k, "alpha": a} for k in k_values for a in alpha_values if a % 2]
    if names == ("alpha",):
        return [{"alpha": a} for a in alpha_values]
    return [{"s": s} for s in s_values]


def _cmd_verify_lemma(args) -> int:
    idents = list(congruences.LEMMA_CLAIM_IDS) if args.ident == ["all"] else args.ident
    ring = parse_ring(args.ring) if args.ring else None
    combined = VerificationReport(
        claim="gf:" + "+".join(idents),
        grid={"ids": idents},
        truncation=args.upto,
        ring=(ring or mod_pow2(64)).label(),
    )
    factor = 2 if args.strengthen else 1
    single = None
    for ident in idents:
        claim = congruences.GF_CLAIMS.get(ident)
        if claim is None:
            raise ValueError(f"unknown congruence id {ident!r}")
        for params in _grid_points(claim, args):
            single = congruences.verify_gf_congruence(
                ident, params, args.upto, ring=ring, modulus_factor=factor
            )
            combined.absorb(single)
    if len(idents) == 1 and single is not None and combined.checked == single.checked:
        return _emit_report(args, single)
    return _emit_report(args, combined)


def _cmd_verify_chain(args) -> int:
    combined = VerificationReport(
        claim=f"chain:{args.ident}",
        grid={"primes": list(args.primes)},
        truncation=args.upto,
        ring="exact",
    )
    for p in args.primes:
        combined.absorb(congruences.verify_proof_chain(args.ident, p, args.upto))
    return _emit_report(args, combined)


def _cmd_verify_theorem(args) -> int:
    grid = SweepGrid(
        primes=args.primes or SweepGrid.primes,
        m_values=args.m or SweepGrid.m_values,
        alpha_values=args.alpha or SweepGrid.alpha_values,
        beta_values=args.beta or SweepGrid.beta_values,
        s_values=args.s or SweepGrid.s_values,
        k_values=args.k or SweepGrid.k_values,
        j_values=args.j or SweepGrid.j_values,
        r_values=args.r,
        n_count=args.n_count,
        n_max=args.upto,
    )
    ring = parse_ring(args.ring) if args.ring else mod_pow2(64)
    report = theorems.verify_theorem(
        args.ident,
        grid,
        ring=ring,
        parallel=args.parallel,
        max_truncation=args.max_truncation,
    )
    return _emit_report(args, report)


def _cmd_verify_newman(args) -> int:
    combined = VerificationReport(
        claim=f"newman:{args.variant}",
        grid={"primes": list(args.primes), "r": args.r, "s": args.s, "q": args.q},
        truncation=args.upto,
        ring="exact",
    )
    for p in args.primes:
        if args.variant == "53":
            combined.absorb(newman.verify_newman_53(args.r, p, args.upto))
        elif args.variant == "55":
            combined.absorb(newman.verify_newman_55(args.r, p, args.upto))
        elif args.variant == "59":
            combined.absorb(newman.verify_newman_59(args.r, args.s, args.q, p, args.upto))
        else:
            _, rep = newman.fit_alpha_and_verify_newman_62(args.r, args.s, args.q, p, args.upto)
            combined.absorb(rep)
    return _emit_report(args, combined)


def _cmd_verify_binomial(args) -> int:
    combined = VerificationReport(
        claim="binomial-reduction",
        grid={"p": args.p, "k": list(args.k), "m": list(args.m)},
        truncation=args.upto,
        ring="(per point)",
    )
    for k in args.k:
        for m in args.m:
            combined.absorb(verify_binomial_reduction(args.p, k, m, args.upto))
    return _emit_report(args, combined)


def _cmd_hecke(args) -> int:
    eq = modforms.EtaQuotient(args.level, _eta_map(args.eta))
    report = VerificationReport(
        claim="hecke-eigenform",
        grid={"level": args.level, "eta": {str(d): r for d, r in eq.exponents}},
        truncation=args.upto,
        ring="exact",
    )
    report.add_witness({}, "scope", "finite verification, not proof")
    for p in args.primes:
        result = modforms.eigenform_check(eq, p, args.upto)
        if result.is_eigen:
            report.add_witness({"p": p}, "lambda", result.eigenvalue)
            report.checked += args.upto // p + 1
        else:
            report.add_failure({"p": p}, result.residual, "eigen-relation fails")
    return _emit_report(args, report)


def _cmd_cusp_orders(args) -> int:
    eq = modforms.EtaQuotient(args.level, _eta_map(args.eta))
    orders = modforms.cusp_orders(eq)
    obj = {
        "level": args.level,
        "orders": {str(d): _frac_str(v) for d, v in sorted(orders.items())},
        "all_nonnegative": all(v >= 0 for v in orders.values()),
    }
    _emit_obj(args, obj, csv_rows=[(d, _frac_str(v)) for d, v in sorted(orders.items())])
    return 0


def _cmd_eta_check(args) -> int:
    eq = modforms.EtaQuotient(args.level, _eta_map(args.eta))
    conds = modforms.check_level_conditions(eq)
    obj = {
        "level": args.level,
        "weight": _frac_str(eq.weight),
        "weight_integral": conds.weight_integral,
        "scaled_sum_ok": conds.scaled_sum_ok,
        "dual_sum_ok": conds.dual_sum_ok,
        "character_discriminant": conds.character_discriminant,
        "q_offset": _frac_str(eq.q_offset),
    }
    rows = [(k, v) for k, v in obj.items()]
    _emit_obj(args, obj, csv_rows=rows)
    return 0 if (conds.weight_integral and conds.scaled_sum_ok and conds.dual_sum_ok) else 1


def _cmd_scan(args) -> int:
    ring = parse_ring(args.ring) if args.ring else mod_pow2(64)
    fam = _family_from_args(args)
    hits, report = theorems.scan_progressions(
        args.s or 1, args.modulus, args.amax, args.upto, ring=ring, family=fam
    )
    return _emit_report(args, report)


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def _add_output_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("json", "csv", "text"), default="text")
    p.add_argument("--out", help="output path (OVERCOLOR_OUT_DIR prefixes relative paths)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="overcolor",
        description="q-series computations and congruence verification for overcolored odd partitions",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("coeff", help="list family coefficients")
    p.add_argument("family", choices=FAMILY_CHOICES)
    p.add_argument("--s", type=int, default=None)
    p.add_argument("--r", type=int, default=None)
    p.add_argument("--upto", type=int, required=True)
    p.add_argument("--ring", default=None)
    _add_output_options(p)
    p.set_defaults(func=_cmd_coeff)

    v = sub.add_parser("verify", help="verification suites")
    vsub = v.add_subparsers(dest="verify_what", required=True)

    p = vsub.add_parser("dissection", help="exact 2-dissection identities")
    p.add_argument("ident", nargs="+", choices=list(congruences.DISSECTION_IDS))
    p.add_argument("--upto", type=int, default=300)
    _add_output_options(p)
    p.set_defaults(func=_cmd_verify_dissection)

    p = vsub.add_parser("lemma", help="generating-function congruences")
    p.add_argument("ident", nargs="+")
    p.add_argument("--upto", type=int, default=200)
    p.add_argument("--k", type=_int_list, default=None)
    p.add_argument("--alpha", type=_int_list, default=None)
    p.add_argument("--s", type=_int_list, default=None)
    p.add_argument("--ring", default=None)
    p.add_argument("--strengthen", action="store_true",
                   help="double each modulus; used to confirm the harness can fail")
    _add_output_options(p)
    p.set_defaults(func=_cmd_verify_lemma)

    p = vsub.add_parser("chain", help="proof-level coefficient chains")
    p.add_argument("ident", choices=sorted(set(congruences.CHAIN_IDS)))
    p.add_argument("--primes", type=_primes_arg, required=True)
    p.add_argument("--upto", type=int, default=2000)
    _add_output_options(p)
    p.set_defaults(func=_cmd_verify_chain)

    p = vsub.add_parser("theorem", help="main theorem sweeps")
    p.add_argument("ident", choices=list(theorems.THEOREM_IDS))
    p.add_argument("--primes", type=_primes_arg, default=None)
    p.add_argument("--m", type=_int_list, default=None)
    p.add_argument("--alpha", type=_int_list, default=None)
    p.add_argument("--beta", type=_int_list, default=None)
    p.add_argument("--s", type=_int_list, default=None)
    p.add_argument("--k", type=_int_list, default=None)
    p.add_argument("--j", type=_int_list, default=None)
    p.add_argument("--r", type=_int_list, default=None)
    p.add_argument("--n-count", type=int, default=20)
    p.add_argument("--upto", type=int, default=None,
                   help="sweep every n with index <= this, instead of --n-count values")
    p.add_argument("--ring", default=None)
    p.add_argument("--parallel", type=int, default=os.cpu_count() or 1)
    p.add_argument("--max-truncation", type=int, default=theorems.DEFAULT_MAX_TRUNCATION)
    _add_output_options(p)
    p.set_defaults(func=_cmd_verify_theorem)

    p = vsub.add_parser("newman", help="coefficient recurrences")
    p.add_argument("variant", choices=("53", "55", "59", "62"))
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--s", type=int, default=None)
    p.add_argument("--q", type=int, default=2)
    p.add_argument("--primes", type=_primes_arg, required=True)
    p.add_argument("--upto", type=int, default=500)
    _add_output_options(p)
    p.set_defaults(func=_cmd_verify_newman)

    p = vsub.add_parser("binomial", help="f_m^(p^k) == f_(mp)^(p^(k-1)) mod p^k")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--k", type=_int_list, default=(1, 2, 3, 4))
    p.add_argument("--m", type=_int_list, default=(1, 2))
    p.add_argument("--upto", type=int, default=1000)
    _add_output_options(p)
    p.set_defaults(func=_cmd_verify_binomial)

    p = sub.add_parser("hecke", help="Hecke eigenvalue check on an eta quotient")
    p.add_argument("--level", type=int, default=16)
    p.add_argument("--eta", default="4:6")
    p.add_argument("--primes", type=_primes_arg, default=(3, 5, 7, 11, 13))
    p.add_argument("--upto", type=int, default=500)
    _add_output_options(p)
    p.set_defaults(func=_cmd_hecke)

    p = sub.add_parser("cusp-orders", help="orders of vanishing at each cusp denominator")
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--eta", required=True)
    _add_output_options(p)
    p.set_defaults(func=_cmd_cusp_orders)

    p = sub.add_parser("eta-check", help="weight/character level conditions")
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--eta", required=True)
    _add_output_options(p)
    p.set_defaults(func=_cmd_eta_check)

    p = sub.add_parser("scan", help="empirical progression scan (unproved hits)")
    p.add_argument("--family", choices=FAMILY_CHOICES, default="abar")
    p.add_argument("--s", type=int, default=None)
    p.add_argument("--r", type=int, default=None)
    p.add_argument("--modulus", type=int, required=True)
    p.add_argument("--amax", type=int, required=True)
    p.add_argument("--upto", type=int, default=2000)
    p.add_argument("--ring", default=None)
    _add_output_options(p)
    p.set_defaults(func=_cmd_scan)

    parser.add_argument("--timing-sidecar", default=None,
                        help="write elapsed seconds to this path (never into reports)")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    started = time.monotonic()
    try:
        status = args.func(args)
    except BudgetExceeded as exc:
        print(f"resource bound exceeded: {exc}", file=sys.stderr)
        return 3
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    sidecar = getattr(args, "timing_sidecar", None)
    if sidecar:
        Path(sidecar).write_text(f"{time.monotonic() - started:.3f}\n", encoding="utf-8")
    return status


if __name__ == "__main__":
    sys.exit(main())
