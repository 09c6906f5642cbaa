"""Command-line interface.

Tabular output is CSV with a header row, or JSON lines with ``--json`` (or
``APUF_ENTROPY_FORMAT=json``).  Floats carry 6 significant digits unless
``--full-precision`` is given, in which case they round-trip exactly.
"""
from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from typing import Iterable, Sequence

from . import bins, correlation, entropy, expected, mc, prediction
from .model import Challenge, PhiVector, challenge_to_phi, phi_to_challenge

EXIT_DOMAIN = 1
EXIT_MC_VIOLATION = 3


def parse_challenge(text: str) -> PhiVector:
    """A bitstring challenge (leftmost bit is c_1) or a JSON array of +1/-1 phi values."""
    text = text.strip()
    if text.startswith("["):
        return PhiVector.from_json(text)
    return challenge_to_phi(Challenge.from_string(text))


def parse_response(text: str) -> int:
    value = {"+1": 1, "1": 1, "-1": -1}.get(text.strip())
    if value is None:
        raise ValueError(f"response must be +1 or -1, got {text!r}")
    return value


def parse_crp(text: str) -> prediction.Crp:
    """``BITSTRING:+1`` or ``BITSTRING:-1``."""
    challenge, sep, response = text.rpartition(":")
    if not sep:
        raise ValueError(f"expected CHALLENGE:RESPONSE, got {text!r}")
    return prediction.Crp(parse_challenge(challenge), parse_response(response))


def _fmt(value, full: bool):
    if isinstance(value, float):
        return repr(value) if full else f"{value:.6g}"
    return value


class Emitter:
    def __init__(self, fmt: str, full: bool, out=None):
        self.fmt = fmt
        self.full = full
        self.out = out or sys.stdout

    def rows(self, rows: Iterable[dict]) -> None:
        writer = None
        for row in rows:
            if self.fmt == "json":
                rec = {k: (float(_fmt(v, self.full)) if isinstance(v, float) else v) for k, v in row.items()}
                self.out.write(json.dumps(rec) + "\n")
                continue
            if writer is None:
                writer = csv.DictWriter(self.out, fieldnames=list(row), lineterminator="\n")
                writer.writeheader()
            writer.writerow({k: _fmt(v, self.full) for k, v in row.items()})


def _check_n(phis: Sequence[PhiVector], n: int | None) -> None:
    for p in phis:
        if n is not None and p.n != n:
            raise ValueError(f"challenge has {p.n} stages but --n is {n}")
    if len({p.n for p in phis}) > 1:
        raise ValueError("challenges have different lengths")


def cmd_similarity(args, emit: Emitter) -> int:
    a, b = parse_challenge(args.challenge_a), parse_challenge(args.challenge_b)
    _check_n([a, b], args.n)
    s = correlation.similarity_factor(a, b)
    emit.rows([{
        "n": a.n,
        "s": s.value,
        "rho": correlation.pair_correlation(a, b),
        "p_same": correlation.response_similarity(a, b),
    }])
    return 0


def cmd_predict(args, emit: Emitter) -> int:
    known = [parse_crp(k) for k in args.known]
    target = parse_challenge(args.target)
    _check_n([k.phi for k in known] + [target], None)
    result = prediction.predict(known, target)
    emit.rows([{"predicted": result.predicted, "accuracy": result.accuracy, "pmf_plus": result.pmf}])
    return 0


def cmd_entropy_curve(args, emit: Emitter) -> int:
    n = args.n
    rows = []
    for s in bins.realizable_factors(n):
        report = entropy.cond_entropy_1(s, n)
        rows.append({
            "s": s.value,
            "rho": correlation.rho_from_factor(s),
            "p_same": correlation.factor_similarity(s),
            "accuracy": report.accuracy,
            "shannon": report.shannon,
            "min_entropy": report.min_entropy,
            "bin_size": bins.bin_size_1(s, n),
        })
    emit.rows(rows)
    return 0


def _emit_members(members: Iterable[PhiVector], as_phi: bool, out) -> None:
    for phi in members:
        out.write((phi.to_json() if as_phi else str(phi_to_challenge(phi))) + "\n")


def cmd_bins(args, emit: Emitter) -> int:
    spec = bins.BinSpec(args.semimetric, args.value)
    if args.anchor2 is None:
        anchor = parse_challenge(args.anchor.rpartition(":")[0] if ":" in args.anchor else args.anchor)
        factors = bins.semimetric_to_factors(spec, anchor.n, args.tol)
        if args.count_only:
            emit.rows({"s": s.value, "count": bins.bin_size_1(s, anchor.n)} for s in factors)
            return 0
        for s in factors:
            members = bins.enumerate_bin_1(anchor, s)
            _emit_members((m for m, _ in zip(members, range(args.limit))), args.phi, emit.out)
        return 0
    k1, k2 = parse_crp(args.anchor), parse_crp(args.anchor2)
    _check_n([k1.phi, k2.phi], None)
    cells = bins.matching_cells(k1.phi, k2.phi, k1.response, k2.response, spec, args.tol)
    if args.count_only:
        emit.rows({
            "case": c.case.value,
            "s13": c.s13,
            "s23": c.s23,
            "rho13": float(c.rhos[1]),
            "rho23": float(c.rhos[2]),
            "count": c.count,
        } for c in cells)
        return 0
    _emit_members(
        bins.enumerate_neighborhood_2(k1.phi, k2.phi, k1.response, k2.response, spec, args.limit, args.tol),
        args.phi,
        emit.out,
    )
    return 0


def cmd_expected(args, emit: Emitter) -> int:
    if args.rho12 is None:
        report = expected.expected_report_1(args.n)
        row = {"n": args.n, "rho12": "", "r1": "", "r2": ""}
    else:
        report = expected.expected_report_2(args.n, args.rho12, args.r1, args.r2)
        row = {"n": args.n, "rho12": args.rho12, "r1": args.r1, "r2": args.r2}
    row.update(report.as_dict())
    emit.rows([row])
    return 0


def cmd_region(args, emit: Emitter) -> int:
    phi1, phi2 = bins.anchors_for_profile(bins.profile_for_rho(args.n, args.rho12))
    emit.rows(bins.region_rows(phi1, phi2, args.r1, args.r2))
    return 0


def cmd_mc(args, emit: Emitter) -> int:
    cfg = mc.McConfig(args.n, args.instances, seed=args.seed, sigma=args.sigma)
    if args.pair:
        a, b = (parse_challenge(x) for x in args.pair)
        result = mc.mc_response_similarity(cfg, a, b)
        kind = "response_similarity"
    else:
        if not args.known or args.target is None:
            raise ValueError("mc needs either --pair A B or --known ... --target")
        known = [parse_crp(k) for k in args.known]
        target = parse_challenge(args.target)
        if args.accuracy:
            result = mc.mc_predictor_accuracy(cfg, known, target)
            kind = "predictor_accuracy"
        else:
            result = mc.mc_conditional(cfg, known, target)
            kind = "conditional_pmf"
    record = {"quantity": kind, **result.to_dict(), "passed": result.ok(args.threshold)}
    emit.out.write(json.dumps(record) + "\n")
    return 0 if record["passed"] else EXIT_MC_VIOLATION


def _response_arg(text: str) -> int:
    try:
        return parse_response(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="apuf-entropy",
        description="Arbiter PUF response similarity, prediction and conditional entropy",
    )
    default_fmt = os.environ.get("APUF_ENTROPY_FORMAT", "csv").lower()
    ap.add_argument("--json", dest="fmt", action="store_const", const="json", default=default_fmt,
                    help="emit JSON lines instead of CSV")
    ap.add_argument("--csv", dest="fmt", action="store_const", const="csv")
    ap.add_argument("--full-precision", action="store_true", help="print floats with full round-trip precision")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("similarity", help="similarity factor, correlation and P[R_a = R_b]")
    p.add_argument("challenge_a")
    p.add_argument("challenge_b")
    p.add_argument("--n", type=int)
    p.set_defaults(func=cmd_similarity)

    p = sub.add_parser("predict", help="optimal prediction from one or two known CRPs")
    p.add_argument("--known", action="append", required=True, metavar="C:R")
    p.add_argument("--target", required=True)
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("entropy-curve", help="per-similarity-factor probability, accuracy and entropies")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_entropy_curve)

    p = sub.add_parser("bins", help="count or enumerate a bin around one or two anchors")
    p.add_argument("--anchor", required=True, help="C, or C:R when a second anchor is given")
    p.add_argument("--anchor2", metavar="C:R")
    p.add_argument("--semimetric", required=True, choices=entropy.SEMIMETRICS)
    p.add_argument("--value", type=float, required=True)
    p.add_argument("--tol", type=float, default=bins.SEMIMETRIC_TOL)
    p.add_argument("--count-only", action="store_true")
    p.add_argument("--limit", type=int, default=100, help="members per similarity bin or cell")
    p.add_argument("--phi", action="store_true", help="emit phi vectors as JSON arrays instead of bitstrings")
    p.set_defaults(func=cmd_bins)

    p = sub.add_parser("expected", help="expected conditional entropies and accuracy")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--rho12", type=float)
    p.add_argument("--r1", type=_response_arg, default=1)
    p.add_argument("--r2", type=_response_arg, default=1)
    p.set_defaults(func=cmd_expected)

    p = sub.add_parser("region", help="feasible (rho13, rho23) grid with counts and entropies")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--rho12", type=float, required=True)
    p.add_argument("--r1", type=_response_arg, default=1)
    p.add_argument("--r2", type=_response_arg, default=1)
    p.set_defaults(func=cmd_region)

    p = sub.add_parser("mc", help="Monte Carlo check of one closed-form quantity")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--instances", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--sigma", type=float, default=1.0)
    p.add_argument("--threshold", type=float, default=3.0, help="|z| above this exits with status 3")
    p.add_argument("--pair", nargs=2, metavar=("A", "B"))
    p.add_argument("--known", action="append", metavar="C:R")
    p.add_argument("--target")
    p.add_argument("--accuracy", action="store_true", help="check predictor accuracy instead of the pmf")
    p.set_defaults(func=cmd_mc)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.fmt not in ("csv", "json"):
        parser.error(f"unknown output format {args.fmt!r}")
    emit = Emitter(args.fmt, args.full_precision)
    try:
        return args.func(args, emit)
    except (ValueError, mc.InsufficientSamplesError) as exc:
        print(f"apuf-entropy {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
