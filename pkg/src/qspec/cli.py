"""Command-line driver: spectra, resolvent probes, commutator and
sequence-extension checks, and the seeded verification suites.

Exit codes: 0 success / all required verdicts pass, 2 parse or usage
error, 3 eigenvalue iteration did not converge, 4 property or verdict
failure. Reports are JSON on stdout (CSV for sphere lists and decay
tables via --format csv); identical inputs and seeds give byte-identical
output.
"""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import berberian as bb
from . import commutator as cm
from . import sspec, suites
from .errors import NoConvergence, NotAlmostConvergent, ParseError, QspecError
from .qcore import QVector, Quaternion, load_matrix, real_rep


def _parse_quaternion(text: str) -> Quaternion:
    parts = text.split(",")
    if len(parts) != 4:
        raise ParseError(f"expected four comma-separated decimals, got {text!r}")
    try:
        w, x, y, z = (float(p) for p in parts)
    except ValueError as exc:
        raise ParseError(f"non-numeric quaternion component in {text!r}") from exc
    return Quaternion(w, x, y, z)


def _emit(text: str, path: str | None) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
            if not text.endswith("\n"):
                fh.write("\n")
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


def _cmd_spectrum(args) -> int:
    A = load_matrix(args.input)
    rep = sspec.s_spectrum(A, tol=args.tol, sweep_cap=args.max_sweeps)
    out = rep.to_csv() if args.format == "csv" else rep.to_json()
    _emit(out, args.output)
    return 0


def _kernel_basis(A, q, tol, sweep_cap) -> list[list[list[float]]]:
    # null directions of the pseudo-resolvent's real representation
    R = real_rep(sspec.pseudo_resolvent(A, q).matrix)
    u, s, vt = np.linalg.svd(R)
    cutoff = tol * (1.0 + A.norm(sweep_cap=sweep_cap) ** 2)
    basis = []
    for k in range(s.size - 1, -1, -1):
        if s[k] <= cutoff:
            vec = QVector.from_coords(vt[k])
            basis.append([list(row) for row in vec.data])
        else:
            break
    return basis


def _cmd_resolvent(args) -> int:
    A = load_matrix(args.input)
    q = _parse_quaternion(args.q)
    member, margin = sspec.membership(A, q, tol=args.tol, sweep_cap=args.max_sweeps)
    report = {
        "q": list(q.wxyz),
        "member": member,
        "margin": margin,
        "kernel": _kernel_basis(A, q, args.tol, args.max_sweeps) if member else [],
    }
    _emit(json.dumps(report), args.output)
    return 0


def _cmd_commutator(args) -> int:
    S = load_matrix(args.left)
    T = load_matrix(args.right)
    ct1 = cm.ct1_check(S, T, tol=args.tol, sweep_cap=args.max_sweeps)
    report = {"ct1": ct1.to_dict()}
    try:
        cop1 = cm.cop1_check(S, T, tol=args.tol, sweep_cap=args.max_sweeps)
        report["cop1"] = cop1.to_dict()
        cop1_ok = cop1.inclusion
    except QspecError as exc:
        report["cop1"] = {"skipped": str(exc)}
        cop1_ok = True
    _emit(json.dumps(report), args.output)
    return 0 if ct1.required_pass and cop1_ok else 4


_OPERATORS = {
    "unilateral-shift": bb.BandedOperatorRule.unilateral_shift,
    "weighted-shift": bb.BandedOperatorRule.weighted_shift,
}


def _cmd_berberian(args) -> int:
    if args.operator not in _OPERATORS:
        raise ParseError(f"unknown operator {args.operator!r}; choose from {sorted(_OPERATORS)}")
    rule = _OPERATORS[args.operator]()
    q = _parse_quaternion(args.q)
    horizon = max(int(args.terms), 100)
    cfg = bb.GeneralizedLimitConfig(horizon=horizon, cesaro_depth=2, tol=args.tol)
    cert = bb.tc1_certificate(rule, q, cfg, sweep_cap=args.max_sweeps)
    if args.format == "csv":
        lines = ["n,norm"] + [f"{n},{v!r}" for n, v in cert.decay_table]
        _emit("\n".join(lines) + "\n", args.output)
    else:
        _emit(cert.to_json(), args.output)
    return 0 if cert.verdict == "pass" else 4


def _cmd_check(args) -> int:
    results = suites.run_suite(args.suite, seed=args.seed)
    passed = all(r.passed for r in results)
    report = {
        "suite": args.suite,
        "seed": args.seed,
        "passed": passed,
        "results": [r.to_dict() for r in results],
    }
    _emit(json.dumps(report), args.output)
    return 0 if passed else 4


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qspec",
        description="Spectra of quaternionic operators, sequence-space extension "
                    "certificates, and commutator checks.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--tol", type=float, default=1e-6, help="tolerance (default 1e-6)")
        p.add_argument("--max-sweeps", type=int, default=None,
                       help="QR sweep cap override (default 100 per dimension)")
        p.add_argument("-o", "--output", default=None, help="write the report here instead of stdout")

    p = sub.add_parser("spectrum", help="eigenspheres of a matrix")
    p.add_argument("-i", "--input", required=True, help="matrix JSON file")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    common(p)
    p.set_defaults(func=_cmd_spectrum)

    p = sub.add_parser("resolvent", help="membership certificate and kernel at one quaternion")
    p.add_argument("-i", "--input", required=True, help="matrix JSON file")
    p.add_argument("--q", required=True, help='quaternion as "w,x,y,z"')
    common(p)
    p.set_defaults(func=_cmd_resolvent)

    p = sub.add_parser("commutator", help="commutator spectrum checks for a pair")
    p.add_argument("--left", required=True, help="left operator JSON file")
    p.add_argument("--right", required=True, help="right operator JSON file")
    common(p)
    p.set_defaults(func=_cmd_commutator)

    p = sub.add_parser("berberian", help="shift extension certificate and decay table")
    p.add_argument("--operator", default="unilateral-shift",
                   help="operator rule name (unilateral-shift, weighted-shift)")
    p.add_argument("--q", required=True, help='quaternion as "w,x,y,z"')
    p.add_argument("--terms", type=int, default=10_000, help="sequence horizon")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    common(p)
    p.set_defaults(func=_cmd_berberian)

    p = sub.add_parser("check", help="run a seeded verification suite")
    p.add_argument("--suite", required=True, choices=sorted(suites.SUITES))
    p.add_argument("--seed", type=int, default=2024)
    p.add_argument("--grid", type=float, default=0.05,
                   help="grid step for scan-based suites")
    common(p)
    p.set_defaults(func=_cmd_check)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"qspec: parse error: {exc}", file=sys.stderr)
        return 2
    except NoConvergence as exc:
        print(f"qspec: no convergence: {exc}", file=sys.stderr)
        return 3
    except (NotAlmostConvergent, QspecError) as exc:
        print(f"qspec: {exc}", file=sys.stderr)
        return 4
    except ValueError as exc:
        print(f"qspec: invalid argument: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
