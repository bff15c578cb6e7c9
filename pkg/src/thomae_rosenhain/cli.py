"""Command-line interface.

Exit codes: 0 success, 1 identity failure, 2 usage or parse error,
3 numerical or validation failure. All output is JSON with complex numbers
written as ``[re, im]``.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import rosenhain as rh
from .characteristics import Characteristic
from .curve import CurveError, HyperellipticCurve
from .periods import QuadratureError, complex_matrix_json, compute_periods
from .riemann_theta import SiegelError, SiegelMatrix, ThetaConvergenceError, ThetaTable, theta, \
    theta_gradient
from .suites import SUITES, Context, SuiteError, run_suite, summary_line
from .thomae import fit_root_of_unity

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _read_json(path: str):
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed JSON in {path}: {exc}") from exc


def _read_curve(path: str) -> HyperellipticCurve:
    return HyperellipticCurve.from_json(_read_json(path))


def _parse_complex_matrix(data) -> np.ndarray:
    try:
        arr = np.asarray(data, dtype=float)
    except (TypeError, ValueError) as exc:
        raise UsageError("matrix must be nested [re, im] pairs") from exc
    if arr.ndim != 3 or arr.shape[-1] != 2:
        raise UsageError("matrix must be a square array of [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]


def _read_tau_file(path: str):
    """Return ``(tau, a_matrix or None)`` from a tau or periods JSON file."""
    data = _read_json(path)
    if isinstance(data, dict) and "tau" in data:
        tau = _parse_complex_matrix(data["tau"])
        a = _parse_complex_matrix(data["a_matrix"]) if "a_matrix" in data else None
    else:
        tau, a = _parse_complex_matrix(data), None
    if tau.shape[0] != tau.shape[1]:
        raise UsageError("tau must be square")
    return tau, a


def _emit(obj):
    json.dump(obj, sys.stdout, indent=2, sort_keys=False)
    sys.stdout.write("\n")


def cmd_periods(args) -> int:
    curve = _read_curve(args.curve)
    _emit(compute_periods(curve, args.quad_tol).to_json())
    return EXIT_OK


def cmd_theta(args) -> int:
    tau, _ = _read_tau_file(args.tau)
    tau = SiegelMatrix(tau)
    try:
        c = Characteristic.parse(args.char)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if c.genus != tau.genus:
        raise UsageError("characteristic and tau have different genus")
    z = None
    if args.z:
        z = _parse_z(args.z)
        if z.shape != (tau.genus,):
            raise UsageError("z has the wrong length")
    out = {"characteristic": str(c), "parity": "odd" if c.is_odd else "even"}
    value = theta(c, z, tau, args.series_tol)
    out["value"] = [value.real, value.imag]
    if args.gradient:
        if c.is_even and z is None:
            raise UsageError(f"{c} is even; its gradient at z = 0 vanishes identically")
        grad = theta_gradient(c, tau, args.series_tol, z=z, allow_even=True)
        out["gradient"] = [[v.real, v.imag] for v in grad]
    _emit(out)
    return EXIT_OK


def _parse_z(text: str) -> np.ndarray:
    try:
        return np.array([complex(v.replace(" ", "")) for v in text.split(",")])
    except ValueError as exc:
        raise UsageError(f"cannot parse z {text!r}") from exc


def cmd_verify(args) -> int:
    if args.suite not in SUITES + ("all",):
        raise UsageError(f"unknown suite {args.suite!r}; choose from {', '.join(SUITES)} or all")
    curve = _read_curve(args.curve) if args.curve else None
    tau = None
    if args.tau:
        tau, _ = _read_tau_file(args.tau)
        tau = SiegelMatrix(tau)
    if curve is None and tau is None:
        raise UsageError("verify needs a curve file or --tau")
    if args.suite == "rosenhain3" and args.e3 is None:
        raise UsageError("suite 'rosenhain3' needs --e3")
    ctx = Context(curve, tau, args.tol, args.series_tol, args.quad_tol, args.e3)
    results = run_suite(args.suite, ctx)
    out = {"suites": {}}
    ok = True
    for name, reports in results.items():
        line = summary_line(name, reports)
        print(line, file=sys.stderr)
        out["suites"][name] = {"summary": line, "reports": [r.to_json() for r in reports]}
        ok &= all(r.passed for r in reports)
    _emit(out)
    return EXIT_OK if ok else EXIT_FAIL


def _reconstruct(args, tau):
    table = ThetaTable(tau, args.series_tol)
    if args.genus2:
        i, j = args.genus2
        if tau.genus != 2:
            raise UsageError("--genus2 needs a genus-2 tau")
        return rh.a_inverse_genus2(i, j, None, table=table), table
    if tau.genus != 3:
        raise UsageError("--genus3 needs a genus-3 tau")
    if args.e3 is None:
        raise UsageError("--genus3 needs --e3")
    return rh.a_inverse_genus3(None, args.e3, table=table), table


def cmd_reconstruct(args) -> int:
    if not args.genus2 and not args.genus3:
        raise UsageError("choose --genus2 I J or --genus3 --e3 V")
    if args.genus3 and args.e3 is None:
        raise UsageError("--genus3 needs --e3")
    tau, a = _read_tau_file(args.tau)
    tau = SiegelMatrix(tau)
    m, _ = _reconstruct(args, tau)
    out = {"a_inverse": complex_matrix_json(m), "fit": None}
    if a is not None:
        ref = np.linalg.inv(a)
        rep = rh.compare_up_to_root(m, ref, "reconstruct", [], args.tol)
        out["fit"] = rep.to_json()
    _emit(out)
    if out["fit"] is not None and not out["fit"]["pass"]:
        return EXIT_FAIL
    return EXIT_OK


def cmd_recover(args) -> int:
    tau, a = _read_tau_file(args.tau)
    tau = SiegelMatrix(tau)
    table = ThetaTable(tau, args.series_tol)
    if tau.genus == 2:
        e = rh.recover_genus2_branch_points(None, table=table)
        out = {"normalization": "e_1 = 0, e_2 = 1", "branch_points": [v.real for v in e],
               "imaginary_max": float(np.max(np.abs(e.imag)))}
    elif tau.genus == 3:
        if args.e3 is None:
            raise UsageError("genus 3 needs --e3")
        a_inv = rh.a_inverse_genus3(None, args.e3, table=table)
        pts = [0.0, 1.0, args.e3]
        imag = 0.0
        for k in range(4, 8):
            _, neg_sum = rh.recover_genus3_pair(1, k, None, a_inv, table=table)
            pts.append(-neg_sum.real)
            imag = max(imag, abs(neg_sum.imag))
        out = {"normalization": "e_1 = 0, e_2 = 1", "branch_points": pts,
               "imaginary_max": imag}
    else:
        raise UsageError("recovery supports genus 2 and 3")
    _emit(out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="thomae-rosenhain",
        description="Hyperelliptic periods, theta constants and theta-only inverse periods.")
    sub = parser.add_subparsers(dest="command", required=True)

    def tols(p, identity=True, quad=True):
        if identity:
            p.add_argument("--tol", type=float, default=1e-8, help="identity tolerance")
        p.add_argument("--series-tol", type=float, default=1e-12, help="theta series tolerance")
        if quad:
            p.add_argument("--quad-tol", type=float, default=1e-12, help="quadrature tolerance")

    p = sub.add_parser("periods", help="compute A, B and tau for a curve")
    p.add_argument("curve", help='curve JSON {"genus": g, "branch_points": [...]}')
    p.add_argument("--quad-tol", type=float, default=1e-12)
    p.set_defaults(func=cmd_periods)

    p = sub.add_parser("theta", help="evaluate a theta function with characteristic")
    p.add_argument("tau", help="tau JSON (matrix of [re, im] or periods output)")
    p.add_argument("--char", required=True, help='characteristic such as "[11;01]"')
    p.add_argument("--z", help="comma-separated complex argument, e.g. 0.1+0.2j,0")
    p.add_argument("--gradient", action="store_true")
    tols(p, identity=False, quad=False)
    p.set_defaults(func=cmd_theta)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("suite", help=f"one of {', '.join(SUITES)}, all")
    p.add_argument("curve", nargs="?", help="curve JSON")
    p.add_argument("--tau", help="use this tau instead of computing periods (appendix-a)")
    p.add_argument("--e3", type=float, help="normalized e_3 for rosenhain3")
    tols(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("reconstruct", help="theta-only A^{-1} from tau")
    p.add_argument("tau", help="tau JSON (matrix of [re, im] or periods output)")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--genus2", nargs=2, type=int, metavar=("I", "J"))
    group.add_argument("--genus3", action="store_true")
    p.add_argument("--e3", type=float)
    tols(p, quad=False)
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("recover-branch-points", help="branch points of the normalized curve")
    p.add_argument("tau", help="tau JSON (matrix of [re, im] or periods output)")
    p.add_argument("--e3", type=float, help="normalized e_3 (genus 3)")
    tols(p, identity=False, quad=False)
    p.set_defaults(func=cmd_recover)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, SuiteError, CurveError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SiegelError, QuadratureError, ThetaConvergenceError, ArithmeticError,
            np.linalg.LinAlgError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
