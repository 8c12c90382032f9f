"""Command-line front end: every subcommand writes CSV with ``#`` header lines.

Exit codes: 0 success, 2 invalid parameters, 3 quadrature convergence failure.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import sys
from typing import Callable, Dict, List, Sequence

import numpy as np

from . import __version__
from .errors import ConvergenceFailure, InvalidParameterError, NotRepresentableError
from .quadrature import QuadRule

__all__ = ["main", "build_parser", "config_hash"]

DEFAULT_BETAS = "0.5,0.6,0.7,0.8,0.9,0.95,0.99,0.999"


def _floats(text: str) -> List[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _ints(text: str) -> List[int]:
    """Comma list or inclusive range ``lo:hi``."""
    try:
        if ":" in text:
            lo, hi = text.split(":")
            return list(range(int(lo), int(hi) + 1))
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected integers or lo:hi, got {text!r}")


def config_hash(config: Dict) -> str:
    blob = json.dumps(config, sort_keys=True, default=str)
    return hashlib.sha256(blob.encode()).hexdigest()


def _rows_csv(header: Sequence[str], rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in r])
    return buf.getvalue()


def _rule_2d(args):
    from .assembly import RULE_2D
    if args.quad_panels is None:
        return RULE_2D
    return QuadRule(RULE_2D.order, RULE_2D.grading, RULE_2D.levels, args.quad_panels,
                    RULE_2D.max_panels)


def _rule_3d(args):
    from .assembly import RULE_3D
    if args.quad_panels is None:
        return RULE_3D
    return QuadRule(RULE_3D.order, RULE_3D.grading, RULE_3D.levels, args.quad_panels,
                    RULE_3D.max_panels)


def _tol(args, default):
    return default if args.tol is None else args.tol


# ------------------------------------------------------------------ commands

def cmd_a_beta(args):
    from .assembly import TOL_2D, a_beta, a_beta_crossing
    tol = _tol(args, TOL_2D)
    if any(not 0 < b < 1 for b in args.betas):
        raise InvalidParameterError("betas must lie in (0, 1)")
    rows = [(b, a_beta(b, tol)) for b in args.betas]
    star = a_beta_crossing(0.5, tol=tol)
    return [f"crossing a=0.5 at beta={star!r}"], _rows_csv(["beta", "a"], rows)


def cmd_symbols(args):
    from .toeplitz import symbol_curve_table, min_theta_h_norm, sup_norm, symbol_series
    notes, rows = [], []
    for M in args.M:
        s = symbol_series(M)
        e = sup_norm(s, "e")
        hmin, th = min_theta_h_norm(s)
        notes.append(f"M={M!r} sup|e|={e.value!r} grid_sup|e|={e.grid_value!r} "
                     f"min_theta sup|h|={hmin!r} at theta={th!r}")
        for r in symbol_curve_table(s, args.n_t, args.n_theta):
            rows.append((M, *r))
    return notes, _rows_csv(["M", "t_over_pi", "two_abs_e_over_M", "four_min_abs_h_over_M",
                             "four_max_abs_h_over_M"], rows)


def cmd_sawtooth(args):
    from .assembly import TOL_2D, galerkin_sawtooth
    from .matrixanalysis import (disc_inclusion_radius, matrix_2norm, numerical_abscissa,
                                 numerical_range)
    tol = _tol(args, TOL_2D)
    Ns = sorted(args.N)
    D = galerkin_sawtooth(args.M, Ns[-1], tol, rule=_rule_2d(args))
    d1 = abs(D.entries[0, 1]) if D.N > 1 else 0.0
    rows = []
    for N in Ns:
        A = D.entries[:N, :N]
        rows.append((args.M, N, matrix_2norm(A), numerical_abscissa(A),
                     disc_inclusion_radius(numerical_range(A, args.angles)), np.sqrt(2) * d1))
    return [f"quad_error={float(D.quad_report)!r}"], _rows_csv(
        ["M", "N", "norm2", "abscissa", "disc_radius", "sqrt2_d1"], rows)


def cmd_strip(args):
    from .assembly import TOL_2D, d_coeffs_strip, sawtooth_coeffs
    tol = _tol(args, TOL_2D)
    base = sawtooth_coeffs(args.M, args.L, tol, rule=_rule_2d(args))
    rows = []
    for a in args.a:
        da = d_coeffs_strip(args.M, a, args.L, tol, rule=_rule_2d(args))
        for l in range(1, args.L + 1):
            up = np.sqrt(1 + (1 + (1 + l) ** 2 / args.M ** 2) / (4 * a * a)) * base[l]
            rows.append((args.M, a, l, base[l], da[l], up, da[l] / base[l] - 1))
    return [], _rows_csv(["M", "a", "l", "d_l", "d_la", "upper", "rel_change"], rows)


def cmd_openbook(args):
    from .assembly import TOL_3D, galerkin_openbook
    from .geometry3d import open_book
    from .matrixanalysis import disc_inclusion_radius, numerical_range
    tol = _tol(args, TOL_3D)
    rows = []
    for th in args.theta:
        book = open_book(th, args.n)
        G = galerkin_openbook(book, tol, rule=_rule_3d(args))
        N = G.N
        off = ~np.eye(N, dtype=bool)
        dev = float(np.max(np.abs(2 * np.abs(G.entries[off]) - 1)))
        rad = disc_inclusion_radius(numerical_range(2 * G.entries, args.angles))
        rows.append((th, args.n, N, book.r1, book.r2, dev, rad, np.sqrt((N - 1) / 2),
                     G.quad_report))
    return [], _rows_csv(["theta", "n", "N", "r1", "r2", "max_dev", "disc_radius_2D",
                          "target", "quad_error"], rows)


def cmd_bn(args):
    from .assembly import b_matrix
    from .matrixanalysis import disc_inclusion_radius, numerical_range, numerical_abscissa, spec_bn
    rows = []
    for N in args.N:
        if N < 1:
            raise InvalidParameterError("N must be >= 1")
        B = b_matrix(N).entries
        spec = " ".join(str(int(v)) for v in spec_bn(N))
        rows.append((N, spec, numerical_abscissa(B),
                     disc_inclusion_radius(numerical_range(B, args.angles))))
    return [], _rows_csv(["N", "spectrum", "abscissa", "disc_radius"], rows)


def cmd_galerkin_demo(args):
    from .assembly import TOL_2D, galerkin_sawtooth
    from .galerkin_lab import adversarial_sequence, coordinate_sequence
    D = galerkin_sawtooth(args.M, args.N, _tol(args, TOL_2D), rule=_rule_2d(args)).entries
    A = 0.5 * np.eye(args.N) + D
    step = args.N // 20 if args.N >= 20 else 1
    base = coordinate_sequence(args.N, range(step, args.N + 1, step))
    res = adversarial_sequence(A, base, args.band, args.shift, args.count,
                               band_start=args.band_start, K=args.angles, seed=args.seed)
    notes = [f"band_start={res.band_start}",
             "rayleigh=" + " ".join(repr(float(abs(r))) for r in res.rayleigh),
             f"sandwich_ok={res.sandwich_ok(base)}"]
    rows = []
    for kind, rep in (("adversarial", res.report), ("base", res.base_report)):
        for r in zip(rep.N, rep.dim, rep.c, rep.err, rep.best_err, rep.M_N):
            rows.append((kind, int(r[0]), int(r[1]), float(r[2]), float(r[3]), float(r[4]),
                         int(r[5])))
    return notes, _rows_csv(["kind", "N", "dim", "c_N", "err", "best_err", "M_N"], rows)


def cmd_weighted(args):
    from .weighted import weighted_csv, weighted_lower_bound
    rows = [weighted_lower_bound(th, args.n, args.P, args.G) for th in args.theta]
    return [], weighted_csv(rows)


# ------------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=None, help="quadrature tolerance")
    common.add_argument("--out", default="-", help="output path ('-' for stdout)")
    common.add_argument("--angles", type=int, default=720, help="numerical-range angles K")
    common.add_argument("--quad-panels", type=int, default=None,
                        help="initial uniform panels per parameter interval")
    common.add_argument("--seed", type=int, default=0)

    p = argparse.ArgumentParser(prog="dlplab", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"dlplab {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("a-beta", parents=[common], help="a(beta) curve and its 1/2 crossing")
    s.add_argument("--betas", type=_floats, default=_floats(DEFAULT_BETAS))
    s.set_defaults(func=cmd_a_beta)

    s = sub.add_parser("symbols", parents=[common], help="sawtooth symbol curves")
    s.add_argument("--M", type=_floats, default=[1.0, 2.0, 4.0])
    s.add_argument("--n-t", type=int, default=200)
    s.add_argument("--n-theta", type=int, default=36)
    s.set_defaults(func=cmd_symbols)

    s = sub.add_parser("sawtooth", parents=[common], help="finite sections of the sawtooth matrix")
    s.add_argument("--M", type=float, default=4.0)
    s.add_argument("--N", type=_ints, default=[3, 10, 50, 200])
    s.set_defaults(func=cmd_sawtooth)

    s = sub.add_parser("strip", parents=[common], help="strip coefficients and their envelope")
    s.add_argument("--M", type=float, default=1.0)
    s.add_argument("--a", type=_floats, default=[1.0, 2.0, 4.0])
    s.add_argument("--L", type=int, default=5)
    s.set_defaults(func=cmd_strip)

    s = sub.add_parser("openbook", parents=[common], help="open-book Galerkin matrices")
    s.add_argument("--theta", type=_floats, default=[0.02])
    s.add_argument("--n", type=int, default=3)
    s.set_defaults(func=cmd_openbook)

    s = sub.add_parser("bn", parents=[common], help="sign matrices B_N")
    s.add_argument("--N", type=_ints, default=list(range(2, 13)))
    s.set_defaults(func=cmd_bn)

    s = sub.add_parser("galerkin-demo", parents=[common], help="adversarial subspace sequence")
    s.add_argument("--M", type=float, default=4.0)
    s.add_argument("--N", type=int, default=200)
    s.add_argument("--band", type=int, default=40)
    s.add_argument("--shift", type=int, default=40)
    s.add_argument("--count", type=int, default=4)
    s.add_argument("--band-start", type=int, default=20)
    s.set_defaults(func=cmd_galerkin_demo)

    s = sub.add_parser("weighted", parents=[common], help="solid-angle lower bound")
    s.add_argument("--theta", type=_floats, default=[0.01])
    s.add_argument("--n", type=int, default=2)
    s.add_argument("--P", type=int, default=360)
    s.add_argument("--G", type=int, default=20)
    s.set_defaults(func=cmd_weighted)
    return p


def _validate(args):
    if args.tol is not None and not args.tol > 0:
        raise InvalidParameterError("--tol must be positive")
    if args.angles < 8:
        raise InvalidParameterError("--angles must be >= 8")
    if args.quad_panels is not None and args.quad_panels < 1:
        raise InvalidParameterError("--quad-panels must be >= 1")


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    config = {k: v for k, v in vars(args).items() if k not in ("func", "out")}
    try:
        _validate(args)
        notes, body = args.func(args)
    except (InvalidParameterError, NotRepresentableError, ValueError) as exc:
        print(f"dlplab: invalid parameters: {exc}", file=sys.stderr)
        return 2
    except ConvergenceFailure as exc:
        print(f"dlplab: quadrature did not converge: {exc}", file=sys.stderr)
        return 3
    head = [f"# dlplab {__version__}", f"# command {args.command}",
            f"# config {json.dumps(config, sort_keys=True, default=str)}",
            f"# config_sha256 {config_hash(config)}"]
    head += [f"# {n}" for n in notes]
    text = "\n".join(head) + "\n" + body
    if args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w") as fh:
            fh.write(text)
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
