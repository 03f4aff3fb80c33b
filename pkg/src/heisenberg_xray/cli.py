"""Command-line interface: ``heisenberg-xray <command> ...``.

Exit status is 0 on success, 1 on invalid input and 2 when ``verify`` finds
a tolerance violation.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

import numpy as np

from . import fan as fan_mod
from .core import RationalMomentum
from .inversion import reconstruct, two_radius_check
from .serialization import (
    audit_dict,
    audit_text,
    parse_signal,
    reconstruction_dict,
    serialize_signal,
    svd_rows,
    two_radius_dict,
    zero_report_dict,
)
from .special_functions import scan_zeros
from .verification import DEFAULT_MOMENTA, oracle_equivalence, sample_points
from .xray import (
    adjoint_quadrature,
    adjoint_spectral,
    constant_audit,
    forward_spectral,
    normal_spectral,
    svd_factors,
    xray_quadrature,
)

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_VERIFY_FAILED = 2


class UsageError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad usage, which is reserved for verify
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _momentum(text):
    try:
        return RationalMomentum.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _point(text):
    try:
        re_, im_, t = (float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"point must be 'z_re,z_im,t', got {text!r}") from None
    return complex(re_, im_), t


def _window(text):
    parts = text.split(",")
    try:
        values = [float(v) for v in parts]
    except ValueError:
        raise argparse.ArgumentTypeError(f"window must be 'HI' or 'LO,HI', got {text!r}") from None
    if len(values) == 1:
        return 0.0, values[0]
    if len(values) == 2:
        return values[0], values[1]
    raise argparse.ArgumentTypeError(f"window must be 'HI' or 'LO,HI', got {text!r}")


def _read_signal(path, merge=False):
    if path in (None, "-"):
        text = sys.stdin.read()
    else:
        with open(path) as fh:
            text = fh.read()
    return parse_signal(text, merge=merge)


def _emit(text, out):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump(doc):
    return json.dumps(doc, indent=2) + "\n"


def _pointwise(signal, r, points, method, quad_points, adjoint=False):
    if points:
        z = np.array([p[0] for p in points])
        t = np.array([p[1] for p in points])
    else:
        z, t = sample_points(5, seed=0)
    if method == "quadrature":
        rule = adjoint_quadrature if adjoint else xray_quadrature
        values = rule(signal, r, (z, t), quad_points)
    else:
        image = adjoint_spectral(signal, r) if adjoint else forward_spectral(signal, r)
        values = np.asarray(image.evaluate(z, t))
    return {
        "r": str(r),
        "method": method,
        "points": [
            {"z": [zz.real, zz.imag], "t": float(tt), "value": [v.real, v.imag]}
            for zz, tt, v in zip(z, t, values)
        ],
        "max_abs": float(np.max(np.abs(values))) if len(values) else 0.0,
    }


def cmd_xray(args):
    signal = _read_signal(args.signal, args.merge)
    if args.method == "quadrature" or args.at:
        return _dump(_pointwise(signal, args.r, args.at, args.method, args.quad_points))
    return serialize_signal(forward_spectral(signal, args.r))


def cmd_adjoint(args):
    signal = _read_signal(args.signal, args.merge)
    if args.method == "quadrature" or args.at:
        return _dump(_pointwise(signal, args.r, args.at, args.method, args.quad_points, adjoint=True))
    return serialize_signal(adjoint_spectral(signal, args.r))


def cmd_normal(args):
    signal = _read_signal(args.signal, args.merge)
    return serialize_signal(normal_spectral(signal, args.r))


def cmd_svd(args):
    if args.n_max < 1 or args.j_max < 0:
        raise UsageError("svd: need --n-max >= 1 and --j-max >= 0")
    systems = [
        svd_factors(n, j, args.r)
        for n in range(-args.n_max, args.n_max + 1)
        if n != 0
        for j in range(args.j_max + 1)
    ]
    rows = svd_rows(systems)
    if args.format == "json":
        return _dump(rows)
    if args.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["n", "j", "r", "s", "phase_re", "phase_im", "target_j"])
        for row in rows:
            tj = "" if row["target_j"] is None else row["target_j"]
            writer.writerow([row["n"], row["j"], row["r"], repr(row["s"]), *row["phase"], tj])
        return buf.getvalue()
    lines = [f"{'n':>4} {'j':>4} {'s':>18} {'phase':>6} {'target_j':>8}"]
    for row in rows:
        phase = "+1" if row["phase"][0] >= 0 else "-1"
        tj = "-" if row["target_j"] is None else str(row["target_j"])
        lines.append(f"{row['n']:>4} {row['j']:>4} {row['s']:>18.12f} {phase:>6} {tj:>8}")
    return "\n".join(lines) + "\n"


def cmd_scan_zeros(args):
    kind = {"lj": "diagonal_laguerre", "j0": "bessel_j0"}[args.kind]
    if kind == "diagonal_laguerre" and args.j is None:
        raise UsageError("scan-zeros: --kind lj needs --j")
    report = scan_zeros(kind, args.window, args.step, j=args.j)
    return _dump(zero_report_dict(report))


def cmd_two_radius(args):
    report = two_radius_check(
        args.r1, args.r2, j_max=args.j_max, n_max=args.n_max, zero_window=args.window, tol=args.tol, step=args.step
    )
    return _dump(two_radius_dict(report))


def cmd_reconstruct(args):
    g1 = _read_signal(args.g1)
    g2 = _read_signal(args.g2) if args.g2 else None
    if g2 is not None and args.r2 is None:
        raise UsageError("reconstruct: --g2 needs --r2")
    result = reconstruct(
        g1, g2, args.r1, args.r2, j_max=args.j_max, n_max=args.n_max, k_max=args.k_max, ridge=args.ridge
    )
    return _dump(reconstruction_dict(result))


def cmd_fan(args):
    points = fan_mod.fan_points(args.n_max, args.j_max)
    arrows = fan_mod.fan_action(points, args.r, clip=not args.no_clip) if args.r else []
    if args.format == "json":
        return _dump(fan_mod.fan_dict(points, arrows))
    if args.table == "arrows":
        if not args.r:
            raise UsageError("fan: --table arrows needs --r")
        return fan_mod.arrows_csv(arrows)
    return fan_mod.points_csv(points)


def cmd_audit(args):
    rows = constant_audit(args.m_max, args.j_max, s_nodes=args.quad_points)
    if args.format == "json":
        return _dump(audit_dict(rows))
    return audit_text(rows)


def cmd_verify(args):
    momenta = args.r or [RationalMomentum.parse(r) for r in DEFAULT_MOMENTA]
    report = oracle_equivalence(
        n_max=args.n_max,
        j_max=args.j_max,
        k_max=args.k_max,
        momenta=momenta,
        n_points=args.points,
        s_nodes=args.quad_points,
        rel_tol=args.rel_tol,
        abs_tol=args.abs_tol,
        seed=args.seed,
    )
    doc = {
        "checked_modes": report.checked,
        "worst_relative": report.worst_relative,
        "worst_absolute_at_zero": report.worst_absolute_at_zero,
        "failures": [{"r": r, "mode": list(m), "kind": k, "error": e} for r, m, k, e in report.failures],
        "passed": report.passed,
    }
    return _dump(doc), (EXIT_OK if report.passed else EXIT_VERIFY_FAILED)


def build_parser():
    parser = _Parser(prog="heisenberg-xray", description="X-ray transform on the reduced Heisenberg group")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_):
        p = sub.add_parser(name, help=help_)
        p.set_defaults(func=func)
        p.add_argument("--out", help="write output to PATH instead of stdout")
        return p

    for name, func, help_ in (
        ("xray", cmd_xray, "apply I_r to a signal"),
        ("adjoint", cmd_adjoint, "apply the adjoint I_r^*"),
    ):
        p = add(name, func, help_)
        p.add_argument("signal", nargs="?", help="signal JSON file (default: stdin)")
        p.add_argument("--r", type=_momentum, required=True, help="momentum A/B")
        p.add_argument("--method", choices=["spectral", "quadrature"], default="spectral")
        p.add_argument("--at", type=_point, action="append", help="evaluation point z_re,z_im,t (repeatable)")
        p.add_argument("--quad-points", type=int, default=4096)
        p.add_argument("--merge", action="store_true", help="sum duplicate modes instead of rejecting them")

    p = add("normal", cmd_normal, "apply N_r = I_r^* I_r")
    p.add_argument("signal", nargs="?")
    p.add_argument("--r", type=_momentum, required=True)
    p.add_argument("--merge", action="store_true")

    p = add("svd", cmd_svd, "table of singular values s(n, j, r)")
    p.add_argument("--r", type=_momentum, required=True)
    p.add_argument("--n-max", type=int, default=2)
    p.add_argument("--j-max", type=int, default=4)
    p.add_argument("--format", choices=["text", "csv", "json"], default="text")

    p = add("scan-zeros", cmd_scan_zeros, "bracket zeros of l_j or J0")
    p.add_argument("--kind", choices=["lj", "j0"], required=True)
    p.add_argument("--j", type=int)
    p.add_argument("--window", type=_window, default=(0.0, 10.0), help="HI or LO,HI")
    p.add_argument("--step", type=float, default=0.01)

    p = add("two-radius", cmd_two_radius, "two-radius compatibility report")
    p.add_argument("--r1", type=_momentum, required=True)
    p.add_argument("--r2", type=_momentum, required=True)
    p.add_argument("--j-max", type=int, default=20)
    p.add_argument("--n-max", type=int, default=100)
    p.add_argument("--window", type=float, default=60.0)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--step", type=float, default=0.01)

    p = add("reconstruct", cmd_reconstruct, "recover a signal from one or two transforms")
    p.add_argument("--g1", required=True)
    p.add_argument("--g2")
    p.add_argument("--r1", type=_momentum, required=True)
    p.add_argument("--r2", type=_momentum)
    p.add_argument("--ridge", type=float, default=0.0)
    p.add_argument("--j-max", type=int, default=4)
    p.add_argument("--n-max", type=int, default=3)
    p.add_argument("--k-max", type=int, default=2)

    p = add("fan", cmd_fan, "Heisenberg fan points and U_r arrows")
    p.add_argument("--n-max", type=int, default=2)
    p.add_argument("--j-max", type=int, default=2)
    p.add_argument("--r", type=_momentum)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--table", choices=["points", "arrows"], default="points", help="which CSV table to emit")
    p.add_argument("--no-clip", action="store_true", help="keep arrows whose target leaves the window")

    p = add("audit", cmd_audit, "compare printed and oracle singular constants")
    p.add_argument("--m-max", type=int, default=6)
    p.add_argument("--j-max", type=int, default=6)
    p.add_argument("--quad-points", type=int, default=4096)
    p.add_argument("--format", choices=["text", "json"], default="text")

    p = add("verify", cmd_verify, "spectral formulas vs quadrature sweep")
    p.add_argument("--n-max", type=int, default=4)
    p.add_argument("--j-max", type=int, default=6)
    p.add_argument("--k-max", type=int, default=3)
    p.add_argument("--r", type=_momentum, action="append", help="momentum to test (repeatable)")
    p.add_argument("--points", type=int, default=10)
    p.add_argument("--quad-points", type=int, default=4096)
    p.add_argument("--rel-tol", type=float, default=1e-6)
    p.add_argument("--abs-tol", type=float, default=1e-8)
    p.add_argument("--seed", type=int, default=0)
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        result = args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    text, code = result if isinstance(result, tuple) else (result, EXIT_OK)
    try:
        _emit(text, args.out)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    return code


if __name__ == "__main__":
    sys.exit(main())
