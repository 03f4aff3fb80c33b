"""JSON serialization of signals and reports.

Signal files look like::

    {"planar": [{"xi": [1.0, 0.0], "amp": [0.5, 0.0]}],
     "modes": [{"n": 1, "j": 0, "k": 0, "amp": [1.0, 0.0]}],
     "r": "1/2"}

``r`` is optional and records the momentum of the transform that produced
the signal. Complex numbers are ``[re, im]`` pairs.
"""

from __future__ import annotations

import json
import math

from .core import ModeIndex, RationalMomentum
from .xray import PlanarAtom, SignalDecomposition


class SignalFormatError(ValueError):
    """A signal file violates the schema; the message names the offending field."""


def _complex_pair(value, where):
    if not (isinstance(value, list) and len(value) == 2):
        raise SignalFormatError(f"{where}: expected [re, im] pair, got {value!r}")
    for part in value:
        if isinstance(part, bool) or not isinstance(part, (int, float)) or not math.isfinite(part):
            raise SignalFormatError(f"{where}: amplitude parts must be finite numbers, got {value!r}")
    return complex(value[0], value[1])


def _integer(entry, key, where):
    if key not in entry:
        raise SignalFormatError(f"{where}.{key}: missing")
    v = entry[key]
    if isinstance(v, bool) or not isinstance(v, int):
        raise SignalFormatError(f"{where}.{key}: expected integer, got {v!r}")
    return v


def parse_signal(text: str, merge: bool = False) -> SignalDecomposition:
    """Parse a signal file.

    Duplicate ``(n, j, k)`` entries are an error unless ``merge`` is set, in
    which case their amplitudes are summed. Plane-wave atoms with equal
    ``xi`` are always summed.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SignalFormatError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise SignalFormatError("top level: expected an object with 'planar' and 'modes'")
    unknown = set(doc) - {"planar", "modes", "r"}
    if unknown:
        raise SignalFormatError(f"top level: unknown field(s) {sorted(unknown)}")

    planar = []
    for i, entry in enumerate(doc.get("planar", [])):
        where = f"planar[{i}]"
        if not isinstance(entry, dict):
            raise SignalFormatError(f"{where}: expected object")
        xi = entry.get("xi")
        if not (isinstance(xi, list) and len(xi) == 2) or not all(
            isinstance(v, (int, float)) and not isinstance(v, bool) and math.isfinite(v) for v in xi
        ):
            raise SignalFormatError(f"{where}.xi: expected two finite numbers, got {xi!r}")
        planar.append(PlanarAtom(tuple(xi), _complex_pair(entry.get("amp"), f"{where}.amp")))

    modes = {}
    for i, entry in enumerate(doc.get("modes", [])):
        where = f"modes[{i}]"
        if not isinstance(entry, dict):
            raise SignalFormatError(f"{where}: expected object")
        n, j, k = (_integer(entry, key, where) for key in ("n", "j", "k"))
        if n == 0:
            raise SignalFormatError(f"{where}.n: must be nonzero")
        if j < 0 or k < 0:
            raise SignalFormatError(f"{where}: j and k must be nonnegative")
        key = ModeIndex(n, j, k)
        amp = _complex_pair(entry.get("amp"), f"{where}.amp")
        if key in modes:
            if not merge:
                raise SignalFormatError(f"{where}: duplicate mode (n={n}, j={j}, k={k})")
            amp += modes[key]
        modes[key] = amp

    momentum = None
    if "r" in doc:
        try:
            momentum = RationalMomentum.parse(doc["r"])
        except ValueError as exc:
            raise SignalFormatError(f"r: {exc}") from None
    return SignalDecomposition(tuple(planar), modes, momentum)


def signal_to_dict(x: SignalDecomposition) -> dict:
    doc = {
        "planar": [{"xi": list(a.xi), "amp": [a.amp.real, a.amp.imag]} for a in x.planar],
        "modes": [
            {"n": m.n, "j": m.j, "k": m.k, "amp": [amp.real, amp.imag]} for m, amp in x.modes.items()
        ],
    }
    if x.momentum is not None:
        doc["r"] = str(x.momentum)
    return doc


def serialize_signal(x: SignalDecomposition) -> str:
    return json.dumps(signal_to_dict(x), indent=2) + "\n"


def _pair(c):
    c = complex(c)
    return [c.real, c.imag]


def zero_report_dict(report) -> dict:
    return {
        "kind": report.kind,
        "order_j": report.order_j,
        "window": list(report.window),
        "step": report.step,
        "zeros": [
            {"lo": b.lo, "hi": b.hi, "witness": b.witness, "order_j": b.order_j, "kind": b.kind}
            for b in report.brackets
        ],
        "suspected_tangencies": [{"x": t.x, "value": t.value} for t in report.tangencies],
    }


def two_radius_dict(report) -> dict:
    return {
        "r1": str(report.r1),
        "r2": str(report.r2),
        "scan": {"j_max": report.j_max, "n_max": report.n_max, "zero_window": report.zero_window, "tol": report.tol},
        "laguerre_ratio_hits": [{"j": j, "zero1": a, "zero2": b} for j, a, b in report.laguerre_ratio_hits],
        "bessel_ratio_hits": [{"zero1": a, "zero2": b} for a, b in report.bessel_ratio_hits],
        "delta_Z_gap": {"modulus": report.gap_modulus, "residues": report.delta_Z_gap},
        "joint_kernel": [{"n": n, "j": j} for n, j in report.joint_kernel],
        "suspected_tangencies": [{"x": t.x, "value": t.value} for t in report.tangencies],
        "verdict": report.verdict,
        "note": "verdict covers the scanned window and orders only",
    }


def reconstruction_dict(result) -> dict:
    return {
        "signal": signal_to_dict(result.signal),
        "per_mode_condition": [
            {"n": m.n, "j": m.j, "k": m.k, "condition": c} for m, c in result.per_mode_condition.items()
        ],
        "unresolved": [{"n": m.n, "j": m.j, "k": m.k} for m in result.unresolved],
        "unresolved_planar": [list(xi) for xi in result.unresolved_planar],
    }


def svd_rows(systems) -> list:
    return [
        {
            "n": s.n,
            "j": s.j,
            "r": str(s.r),
            "s": s.s,
            "phase": _pair(s.phase),
            "target_j": s.target_j,
        }
        for s in systems
    ]


def audit_dict(rows) -> dict:
    return {
        "r": "1",
        "printed_formula": "2 pi sqrt(j!/(j+m)!) m^(m/2) e^(-(i+1) pi m/2) L_j^(m)(m)",
        "rows": [
            {
                "m": row.m,
                "j": row.j,
                "oracle_modulus": row.oracle_modulus,
                "oracle_phase": _pair(row.oracle_phase),
                "quadrature_modulus": row.quadrature_modulus,
                "printed_modulus": row.printed_modulus,
                "ratio": row.ratio,
            }
            for row in rows
        ],
    }


def audit_text(rows) -> str:
    lines = [
        "constant audit at r = 1 (n = m): oracle = 2 pi M^m_{j,j+m}(1, 0), printed = closed form with e^{-(i+1) pi m/2}",
        f"{'m':>3} {'j':>3} {'oracle':>16} {'quadrature':>16} {'printed':>16} {'printed/oracle':>15} {'sign':>5}",
    ]
    for row in rows:
        ratio = "n/a" if row.ratio is None else f"{row.ratio:.10f}"
        sign = "+" if row.oracle_phase.real >= 0 else "-"
        lines.append(
            f"{row.m:>3} {row.j:>3} {row.oracle_modulus:>16.10e} {row.quadrature_modulus:>16.10e} "
            f"{row.printed_modulus:>16.10e} {ratio:>15} {sign:>5}"
        )
    return "\n".join(lines) + "\n"
