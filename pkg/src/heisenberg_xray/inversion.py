"""Two-radius compatibility checks and coefficient-space reconstruction."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

from .core import ModeIndex, RationalMomentum, mode_grid
from .special_functions import scan_zeros
from .xray import (
    KERNEL_TOL,
    PlanarAtom,
    SignalDecomposition,
    planar_multiplier,
    singular_coefficient,
)


@dataclass
class TwoRadiusReport:
    """Outcome of a bounded scan for obstructions to recovering ``f`` from
    ``I_{r1} f`` and ``I_{r2} f``.

    Only zeros inside ``[0, zero_window]`` and orders ``j <= j_max`` were
    examined, so ``injective_on_scan`` is a statement about the scan, not a
    proof.
    """

    r1: RationalMomentum
    r2: RationalMomentum
    j_max: int
    n_max: int
    zero_window: float
    tol: float
    laguerre_ratio_hits: list = field(default_factory=list)
    bessel_ratio_hits: list = field(default_factory=list)
    delta_Z_gap: list = field(default_factory=list)
    gap_modulus: int = 1
    joint_kernel: list = field(default_factory=list)
    tangencies: list = field(default_factory=list)

    @property
    def verdict(self) -> str:
        if self.laguerre_ratio_hits or self.bessel_ratio_hits or self.delta_Z_gap or self.joint_kernel:
            return "obstructed"
        return "injective_on_scan"


def _ratio_hits(zeros_a, zeros_b, target, tol):
    hits = []
    for za in zeros_a:
        for zb in zeros_b:
            if zb > 0 and abs(za / zb - target) <= tol * target:
                hits.append((za, zb))
    return hits


def _residue_gap(r1: RationalMomentum, r2: RationalMomentum, n_max: int):
    modulus = r1.b * r2.b // math.gcd(r1.b, r2.b)
    present = {n % modulus for n in range(1, n_max + 1)} | {(-n) % modulus for n in range(1, n_max + 1)}
    gap = sorted(c for c in present if c % r1.b != 0 and c % r2.b != 0)
    return gap, modulus


def two_radius_check(r1, r2, j_max=20, n_max=100, zero_window=60.0, tol=1e-8, step=0.01) -> TwoRadiusReport:
    """Scan for the conditions under which two momenta fail to determine ``f``.

    * ``laguerre_ratio_hits``: triples ``(j, z1, z2)`` of zeros of the same
      diagonal Laguerre function with ``z1 / z2 = r1 / r2`` (relative ``tol``);
    * ``bessel_ratio_hits``: pairs of ``J0`` zeros with ratio ``sqrt(r1/r2)``;
    * ``delta_Z_gap``: residue classes of ``n`` modulo ``lcm(b1, b2)`` for
      which neither ``r1 n`` nor ``r2 n`` is an integer, so both transforms
      annihilate every mode with that ``n``.

    ``joint_kernel`` additionally lists the concrete ``(n, j)`` columns within
    ``|n| <= n_max``, ``j <= j_max`` outside the ``delta_Z_gap`` classes that
    both transforms kill. This catches mixed cases the three lists miss: at
    ``r1 = 2, r2 = 1/2`` the column ``(1, 2)`` dies under ``r1`` by ``l_2(2) = 0``
    and under ``r2`` because ``n / 2`` is not an integer. A nonempty
    ``joint_kernel`` also makes the verdict ``obstructed``.
    """
    r1 = RationalMomentum.coerce(r1)
    r2 = RationalMomentum.coerce(r2)
    if r1 == r2:
        raise ValueError("two-radius check needs distinct momenta")
    if j_max < 0 or n_max < 1 or zero_window <= 0 or tol <= 0 or step <= 0:
        raise ValueError("scan bounds must be positive")
    report = TwoRadiusReport(r1=r1, r2=r2, j_max=j_max, n_max=n_max, zero_window=float(zero_window), tol=tol)

    ratio = float(r1.value / r2.value)
    for j in range(j_max + 1):
        scan = scan_zeros("diagonal_laguerre", (0.0, zero_window), step, j=j)
        report.tangencies.extend(scan.tangencies)
        for za, zb in _ratio_hits(scan.zeros, scan.zeros, ratio, tol):
            report.laguerre_ratio_hits.append((j, za, zb))

    scan = scan_zeros("bessel_j0", (0.0, zero_window), step)
    report.tangencies.extend(scan.tangencies)
    report.bessel_ratio_hits = _ratio_hits(scan.zeros, scan.zeros, math.sqrt(ratio), tol)

    report.delta_Z_gap, report.gap_modulus = _residue_gap(r1, r2, n_max)

    for n in range(1, n_max + 1):
        if n % report.gap_modulus in report.delta_Z_gap:
            continue
        for j in range(j_max + 1):
            if abs(singular_coefficient(n, j, r1)) < KERNEL_TOL and abs(singular_coefficient(n, j, r2)) < KERNEL_TOL:
                report.joint_kernel.extend([(n, j), (-n, j)])
    return report


@dataclass
class ReconstructionResult:
    signal: SignalDecomposition
    per_mode_condition: dict = field(default_factory=dict)
    unresolved: list = field(default_factory=list)
    unresolved_planar: list = field(default_factory=list)


def _check_momentum(g: Optional[SignalDecomposition], r: RationalMomentum, label: str):
    if g is not None and g.momentum is not None and g.momentum != r:
        raise ValueError(f"{label} was produced at r={g.momentum}, not r={r}")


def reconstruct(
    g1: Optional[SignalDecomposition],
    g2: Optional[SignalDecomposition],
    r1,
    r2=None,
    j_max: int = 4,
    n_max: int = 3,
    k_max: int = 2,
    ridge: float = 0.0,
) -> ReconstructionResult:
    """Recover a signal from its transforms at one or two momenta.

    Each candidate mode ``(n, j, k)`` within the bounds is solved from the
    (at most two) measurements it can reach::

        x = sum_i conj(c_i) y_i / (sum_i |c_i|^2 + ridge)

    where ``c_i`` is the singular coefficient at ``r_i`` and ``y_i`` the
    measured amplitude at the shifted index. Modes with every ``|c_i|``
    below ``1e-14`` are reported as unresolved. Plane-wave atoms are divided
    by whichever Bessel multiplier is larger in magnitude.
    """
    if j_max < 0 or n_max < 1 or k_max < 0:
        raise ValueError("reconstruction bounds must satisfy n_max >= 1, j_max >= 0, k_max >= 0")
    if ridge < 0:
        raise ValueError("ridge must be nonnegative")
    r1 = RationalMomentum.coerce(r1)
    r2 = None if r2 is None else RationalMomentum.coerce(r2)
    if g2 is not None and r2 is None:
        raise ValueError("g2 given without r2")
    _check_momentum(g1, r1, "g1")
    if r2 is not None:
        _check_momentum(g2, r2, "g2")
    data = [(g, r) for g, r in ((g1, r1), (g2, r2)) if r is not None]
    data = [(g if g is not None else SignalDecomposition(), r) for g, r in data]

    result = ReconstructionResult(signal=SignalDecomposition())
    modes = {}
    for mode in mode_grid(n_max, j_max, k_max):
        num = 0j
        den = 0.0
        s_max = 0.0
        for g, r in data:
            coef = singular_coefficient(mode.n, mode.j, r)
            if abs(coef) < KERNEL_TOL:
                continue
            m = r.shift(mode.n)
            y = g.modes.get(ModeIndex(mode.n, mode.j + m, mode.k), 0j)
            num += coef.conjugate() * y
            den += abs(coef) ** 2
            s_max = max(s_max, abs(coef))
        if s_max == 0.0:
            result.unresolved.append(mode)
            continue
        result.per_mode_condition[mode] = 1.0 / s_max
        x = num / (den + ridge)
        if x != 0:
            modes[mode] = x

    planar = {}
    for g, r in data:
        for atom in g.planar:
            planar.setdefault(atom.xi, []).append((planar_multiplier(atom.xi, r), atom.amp))
    atoms = []
    for xi, obs in planar.items():
        mult, amp = max(obs, key=lambda pair: abs(pair[0]))
        if abs(mult) < KERNEL_TOL:
            result.unresolved_planar.append(xi)
            continue
        atoms.append(PlanarAtom(xi, mult * amp / (mult * mult + ridge)))
    result.signal = SignalDecomposition(tuple(atoms), modes)
    return result
