"""Oracle-equivalence sweep: spectral formulas against direct quadrature."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import RationalMomentum, mode_grid
from .xray import SignalDecomposition, forward_spectral, xray_quadrature

DEFAULT_MOMENTA = ("1", "2", "3", "1/2", "1/3", "2/3")


def sample_points(count: int, seed: int = 0, inner: float = 0.5, outer: float = 1.5):
    """Random points with ``inner <= |z| <= outer`` and uniform ``t``.

    Points near ``z = 0`` are avoided: high-index target modes vanish there
    like ``|z|^(j-k)``, where a relative comparison only measures rounding.
    """
    rng = np.random.default_rng(seed)
    rad = rng.uniform(inner, outer, count)
    ang = rng.uniform(0.0, 2.0 * np.pi, count)
    return rad * np.exp(1j * ang), rng.uniform(0.0, np.pi, count)


@dataclass
class EquivalenceReport:
    checked: int = 0
    worst_relative: float = 0.0
    worst_absolute_at_zero: float = 0.0
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


def oracle_equivalence(
    n_max=4,
    j_max=6,
    k_max=3,
    momenta=DEFAULT_MOMENTA,
    n_points=10,
    s_nodes=4096,
    rel_tol=1e-6,
    abs_tol=1e-8,
    seed=0,
) -> EquivalenceReport:
    """Compare pointwise ``forward_spectral`` with ``xray_quadrature`` on unit modes.

    Where the spectral image is exactly zero the quadrature value must be
    below ``abs_tol``; elsewhere the relative error must be below ``rel_tol``.
    """
    z, t = sample_points(n_points, seed)
    report = EquivalenceReport()
    for r in momenta:
        r = RationalMomentum.coerce(r)
        for mode in mode_grid(n_max, j_max, k_max):
            x = SignalDecomposition.unit(*mode)
            quad = xray_quadrature(x, r, (z, t), s_nodes)
            spec = forward_spectral(x, r).evaluate(z, t)
            report.checked += 1
            zero = spec == 0
            if np.any(zero):
                err = float(np.max(np.abs(quad[zero])))
                report.worst_absolute_at_zero = max(report.worst_absolute_at_zero, err)
                if err > abs_tol:
                    report.failures.append((str(r), tuple(mode), "absolute", err))
            if np.any(~zero):
                err = float(np.max(np.abs(quad - spec)[~zero] / np.abs(spec[~zero])))
                report.worst_relative = max(report.worst_relative, err)
                if err > rel_tol:
                    report.failures.append((str(r), tuple(mode), "relative", err))
    return report
