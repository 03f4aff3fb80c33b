"""The X-ray transform ``I_r`` by direct quadrature and by its explicit
singular value decomposition.

A signal on the reduced Heisenberg group is stored as a
:class:`SignalDecomposition`: plane-wave atoms ``amp * exp(i z.xi)`` for the
part that does not depend on ``t``, and coefficients on the basis
``psi_jk^n`` for the mean-zero part. ``I_r`` maps each piece to itself:

* a plane wave is multiplied by ``2 pi sqrt(ab) J0(sqrt(r) |xi|)``;
* ``psi_jk^n`` goes to ``coef * psi_{j + r|n|, k}^n`` when ``r n`` is an
  integer, and to zero otherwise.

``coef`` is computed through the entry function rather than a hand-expanded
closed form, and every spectral result here can be checked against
:func:`xray_quadrature`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from types import MappingProxyType
from typing import Callable, Mapping, Optional

import numpy as np

from .core import (
    PI,
    HeisenbergPoint,
    ModeIndex,
    RationalMomentum,
    basis_function,
    box_eigenvalue,
    entry_function_scaled,
    geodesic_coords,
    mul_coords,
    sublaplacian_eigenvalue,
)
from .special_functions import bessel_j0, laguerre_eval

KERNEL_TOL = 1e-14


@dataclass(frozen=True)
class PlanarAtom:
    """Plane wave ``amp * exp(i (x xi_0 + y xi_1))`` with ``z = x + iy``."""

    xi: tuple
    amp: complex = 1.0

    def __post_init__(self):
        xi = tuple(float(v) for v in self.xi)
        if len(xi) != 2:
            raise ValueError("xi must be a 2-vector")
        amp = complex(self.amp)
        if not all(math.isfinite(v) for v in (*xi, amp.real, amp.imag)):
            raise ValueError("planar atom entries must be finite")
        object.__setattr__(self, "xi", xi)
        object.__setattr__(self, "amp", amp)

    @property
    def frequency(self) -> float:
        return math.hypot(*self.xi)

    def evaluate(self, z, t=None):
        z = np.asarray(z, dtype=complex)
        return self.amp * np.exp(1j * (z.real * self.xi[0] + z.imag * self.xi[1]))


def _freeze_modes(modes) -> Mapping:
    items = modes.items() if isinstance(modes, Mapping) else modes
    out = {}
    for key, amp in items:
        key = key if isinstance(key, ModeIndex) else ModeIndex(*key)
        amp = complex(amp)
        if not (math.isfinite(amp.real) and math.isfinite(amp.imag)):
            raise ValueError(f"mode amplitude for {key} is not finite")
        out[key] = out.get(key, 0j) + amp
    return MappingProxyType(out)


def _merge_planar(atoms) -> tuple:
    merged = {}
    for atom in atoms:
        atom = atom if isinstance(atom, PlanarAtom) else PlanarAtom(*atom)
        merged[atom.xi] = merged.get(atom.xi, 0j) + atom.amp
    return tuple(PlanarAtom(xi, amp) for xi, amp in merged.items())


@dataclass(frozen=True)
class SignalDecomposition:
    """Immutable signal: plane-wave atoms plus basis coefficients.

    ``momentum`` optionally records the ``r`` of the transform that produced
    the signal, so measurements can be checked against the momentum a caller
    claims for them.
    """

    planar: tuple = ()
    modes: Mapping = field(default_factory=dict)
    momentum: Optional[RationalMomentum] = None

    def __post_init__(self):
        object.__setattr__(self, "planar", _merge_planar(self.planar))
        object.__setattr__(self, "modes", _freeze_modes(self.modes))
        if self.momentum is not None:
            object.__setattr__(self, "momentum", RationalMomentum.coerce(self.momentum))

    @classmethod
    def unit(cls, n, j, k, amp=1.0) -> "SignalDecomposition":
        return cls(modes={ModeIndex(n, j, k): amp})

    def __eq__(self, other):
        if not isinstance(other, SignalDecomposition):
            return NotImplemented
        return (
            dict(self.modes) == dict(other.modes)
            and {a.xi: a.amp for a in self.planar} == {a.xi: a.amp for a in other.planar}
            and self.momentum == other.momentum
        )

    __hash__ = None

    def __len__(self):
        return len(self.planar) + len(self.modes)

    def __add__(self, other):
        modes = dict(self.modes)
        for key, amp in other.modes.items():
            modes[key] = modes.get(key, 0j) + amp
        return SignalDecomposition(self.planar + other.planar, modes)

    def __rmul__(self, scalar):
        return self.scale(scalar)

    def scale(self, scalar):
        return SignalDecomposition(
            tuple(PlanarAtom(a.xi, scalar * a.amp) for a in self.planar),
            {key: scalar * amp for key, amp in self.modes.items()},
            self.momentum,
        )

    def __sub__(self, other):
        return self + other.scale(-1.0)

    def with_momentum(self, r) -> "SignalDecomposition":
        return SignalDecomposition(self.planar, self.modes, r)

    def norm(self) -> float:
        """Coefficient norm; plane-wave atoms count as orthonormal directions."""
        return math.sqrt(sum(abs(a) ** 2 for a in self.modes.values()) + sum(abs(a.amp) ** 2 for a in self.planar))

    def vdot(self, other) -> complex:
        """Coefficient pairing ``<self, other>``, linear in ``self``."""
        out = sum(amp * np.conj(other.modes.get(key, 0j)) for key, amp in self.modes.items())
        theirs = {a.xi: a.amp for a in other.planar}
        out += sum(a.amp * np.conj(theirs.get(a.xi, 0j)) for a in self.planar)
        return complex(out)

    def max_abs_difference(self, other) -> float:
        diff = self - other
        return max([abs(a) for a in diff.modes.values()] + [abs(a.amp) for a in diff.planar] + [0.0])

    def mode_part(self) -> "SignalDecomposition":
        return SignalDecomposition((), self.modes, self.momentum)

    def evaluate(self, z, t):
        """Pointwise value of the synthesized function at ``(z, t)``."""
        z = np.asarray(z, dtype=complex)
        t = np.asarray(t, dtype=float)
        out = np.zeros(np.broadcast(z, t).shape, dtype=complex)
        for atom in self.planar:
            out = out + atom.evaluate(z)
        for mode, amp in self.modes.items():
            out = out + amp * basis_function(mode, z, t)
        return out.item() if out.ndim == 0 else out

    def __call__(self, z, t):
        return self.evaluate(z, t)


def _point_coords(p):
    if isinstance(p, HeisenbergPoint):
        return np.asarray(p.z), np.asarray(p.t), True
    z, t = p
    return np.asarray(z, dtype=complex), np.asarray(t, dtype=float), False


def _path_integral(f, r, p, s_nodes, inverse):
    if s_nodes < 16:
        raise ValueError("s_nodes must be at least 16")
    r = RationalMomentum.coerce(r)
    z, t, scalar = _point_coords(p)
    period = r.period()
    s = period * np.arange(s_nodes) / s_nodes
    gz, gt = geodesic_coords(r, s)
    if inverse:
        gz, gt = -gz, -gt
    zz, tt = mul_coords(z[..., None], t[..., None], gz, gt)
    vals = np.broadcast_to(f(zz, tt), zz.shape)
    out = vals.sum(axis=-1) * (period / s_nodes)
    return complex(out) if scalar else out


def xray_quadrature(f: Callable, r, p, s_nodes: int = 4096):
    """Trapezoid rule for ``I_r f(p) = int_0^{2 pi sqrt(ab)} f(p gamma_r(s)) ds``.

    The integrand is periodic in ``s``, so the rule converges exponentially
    for the smooth functions used here. ``p`` is a :class:`HeisenbergPoint`
    (complex result) or a pair of arrays ``(z, t)`` (array result).
    """
    return _path_integral(f, r, p, s_nodes, inverse=False)


def adjoint_quadrature(f: Callable, r, p, s_nodes: int = 4096):
    """Trapezoid rule for ``I_r^* f(p) = int f(p gamma_r(s)^{-1}) ds``."""
    return _path_integral(f, r, p, s_nodes, inverse=True)


def planar_multiplier(xi, r) -> float:
    """``2 pi sqrt(ab) J0(sqrt(r) |xi|)``, the action of ``I_r`` on a plane wave."""
    r = RationalMomentum.coerce(r)
    freq = math.hypot(*xi) if np.ndim(xi) else abs(float(xi))
    return r.period() * bessel_j0(r.sqrt_r * freq)


def singular_coefficient(n: int, j: int, r) -> complex:
    """Coefficient of ``psi_{j + r|n|, k}^n`` in ``I_r psi_jk^n``.

    Zero when ``r n`` is not an integer; otherwise
    ``2 pi sqrt(ab) M^n_{j, j + r|n|}(sqrt(r), 0)``. The entry function is
    real at ``(sqrt(r), 0)`` and even in ``n``; its Laguerre argument
    ``|n| r = m`` is passed exactly so kernel modes give an exact zero.
    """
    r = RationalMomentum.coerce(r)
    if n == 0:
        raise ValueError("n must be nonzero")
    if j < 0:
        return 0j
    m = r.shift(n)
    if m is None:
        return 0j
    value = entry_function_scaled(abs(n), j, j + m, r.sqrt_r, 0.0, float(m))
    return complex(r.period() * value)


def printed_coefficient(m: int, j: int) -> complex:
    """The closed form ``2 pi sqrt(j!/(j+m)!) m^{m/2} e^{-(i+1) pi m/2} L_j^(m)(m)``.

    Kept only for the constant audit: its modulus differs from the coefficient
    obtained from the entry functions (and from quadrature) by ``e^{-(pi-1)m/2}``.
    """
    m = abs(int(m))
    log_ratio = 0.5 * (math.lgamma(j + 1) - math.lgamma(j + m + 1))
    mod = 2.0 * PI * math.exp(log_ratio) * m ** (m / 2.0) * math.exp(-PI * m / 2.0)
    return mod * np.exp(-0.5j * PI * m) * laguerre_eval(j, m, m)


def _map_modes(x: SignalDecomposition, r, target):
    out = {}
    for mode, amp in x.modes.items():
        hit = target(mode)
        if hit is None:
            continue
        new_mode, coef = hit
        if coef == 0:
            continue
        out[new_mode] = out.get(new_mode, 0j) + coef * amp
    return out


def forward_spectral(x: SignalDecomposition, r) -> SignalDecomposition:
    """``I_r x`` in coefficient form; modes sent to zero are dropped."""
    r = RationalMomentum.coerce(r)

    def target(mode):
        m = r.shift(mode.n)
        if m is None:
            return None
        return ModeIndex(mode.n, mode.j + m, mode.k), singular_coefficient(mode.n, mode.j, r)

    planar = tuple(PlanarAtom(a.xi, planar_multiplier(a.xi, r) * a.amp) for a in x.planar)
    return SignalDecomposition(planar, _map_modes(x, r, target), r)


def adjoint_spectral(y: SignalDecomposition, r) -> SignalDecomposition:
    """``I_r^* y``: shifts ``j`` down by ``r|n|`` with the conjugate coefficient."""
    r = RationalMomentum.coerce(r)

    def target(mode):
        m = r.shift(mode.n)
        if m is None or mode.j - m < 0:
            return None
        src = mode.j - m
        return ModeIndex(mode.n, src, mode.k), np.conj(singular_coefficient(mode.n, src, r))

    planar = tuple(PlanarAtom(a.xi, planar_multiplier(a.xi, r) * a.amp) for a in y.planar)
    return SignalDecomposition(planar, _map_modes(y, r, target))


def normal_spectral(x: SignalDecomposition, r) -> SignalDecomposition:
    """``N_r = I_r^* I_r``, diagonal with eigenvalues ``s(n, j, r)^2``."""
    return adjoint_spectral(forward_spectral(x, r), r)


@dataclass(frozen=True)
class SingularSystem:
    n: int
    j: int
    r: RationalMomentum
    s: float
    phase: complex
    target_j: Optional[int]

    @property
    def mode_visible(self) -> bool:
        return self.s > 0


def svd_factors(n: int, j: int, r) -> SingularSystem:
    """Singular value and unimodular phase of ``I_r`` on the ``(n, j)`` column.

    ``phase`` is 1 when ``s == 0``; ``target_j`` is None when ``r n`` is not
    an integer.
    """
    r = RationalMomentum.coerce(r)
    coef = singular_coefficient(n, j, r)
    s = abs(coef)
    phase = coef / s if s > 0 else 1.0 + 0j
    m = r.shift(n)
    return SingularSystem(n=n, j=j, r=r, s=s, phase=complex(phase), target_j=None if m is None else j + m)


def singular_value(n: int, j: int, r) -> float:
    return abs(singular_coefficient(n, j, r))


def diagonal_factor(x: SignalDecomposition, r) -> SignalDecomposition:
    """``D_r``: scales each mode by its singular value, in place."""
    r = RationalMomentum.coerce(r)
    modes = {}
    for mode, amp in x.modes.items():
        s = singular_value(mode.n, mode.j, r)
        if s > 0:
            modes[mode] = s * amp
    return SignalDecomposition((), modes)


def partial_isometry(x: SignalDecomposition, r) -> SignalDecomposition:
    """``U_r``: moves each visible mode to its target with the unimodular phase.

    Modes with zero singular value are dropped, so ``U_r`` is an isometry on
    the span of visible modes and zero on their complement.
    """
    r = RationalMomentum.coerce(r)
    modes = {}
    for mode, amp in x.modes.items():
        sys = svd_factors(mode.n, mode.j, r)
        if sys.s > 0:
            modes[ModeIndex(mode.n, sys.target_j, mode.k)] = sys.phase * amp
    return SignalDecomposition((), modes)


def intertwining_residual(mode: ModeIndex, r) -> Fraction:
    """``eig_L(source) - eig_box_r(target)`` for the mode's image under ``I_r``.

    The left sublaplacian on the source and ``L + r T^2`` on the target share
    the eigenvalue, so this is exactly zero for every mode ``I_r`` keeps.
    Returns 0 for annihilated modes (nothing to intertwine).
    """
    r = RationalMomentum.coerce(r)
    m = r.shift(mode.n)
    if m is None:
        return Fraction(0)
    return sublaplacian_eigenvalue(mode.n, mode.j) - box_eigenvalue(mode.n, mode.j + m, r)


# Points used to read a coefficient off quadrature values in the audit.
AUDIT_POINTS = (
    HeisenbergPoint(0.31 + 0.17j, 0.4),
    HeisenbergPoint(-0.52 + 0.23j, 1.3),
    HeisenbergPoint(0.12 - 0.61j, 2.2),
    HeisenbergPoint(0.77 + 0.05j, 0.9),
)


def quadrature_coefficient(n: int, j: int, r, k: int = 0, s_nodes: int = 4096, points=AUDIT_POINTS) -> complex:
    """Coefficient of ``I_r psi_jk^n`` on ``psi_{j+r|n|,k}^n`` read off quadrature.

    Least-squares fit of quadrature values of ``I_r psi_jk^n`` at ``points``
    against the target basis function. Independent of the spectral formula.
    """
    r = RationalMomentum.coerce(r)
    m = r.shift(n)
    if m is None:
        return 0j
    z = np.array([p.z for p in points])
    t = np.array([p.t for p in points])
    src = ModeIndex(n, j, k)
    vals = xray_quadrature(lambda zz, tt: basis_function(src, zz, tt), r, (z, t), s_nodes)
    phi = basis_function(ModeIndex(n, j + m, k), z, t)
    return complex(np.vdot(phi, vals) / np.vdot(phi, phi))


@dataclass(frozen=True)
class AuditRow:
    m: int
    j: int
    oracle_coefficient: complex
    quadrature_modulus: float
    printed_modulus: float

    @property
    def oracle_modulus(self) -> float:
        return abs(self.oracle_coefficient)

    @property
    def ratio(self) -> Optional[float]:
        """printed / oracle modulus; None where both vanish."""
        if self.oracle_modulus == 0:
            return None
        return self.printed_modulus / self.oracle_modulus

    @property
    def oracle_phase(self) -> complex:
        return self.oracle_coefficient / self.oracle_modulus if self.oracle_modulus else 1.0 + 0j


def constant_audit(m_max: int = 6, j_max: int = 6, s_nodes: int = 4096) -> list:
    """Compare the entry-function coefficient, quadrature and the printed closed form.

    Rows use ``r = 1`` and ``n = m``, so ``sqrt(ab) = 1`` and the shift is ``m``.
    """
    rows = []
    for m in range(1, m_max + 1):
        for j in range(j_max + 1):
            rows.append(
                AuditRow(
                    m=m,
                    j=j,
                    oracle_coefficient=singular_coefficient(m, j, 1),
                    quadrature_modulus=abs(quadrature_coefficient(m, j, 1, s_nodes=s_nodes)),
                    printed_modulus=abs(printed_coefficient(m, j)),
                )
            )
    return rows
