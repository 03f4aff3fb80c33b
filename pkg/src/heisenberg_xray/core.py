"""Reduced Heisenberg group arithmetic, geodesics, entry functions and the
orthonormal basis ``psi_jk^n`` with quadrature inner products.

Points are ``(z, t)`` with ``z`` complex and ``t`` on the circle ``R / pi Z``.
Functions on the group are plain callables ``f(z, t)`` that broadcast over
numpy arrays.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import numpy as np

from .special_functions import laguerre_eval

PI = math.pi


def reduce_central(t):
    """Reduce a central coordinate into ``[0, pi)``."""
    out = np.mod(t, PI)
    # np.mod can return exactly pi for tiny negative inputs
    out = np.where(out >= PI, 0.0, out)
    return out.item() if np.ndim(out) == 0 else out


def central_distance(t1, t2):
    """Distance between two central coordinates on the circle of length pi."""
    d = np.mod(np.asarray(t1) - np.asarray(t2), PI)
    return np.minimum(d, PI - d)


@dataclass(frozen=True)
class HeisenbergPoint:
    z: complex
    t: float = 0.0

    def __post_init__(self):
        z = complex(self.z)
        t = float(self.t)
        if not (math.isfinite(z.real) and math.isfinite(z.imag) and math.isfinite(t)):
            raise ValueError("point coordinates must be finite")
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "t", reduce_central(t))

    @classmethod
    def identity(cls):
        return cls(0j, 0.0)

    def isclose(self, other, tol=1e-12):
        return abs(self.z - other.z) <= tol and central_distance(self.t, other.t) <= tol

    def __mul__(self, other):
        return group_mul(self, other)


def mul_coords(z1, t1, z2, t2):
    """Vectorized group law on raw coordinates (no reduction of ``t``)."""
    z1 = np.asarray(z1)
    z2 = np.asarray(z2)
    return z1 + z2, t1 + t2 + 0.5 * (z1.real * z2.imag - z1.imag * z2.real)


def group_mul(p: HeisenbergPoint, q: HeisenbergPoint) -> HeisenbergPoint:
    z, t = mul_coords(p.z, p.t, q.z, q.t)
    return HeisenbergPoint(complex(z), float(t))


def group_inv(p: HeisenbergPoint) -> HeisenbergPoint:
    return HeisenbergPoint(-p.z, -p.t)


@dataclass(frozen=True)
class RationalMomentum:
    """Momentum ``r = a/b`` of a closed geodesic, kept in lowest terms.

    ``a`` is the vertical winding number (turns around the central circle) and
    ``b`` the horizontal one (turns around the helix axis) over one period.
    """

    a: int
    b: int = 1

    def __post_init__(self):
        for name in ("a", "b"):
            v = getattr(self, name)
            if isinstance(v, bool) or int(v) != v or v <= 0:
                raise ValueError(f"winding number {name} must be a positive integer, got {v!r}")
        a, b = int(self.a), int(self.b)
        g = math.gcd(a, b)
        object.__setattr__(self, "a", a // g)
        object.__setattr__(self, "b", b // g)

    @classmethod
    def parse(cls, text: str) -> "RationalMomentum":
        """Parse ``"A/B"`` or ``"A"``; decimals and non-positive values are rejected."""
        text = str(text).strip()
        num, sep, den = text.partition("/")
        try:
            a = int(num.strip())
            b = int(den.strip()) if sep else 1
        except ValueError:
            raise ValueError(f"momentum must be a positive rational 'A/B', got {text!r}") from None
        if a <= 0 or b <= 0:
            raise ValueError(f"momentum must be positive, got {text!r}")
        return cls(a, b)

    @classmethod
    def coerce(cls, value) -> "RationalMomentum":
        if isinstance(value, cls):
            return value
        if isinstance(value, Fraction):
            return cls(value.numerator, value.denominator)
        if isinstance(value, int) and not isinstance(value, bool):
            return cls(value, 1)
        if isinstance(value, str):
            return cls.parse(value)
        raise TypeError(f"cannot interpret {value!r} as a rational momentum")

    @property
    def value(self) -> Fraction:
        return Fraction(self.a, self.b)

    @property
    def sqrt_r(self) -> float:
        return math.sqrt(self.a / self.b)

    @property
    def sqrt_ab(self) -> float:
        return math.sqrt(self.a * self.b)

    def period(self) -> float:
        return 2.0 * PI * self.sqrt_ab

    def resolves(self, n: int) -> bool:
        """True when ``r * n`` is an integer."""
        return (self.a * n) % self.b == 0

    def shift(self, n: int):
        """Index shift ``r |n|`` if it is an integer, else ``None``."""
        if not self.resolves(n):
            return None
        return self.a * abs(n) // self.b

    def __str__(self):
        return f"{self.a}/{self.b}" if self.b != 1 else str(self.a)


@dataclass(frozen=True, order=True)
class ModeIndex:
    n: int
    j: int
    k: int

    def __post_init__(self):
        for name in ("n", "j", "k"):
            v = getattr(self, name)
            if isinstance(v, bool) or int(v) != v:
                raise ValueError(f"mode index {name} must be an integer, got {v!r}")
            object.__setattr__(self, name, int(v))
        if self.n == 0:
            raise ValueError("central frequency n must be nonzero")
        if self.j < 0 or self.k < 0:
            raise ValueError("Laguerre indices j, k must be nonnegative")

    def __iter__(self):
        return iter((self.n, self.j, self.k))


def mode_grid(n_max: int, j_max: int, k_max: int) -> list:
    """All modes with ``1 <= |n| <= n_max``, ``j <= j_max``, ``k <= k_max``."""
    ns = [n for n in range(-n_max, n_max + 1) if n != 0]
    return [ModeIndex(n, j, k) for n in ns for j in range(j_max + 1) for k in range(k_max + 1)]


@dataclass(frozen=True)
class QuadratureSpec:
    s_nodes: int = 256
    t_nodes: int = 256
    radial_nodes: int = 120
    angular_nodes: int = 256
    radial_cutoff: float = 8.0

    def __post_init__(self):
        for name in ("s_nodes", "t_nodes", "radial_nodes", "angular_nodes"):
            if int(getattr(self, name)) < 4:
                raise ValueError(f"{name} must be at least 4")
        if not self.radial_cutoff > 0:
            raise ValueError("radial_cutoff must be positive")

    @classmethod
    def for_modes(cls, modes: Iterable[ModeIndex], **kwargs) -> "QuadratureSpec":
        """Default rule with the radial cutoff ``8 / sqrt(min |n|)``."""
        n_min = min(abs(m.n) for m in modes)
        kwargs.setdefault("radial_cutoff", 8.0 / math.sqrt(n_min))
        return cls(**kwargs)


def _log_factorial_ratio(p: int, q: int) -> float:
    """``log(p! / q!)``."""
    return math.lgamma(p + 1) - math.lgamma(q + 1)


def entry_function(h, j: int, k: int, z, t):
    """Entry function ``M_jk^h(z, t)`` of the Schrodinger representation.

    For ``h > 0`` and ``j >= k``::

        sqrt(k!/j!) (sqrt(h) z)^(j-k) L_k^(j-k)(h|z|^2) exp(-h|z|^2/2) exp(2iht)

    and for ``j <= k`` the mirror branch with ``-sqrt(h) conj(z)``. Negative
    ``h`` goes through ``M_jk^h(z, t) = M_jk^|h|(conj z, -t)``.
    """
    if h == 0:
        raise ValueError("h must be nonzero")
    z = np.asarray(z, dtype=complex)
    t = np.asarray(t, dtype=float)
    if h < 0:
        return entry_function(-h, j, k, np.conj(z), -t)
    out = entry_function_scaled(h, j, k, z, t, h * np.abs(z) ** 2)
    return out.item() if np.ndim(out) == 0 else out


def entry_function_scaled(h, j: int, k: int, z, t, x):
    """``M_jk^h(z, t)`` for ``h > 0`` with the Laguerre argument ``x = h|z|^2`` given.

    Lets callers that know ``h|z|^2`` exactly (an integer on the geodesic
    base circle) avoid the rounding of ``|sqrt(h) z|^2``, which would move
    Laguerre zeros off zero.
    """
    sh = math.sqrt(h)
    gauss = np.exp(-0.5 * x + 2j * h * np.asarray(t, dtype=float))
    if j >= k:
        scale = math.exp(0.5 * _log_factorial_ratio(k, j))
        return scale * (sh * z) ** (j - k) * laguerre_eval(k, j - k, x) * gauss
    scale = math.exp(0.5 * _log_factorial_ratio(j, k))
    return scale * (-sh * np.conj(z)) ** (k - j) * laguerre_eval(j, k - j, x) * gauss


def basis_function(mode: ModeIndex, z, t):
    """Orthonormal basis function ``psi_jk^n = sqrt(|n|)/pi * M_jk^n``."""
    n, j, k = mode
    return math.sqrt(abs(n)) / PI * entry_function(n, j, k, z, t)


def basis_callable(mode: ModeIndex) -> Callable:
    return lambda z, t: basis_function(mode, z, t)


def geodesic(r: RationalMomentum, s) -> HeisenbergPoint:
    """Point ``gamma_r(s) = (sqrt(r) e^{i s/sqrt(r)}, sqrt(r) s / 2)``."""
    z, t = geodesic_coords(r, s)
    return HeisenbergPoint(complex(z), float(t))


def geodesic_coords(r: RationalMomentum, s):
    """Raw (unreduced) coordinates of ``gamma_r`` at parameters ``s``."""
    r = RationalMomentum.coerce(r)
    sr = r.sqrt_r
    s = np.asarray(s, dtype=float)
    return sr * np.exp(1j * s / sr), 0.5 * sr * s


class QuadratureTruncationWarning(UserWarning):
    """The outermost radial shell carries a non-negligible share of an integral."""


def _planar_nodes(q: QuadratureSpec):
    x, w = np.polynomial.legendre.leggauss(q.radial_nodes)
    rho = 0.5 * q.radial_cutoff * (x + 1.0)
    # polar measure rho drho dphi
    w_rho = 0.5 * q.radial_cutoff * w * rho
    phi = 2.0 * PI * np.arange(q.angular_nodes) / q.angular_nodes
    z = rho[:, None] * np.exp(1j * phi[None, :])
    w_planar = w_rho[:, None] * (2.0 * PI / q.angular_nodes) * np.ones_like(phi)[None, :]
    return z, w_planar


def _central_nodes(q: QuadratureSpec):
    t = PI * np.arange(q.t_nodes) / q.t_nodes
    return t, PI / q.t_nodes


def _check_truncation(shell_abs, total_abs, total):
    scale = max(abs(total), total_abs)
    if scale > 0 and shell_abs > 1e-12 * scale:
        warnings.warn(
            f"outermost radial shell contributes {shell_abs / scale:.3e} of the integral; "
            "increase radial_cutoff",
            QuadratureTruncationWarning,
            stacklevel=3,
        )


def inner_product(f: Callable, g: Callable, q: QuadratureSpec = QuadratureSpec(), chunk=None) -> complex:
    """Quadrature approximation of ``int_0^pi int_C f conj(g) dz dt``.

    Trapezoid rule in ``t`` and in the polar angle, Gauss-Legendre in the
    radius on ``[0, q.radial_cutoff]``. Emits
    :class:`QuadratureTruncationWarning` when the outermost radial node
    carries more than ``1e-12`` of the total.
    """
    return gram_matrix([f], [g], q, chunk)[0, 0]


def gram_matrix(fs: Sequence[Callable], gs: Sequence[Callable] = None, q: QuadratureSpec = QuadratureSpec(), chunk=None):
    """Matrix of inner products ``<f_a, g_b>`` under the rule of :func:`inner_product`.

    Each function is evaluated once per node, so this is much cheaper than
    calling :func:`inner_product` pairwise.
    """
    same = gs is None
    if same:
        gs = fs
    z, w_planar = _planar_nodes(q)
    if chunk is None:
        chunk = max(1, 4_000_000 // ((len(fs) + len(gs)) * z.size))
    ts, w_t = _central_nodes(q)
    out = np.zeros((len(fs), len(gs)), dtype=complex)
    shell = np.zeros_like(out, dtype=float)
    total_abs = np.zeros_like(out, dtype=float)
    for start in range(0, len(ts), chunk):
        tc = ts[start:start + chunk][:, None, None]
        zz = np.broadcast_to(z[None], (tc.shape[0],) + z.shape)
        tt = np.broadcast_to(tc, zz.shape)
        w = np.broadcast_to(w_planar[None] * w_t, zz.shape).reshape(-1)
        fv = np.array([np.broadcast_to(f(zz, tt), zz.shape).reshape(-1) for f in fs])
        gv = fv if same else np.array([np.broadcast_to(g(zz, tt), zz.shape).reshape(-1) for g in gs])
        out += (fv * w) @ gv.conj().T
        total_abs += (np.abs(fv) * w) @ np.abs(gv).T
        # last radial node = last row of the (radial, angular) block
        last = np.zeros(zz.shape, dtype=bool)
        last[:, -1, :] = True
        last = last.reshape(-1)
        shell += np.abs((fv[:, last] * w[last]) @ gv[:, last].conj().T)
    for a in range(out.shape[0]):
        for b in range(out.shape[1]):
            _check_truncation(shell[a, b], total_abs[a, b], out[a, b])
    return out


# Joint eigenvalues of the left sublaplacian, -iT, the right sublaplacian and
# box_r = L + r T^2 on a basis mode. Exact (integers / Fractions).

def sublaplacian_eigenvalue(n: int, j: int) -> int:
    return 2 * abs(n) * (1 + 2 * j)


def right_sublaplacian_eigenvalue(n: int, k: int) -> int:
    return 2 * abs(n) * (1 + 2 * k)


def central_eigenvalue(n: int) -> int:
    """Eigenvalue of ``-iT`` on ``psi_jk^n``."""
    return 2 * n


def box_eigenvalue(n: int, j: int, r: RationalMomentum) -> Fraction:
    r = RationalMomentum.coerce(r)
    return 2 * abs(n) * (1 + 2 * (j - abs(n) * r.value))
