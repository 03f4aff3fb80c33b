"""Laguerre polynomials, diagonal Laguerre functions, J0 and zero scanning."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

BRACKET_TOL = 1e-10
# Power series for J0 is used up to this radius; beyond it cancellation in the
# alternating terms costs more than two digits.
J0_SERIES_RADIUS = 6.0


def _check_finite(*values):
    for v in values:
        if not np.all(np.isfinite(v)):
            raise ValueError("non-finite input")


def _check_order(j):
    if isinstance(j, bool) or int(j) != j or j < 0:
        raise ValueError(f"order must be a nonnegative integer, got {j!r}")
    return int(j)


def _scalar_or_array(out, *inputs):
    if all(np.ndim(v) == 0 for v in inputs):
        return out.item()
    return out


def laguerre_eval(j, alpha, x):
    """Generalized Laguerre polynomial ``L_j^(alpha)(x)``.

    Uses the three-term recurrence
    ``(j+1) L_{j+1} = (2j+1+alpha-x) L_j - (j+alpha) L_{j-1}``.
    ``alpha`` and ``x`` broadcast against each other.

    Parameters
    ----------
    j : int
        polynomial degree, ``j >= 0``
    alpha : float or numpy.ndarray
        order parameter
    x : float or numpy.ndarray
        evaluation points

    Returns
    -------
    float or numpy.ndarray
    """
    j = _check_order(j)
    _check_finite(alpha, x)
    a = np.asarray(alpha, dtype=float)
    xx = np.asarray(x, dtype=float)
    prev = np.ones(np.broadcast(a, xx).shape)
    if j == 0:
        return _scalar_or_array(prev, alpha, x)
    cur = 1.0 + a - xx + 0.0 * prev
    for i in range(1, j):
        prev, cur = cur, ((2 * i + 1 + a - xx) * cur - (i + a) * prev) / (i + 1)
    return _scalar_or_array(np.asarray(cur), alpha, x)


def diagonal_laguerre(j, x):
    """Diagonal Laguerre function ``l_j(x) = L_j^(x)(x)``."""
    return laguerre_eval(j, x, x)


def _j0_series(x):
    # sum_k (-1)^k (x^2/4)^k / (k!)^2, terms shrink geometrically once k > |x|/2
    q = -0.25 * x * x
    term = np.ones_like(x)
    total = np.ones_like(x)
    for k in range(1, 80):
        term = term * q / (k * k)
        total = total + term
        if np.all(np.abs(term) < 1e-17 * np.maximum(np.abs(total), 1.0)):
            break
    return total


def j0_trapezoid(x, nodes: int):
    """Trapezoid rule for ``(1/2pi) int_0^{2pi} cos(x cos theta) dtheta``.

    Exponentially accurate in ``nodes`` for the periodic integrand; exposed
    separately so tests can use it as an independent quadrature oracle.
    """
    theta = 2.0 * np.pi * np.arange(nodes) / nodes
    xx = np.asarray(x, dtype=float)
    return np.cos(np.multiply.outer(xx, np.cos(theta))).mean(axis=-1)


def _j0_quadrature(x):
    nodes = 2 * (int(np.max(np.abs(x), initial=0.0)) // 2) + 48
    prev = j0_trapezoid(x, nodes)
    while True:
        nodes *= 2
        cur = j0_trapezoid(x, nodes)
        if np.all(np.abs(cur - prev) < 1e-15):
            return cur
        prev = cur


def bessel_j0(x):
    """Bessel function ``J0(x)``.

    Power series for ``|x| <= 6``; adaptive trapezoid quadrature of the
    integral representation beyond that. Absolute error is below 1e-13 on
    ``|x| <= 100``.
    """
    _check_finite(x)
    xx = np.abs(np.asarray(x, dtype=float))
    out = np.empty_like(xx)
    small = xx <= J0_SERIES_RADIUS
    if np.any(small):
        out[small] = _j0_series(xx[small])
    if np.any(~small):
        out[~small] = _j0_quadrature(xx[~small])
    return _scalar_or_array(out, x)


@dataclass(frozen=True)
class ZeroBracket:
    """A certified sign change ``lo < root < hi``."""

    lo: float
    hi: float
    witness: float
    kind: str
    order_j: Optional[int] = None

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError("bracket requires lo < hi")


@dataclass(frozen=True)
class Tangency:
    """Grid location where the target comes close to zero without a sign change."""

    x: float
    value: float


@dataclass
class ZeroReport:
    kind: str
    window: tuple
    step: float
    order_j: Optional[int] = None
    brackets: list = field(default_factory=list)
    tangencies: list = field(default_factory=list)

    @property
    def zeros(self):
        return [b.witness for b in self.brackets]

    def __len__(self):
        return len(self.brackets)

    def __iter__(self):
        return iter(self.brackets)


def zero_target(kind: str, j: Optional[int] = None) -> Callable:
    """Return the scalar/array function scanned for ``kind``."""
    if kind in ("diagonal_laguerre", "lj"):
        if j is None:
            raise ValueError("diagonal_laguerre scans need an order j")
        j = _check_order(j)
        return lambda x: diagonal_laguerre(j, x)
    if kind in ("bessel_j0", "j0"):
        return bessel_j0
    raise ValueError(f"unknown zero kind {kind!r}")


def _canonical_kind(kind):
    return {"lj": "diagonal_laguerre", "j0": "bessel_j0"}.get(kind, kind)


def bisect_bracket(f, lo, hi, tol=BRACKET_TOL):
    """Shrink a sign-change bracket of ``f`` to width ``<= tol``."""
    flo = np.sign(f(lo))
    fhi = np.sign(f(hi))
    if flo * fhi >= 0:
        raise ValueError(f"no strict sign change on [{lo}, {hi}]")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        fm = np.sign(f(mid))
        if fm == 0:
            # step off the exact zero, keeping a strict sign change
            half = 0.25 * tol
            left, right = max(lo, mid - half), min(hi, mid + half)
            if np.sign(f(left)) == flo and np.sign(f(right)) == fhi:
                return left, right
            fm = flo  # treat as same side; bisection continues on [mid, hi]
        if fm == flo:
            lo = mid
        else:
            hi = mid
    return lo, hi


def _golden_min(f, lo, hi, iters=80):
    """Golden-section minimisation of ``f`` on ``[lo, hi]``; returns (x, f(x))."""
    g = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c, d = b - g * (b - a), a + g * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - g * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + g * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    return x, f(x)


def scan_zeros(kind, window, step, j=None, tol=BRACKET_TOL, tangency_tol=1e-8):
    """Locate zeros of ``l_j`` or ``J0`` on ``window`` by a sign-change scan.

    Every sign change between neighbouring grid points is bisected to a
    bracket of width ``<= tol``. Interior local minima of ``|f|`` that do not
    change sign are refined; if the refined minimum exposes a hidden pair of
    sign changes both zeros are bracketed, otherwise a near-touching minimum
    (``|f| <= tangency_tol`` relative to the neighbouring grid values) is
    reported as a suspected tangency instead of being bisected.

    Parameters
    ----------
    kind : {'diagonal_laguerre', 'lj', 'bessel_j0', 'j0'} or callable
        a callable is scanned as given (reported with kind 'custom')
    window : (float, float)
    step : float
        grid spacing
    j : int, optional
        order of the diagonal Laguerre function

    Returns
    -------
    ZeroReport
    """
    lo, hi = (float(w) for w in window)
    step = float(step)
    _check_finite(lo, hi, step)
    if not lo < hi:
        raise ValueError("window must satisfy lo < hi")
    if step <= 0:
        raise ValueError("step must be positive")
    if callable(kind):
        f, kind = kind, "custom"
    else:
        kind = _canonical_kind(kind)
        f = zero_target(kind, j)
    order = None if j is None or kind != "diagonal_laguerre" else int(j)
    report = ZeroReport(kind=kind, window=(lo, hi), step=step, order_j=order)

    count = int(math.floor((hi - lo) / step + 1e-9))
    xs = lo + step * np.arange(count + 1)
    if xs[-1] < hi:
        xs = np.append(xs, hi)
    vals = np.asarray(f(xs), dtype=float)
    signs = np.sign(vals)

    def add(a, b):
        a, b = bisect_bracket(f, a, b, tol)
        a, b = float(a), float(b)
        report.brackets.append(
            ZeroBracket(lo=a, hi=b, witness=0.5 * (a + b), kind=kind, order_j=order)
        )

    i = 0
    n = len(xs)
    while i < n - 1:
        if signs[i] == 0:
            i += 1
            continue
        k = i + 1
        while k < n and signs[k] == 0:
            k += 1
        if k == n:
            break
        if signs[k] != signs[i]:
            add(xs[i], xs[k])
        elif k > i + 1:
            # touched zero at grid point(s) and came back: even-order zero
            report.tangencies.append(Tangency(x=float(xs[i + 1]), value=0.0))
        i = k

    # hidden double sign changes / tangencies between grid points
    absv = np.abs(vals)
    for i in range(1, n - 1):
        if signs[i - 1] == signs[i] == signs[i + 1] != 0 and absv[i] < absv[i - 1] and absv[i] < absv[i + 1]:
            side = signs[i]
            x, fx = _golden_min(lambda u: side * float(f(u)), xs[i - 1], xs[i + 1])
            scale = max(absv[i - 1], absv[i + 1])
            if fx < 0:
                add(xs[i - 1], x)
                add(x, xs[i + 1])
            elif fx <= tangency_tol * scale:
                report.tangencies.append(Tangency(x=float(x), value=float(side * fx)))

    report.brackets.sort(key=lambda b: b.lo)
    return report
