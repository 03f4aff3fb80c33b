"""The reduced Heisenberg fan and the action of ``U_r`` on it, as plot data.

Each point is the joint eigenvalue pair ``(2n, 2|n|(1+2j))`` of ``-iT`` and the
left sublaplacian on the subspace spanned by ``psi_jk^n`` (all ``k``). ``U_r``
moves the point ``(n, j)`` straight up to ``(n, j + r|n|)``.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

from .core import RationalMomentum, central_eigenvalue, sublaplacian_eigenvalue
from .xray import singular_value


@dataclass(frozen=True)
class FanPoint:
    n: int
    j: int

    @property
    def eig_T(self) -> int:
        return central_eigenvalue(self.n)

    @property
    def eig_L(self) -> int:
        return sublaplacian_eigenvalue(self.n, self.j)

    @property
    def ray(self) -> int:
        # rays are labelled from 1 while j starts at 0
        return self.j + 1

    def as_row(self):
        return {"n": self.n, "j": self.j, "eig_T": self.eig_T, "eig_L": self.eig_L, "ray": self.ray}


@dataclass(frozen=True)
class FanArrow:
    source: FanPoint
    target: FanPoint
    r: RationalMomentum

    def as_row(self):
        return {"n": self.source.n, "j_src": self.source.j, "j_dst": self.target.j, "r": str(self.r)}


def fan_points(n_max: int, j_max: int) -> list:
    """Fan points with ``1 <= |n| <= n_max`` and ``0 <= j <= j_max``, ordered by (n, j)."""
    if n_max < 1 or j_max < 0:
        raise ValueError("fan bounds need n_max >= 1 and j_max >= 0")
    ns = [n for n in range(-n_max, n_max + 1) if n != 0]
    return [FanPoint(n, j) for n in ns for j in range(j_max + 1)]


def fan_action(points, r, clip: bool = True) -> list:
    """Arrows of ``U_r`` on ``points``.

    A point gets an arrow when ``r n`` is an integer and the singular value
    is nonzero; kernel modes (e.g. ``(n, j) = (2, 2)`` at ``r = 1``) get none.
    With ``clip`` the target must itself be one of ``points``.
    """
    r = RationalMomentum.coerce(r)
    present = {(p.n, p.j) for p in points}
    arrows = []
    for p in points:
        m = r.shift(p.n)
        if m is None or singular_value(p.n, p.j, r) == 0:
            continue
        target = FanPoint(p.n, p.j + m)
        if clip and (target.n, target.j) not in present:
            continue
        arrows.append(FanArrow(p, target, r))
    return arrows


def points_csv(points) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=["n", "j", "eig_T", "eig_L", "ray"], lineterminator="\n")
    writer.writeheader()
    for p in points:
        writer.writerow(p.as_row())
    return buf.getvalue()


def arrows_csv(arrows) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=["n", "j_src", "j_dst", "r"], lineterminator="\n")
    writer.writeheader()
    for a in arrows:
        writer.writerow(a.as_row())
    return buf.getvalue()


def fan_dict(points, arrows=()) -> dict:
    return {"points": [p.as_row() for p in points], "arrows": [a.as_row() for a in arrows]}
