"""Vectors over Q_S = Q_p x R through exact Z[1/p] coordinates.

Both places read the same coordinate vector; place divergence enters only
through lazy diagonal scalings by powers of p, applied per place.  Content is
the product of the two per-place sup norms.  Exterior powers are computed as
exact minors, indexed by ascending column subsets in lexicographic order.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .sarith import PExact, pexact

__all__ = ["SPoint", "WedgeVector", "wedge_rows", "wedge", "int_det", "subsets"]


def _ppow(p: int, k: int) -> Fraction:
    return Fraction(p**k) if k >= 0 else Fraction(1, p**-k)


@dataclass(frozen=True)
class SPoint:
    """Exact vector of Q_S^m with per-place diagonal p-power scalings.

    ``inf_shift[i]`` (resp. ``p_shift[i]``) means coordinate i carries an
    implicit factor p**shift at the real (resp. p-adic) place.
    """

    p: int
    coords: tuple[PExact, ...]
    inf_shift: tuple[int, ...] = ()
    p_shift: tuple[int, ...] = ()

    def __post_init__(self):
        if not self.coords:
            raise ValueError("empty vector")
        m = len(self.coords)
        object.__setattr__(self, "inf_shift", tuple(self.inf_shift) or (0,) * m)
        object.__setattr__(self, "p_shift", tuple(self.p_shift) or (0,) * m)
        if len(self.inf_shift) != m or len(self.p_shift) != m:
            raise ValueError("scaling length mismatch")
        for c in self.coords:
            if c.p != self.p:
                raise ValueError("coordinate prime mismatch")

    @property
    def dim(self) -> int:
        return len(self.coords)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coords)

    def norm_inf(self) -> Fraction:
        return max(c.norm_inf() * _ppow(self.p, s) for c, s in zip(self.coords, self.inf_shift))

    def norm_p(self) -> Fraction:
        # |p**s * x|_p = p**(-s) |x|_p
        return max(c.norm_p() * _ppow(self.p, -s) for c, s in zip(self.coords, self.p_shift))

    def content(self) -> Fraction:
        return self.norm_inf() * self.norm_p()

    def scale_inf(self, shifts: Sequence[int]) -> "SPoint":
        new = tuple(a + b for a, b in zip(self.inf_shift, shifts))
        return SPoint(self.p, self.coords, new, self.p_shift)

    def scale_p(self, shifts: Sequence[int]) -> "SPoint":
        new = tuple(a + b for a, b in zip(self.p_shift, shifts))
        return SPoint(self.p, self.coords, self.inf_shift, new)


def subsets(m: int, j: int) -> list[tuple[int, ...]]:
    """Size-j subsets of {0..m-1} in lexicographic order."""
    return list(combinations(range(m), j))


def int_det(rows: list[list[int]]) -> int:
    """Exact determinant of a small square integer matrix (fraction-free)."""
    n = len(rows)
    if n == 0:
        return 1
    a = [row[:] for row in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


@dataclass(frozen=True)
class WedgeVector:
    """Degree-j exterior vector with Plucker coordinates over column subsets."""

    p: int
    ambient: int
    degree: int
    coords: tuple[PExact, ...]  # aligned with subsets(ambient, degree)
    inf_shift: tuple[int, ...] = ()
    p_shift: tuple[int, ...] = ()

    def __post_init__(self):
        count = len(subsets(self.ambient, self.degree))
        if len(self.coords) != count:
            raise ValueError(f"expected {count} coordinates, got {len(self.coords)}")
        object.__setattr__(self, "inf_shift", tuple(self.inf_shift) or (0,) * count)
        object.__setattr__(self, "p_shift", tuple(self.p_shift) or (0,) * count)

    def index(self) -> list[tuple[int, ...]]:
        return subsets(self.ambient, self.degree)

    def coord(self, subset: Sequence[int]) -> PExact:
        return self.coords[self.index().index(tuple(subset))]

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coords)

    def as_spoint(self) -> SPoint:
        return SPoint(self.p, self.coords, self.inf_shift, self.p_shift)

    def norm_inf(self) -> Fraction:
        return self.as_spoint().norm_inf()

    def norm_p(self) -> Fraction:
        return self.as_spoint().norm_p()

    def content(self) -> Fraction:
        return self.as_spoint().content()


def wedge_rows(p: int, rows: Sequence[Sequence[PExact]]) -> WedgeVector:
    """Wedge of j row vectors: Plucker coordinates as exact j x j minors.

    Each row is cleared to integers by a p-power (a unit of Z[1/p], tracked
    back into the coordinate), so the minors reduce to integer determinants.
    """
    j = len(rows)
    if j == 0:
        raise ValueError("empty wedge")
    m = len(rows[0])
    if any(len(r) != m for r in rows):
        raise ValueError("ragged rows")
    cleared = []
    shift = 0
    for row in rows:
        e = max((c.e for c in row), default=0)
        cleared.append([c.m * p ** (e - c.e) for c in row])
        shift += e
    coords = []
    for cols in subsets(m, j):
        minor = int_det([[row[c] for c in cols] for row in cleared])
        coords.append(pexact(p, minor, shift))
    return WedgeVector(p, m, j, tuple(coords))


def wedge(points: Sequence[SPoint]) -> WedgeVector:
    """Wedge of SPoints carrying no scalings (scalings belong to transforms)."""
    if not points:
        raise ValueError("empty wedge")
    p = points[0].p
    for pt in points:
        if any(s != 0 for s in pt.inf_shift) or any(s != 0 for s in pt.p_shift):
            raise ValueError("wedge expects unscaled vectors")
    return wedge_rows(p, [pt.coords for pt in points])
