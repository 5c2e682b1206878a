"""Exact arithmetic over Z[1/p] with canonical forms and certified p-adic precision.

An element is stored as ``mantissa / p**e`` with ``e >= 0``; p may divide the
mantissa only when ``e == 0``.  Plain integers therefore embed literally and
the p-adic norm of a canonical element is a single valuation read.

Points of Q_p^n are carried at a finite absolute precision N: the true point
agrees with the stored approximant to within p**(-N) in every coordinate.
Every p-adic norm computed through such a point carries a certification flag
instead of silently trusting the truncation.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

DEFAULT_PRECISION = 256

__all__ = [
    "DEFAULT_PRECISION",
    "PExact",
    "PadicPoint",
    "CertifiedNorm",
    "pexact",
    "pexact_from_fraction",
    "pval",
    "dot_plus",
    "zero_point",
    "point_from_coords",
    "haar_point",
    "extend_point",
]


def pval(n: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    if n == 0:
        raise ValueError("valuation of zero is undefined")
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


@dataclass(frozen=True, slots=True)
class PExact:
    """Canonical element of Z[1/p]: value = m / p**e with e >= 0."""

    p: int
    m: int
    e: int

    def __post_init__(self):
        if self.p < 2:
            raise ValueError(f"p must be >= 2, got {self.p}")
        if self.e < 0:
            raise ValueError("canonical form requires e >= 0")
        if self.m == 0 and self.e != 0:
            raise ValueError("zero must be stored as (0, 0)")
        if self.e > 0 and self.m % self.p == 0:
            raise ValueError("p may divide the mantissa only when e == 0")

    # -- queries ---------------------------------------------------------

    def is_zero(self) -> bool:
        return self.m == 0

    def is_integral(self) -> bool:
        return self.e == 0

    def val_p(self) -> int:
        """Valuation v with |x|_p = p**(-v).  Undefined for zero."""
        if self.m == 0:
            raise ValueError("valuation of zero is undefined")
        return (pval(self.m, self.p) if self.e == 0 else 0) - self.e

    def norm_inf(self) -> Fraction:
        return Fraction(abs(self.m), self.p**self.e)

    def norm_p(self) -> Fraction:
        if self.m == 0:
            return Fraction(0)
        v = self.val_p()
        return Fraction(self.p**-v) if v <= 0 else Fraction(1, self.p**v)

    def to_fraction(self) -> Fraction:
        return Fraction(self.m, self.p**self.e)

    # -- arithmetic ------------------------------------------------------

    def __add__(self, other: "PExact") -> "PExact":
        self._check(other)
        e = max(self.e, other.e)
        m = self.m * self.p ** (e - self.e) + other.m * self.p ** (e - other.e)
        return pexact(self.p, m, e)

    def __sub__(self, other: "PExact") -> "PExact":
        return self + (-other)

    def __neg__(self) -> "PExact":
        return PExact(self.p, -self.m, self.e)

    def __mul__(self, other: "PExact") -> "PExact":
        self._check(other)
        return pexact(self.p, self.m * other.m, self.e + other.e)

    def mul_int(self, k: int) -> "PExact":
        return pexact(self.p, self.m * k, self.e)

    def mul_ppow(self, j: int) -> "PExact":
        """Multiply by p**j (a unit of Z[1/p])."""
        return pexact(self.p, self.m, self.e - j)

    def _check(self, other: "PExact") -> None:
        if self.p != other.p:
            raise ValueError(f"mixed primes {self.p} and {other.p}")

    def __repr__(self) -> str:
        if self.e == 0:
            return f"PExact({self.p}, {self.m})"
        return f"PExact({self.p}, {self.m}/{self.p}^{self.e})"


def pexact(p: int, m: int, e: int = 0) -> PExact:
    """Canonicalize m / p**e; negative e multiplies the mantissa by p**(-e)."""
    if m == 0:
        return PExact(p, 0, 0)
    if e < 0:
        m *= p ** (-e)
        e = 0
    if e > 0:
        v = min(pval(m, p), e)
        if v:
            m //= p**v
            e -= v
    return PExact(p, m, e)


def pexact_from_fraction(p: int, x: Fraction | int) -> PExact:
    x = Fraction(x)
    den = x.denominator
    if den == 1:
        return pexact(p, x.numerator, 0)
    e = pval(den, p)
    if p**e != den:
        raise ValueError(f"{x} is not in Z[1/{p}]: denominator {den}")
    return pexact(p, x.numerator, e)


@dataclass(frozen=True, slots=True)
class PadicPoint:
    """Point of Q_p^n known to absolute precision N.

    The true point y satisfies |y_i - coords[i]|_p <= p**(-precision) for
    every i; the precision is shared across coordinates.
    """

    p: int
    coords: tuple[PExact, ...]
    precision: int

    def __post_init__(self):
        if self.precision < 1:
            raise ValueError("precision must be >= 1")
        bound = Fraction(self.p**self.precision)
        for c in self.coords:
            if c.p != self.p:
                raise ValueError("coordinate prime mismatch")
            if not c.is_zero() and c.norm_p() > bound:
                raise ValueError("approximant has junk below precision")

    @property
    def dim(self) -> int:
        return len(self.coords)

    def is_integral(self) -> bool:
        """All coordinates lie in Z_p (at the approximant level)."""
        return all(c.is_zero() or c.val_p() >= 0 for c in self.coords)

    def approx_shift(self) -> int:
        """Largest denominator exponent among the approximants."""
        return max((c.e for c in self.coords), default=0)


@dataclass(frozen=True, slots=True)
class CertifiedNorm:
    """A p-adic norm computed through a truncated point.

    ``certified`` means the value is exactly the true norm; otherwise the
    true norm is only known to be at most ``bound`` (and the computed value
    sits at or below the precision floor).
    """

    value: Fraction
    bound: Fraction
    certified: bool


def dot_plus(q: Sequence[PExact], y: PadicPoint, q0: PExact) -> CertifiedNorm:
    """|q0 + q . y|_p evaluated on the approximant, with certification.

    The truncation error of y is amplified by at most p**shift where shift
    collects the denominator exponents of the multipliers and of the paired
    approximants; the result is certified exactly when the computed valuation
    stays strictly below precision - shift.
    """
    if len(q) != y.dim:
        raise ValueError(f"dimension mismatch: {len(q)} multipliers, {y.dim} coordinates")
    p = y.p
    s = q0
    shift = 0
    for qi, yi in zip(q, y.coords):
        if qi.p != p:
            raise ValueError("multiplier prime mismatch")
        if qi.is_zero():
            continue
        shift = max(shift, qi.e + yi.e)
        s = s + qi * yi
    floor = Fraction(1, p ** (y.precision - shift)) if y.precision > shift else Fraction(p ** (shift - y.precision))
    if s.is_zero():
        return CertifiedNorm(Fraction(0), floor, False)
    norm = s.norm_p()
    if norm > floor:
        return CertifiedNorm(norm, norm, True)
    return CertifiedNorm(norm, floor, False)


# -- point constructors --------------------------------------------------


def zero_point(p: int, n: int, precision: int = DEFAULT_PRECISION) -> PadicPoint:
    zero = PExact(p, 0, 0)
    return PadicPoint(p, (zero,) * n, precision)


def point_from_coords(p: int, coords: Sequence[PExact | Fraction | int], precision: int = DEFAULT_PRECISION) -> PadicPoint:
    out = []
    for c in coords:
        out.append(c if isinstance(c, PExact) else pexact_from_fraction(p, c))
    return PadicPoint(p, tuple(out), precision)


def haar_point(p: int, n: int, precision: int = DEFAULT_PRECISION, rng: random.Random | None = None) -> PadicPoint:
    """Haar-random point of Z_p^n: uniform independent digits up to precision."""
    rng = rng or random.Random()
    box = p**precision
    coords = tuple(pexact(p, rng.randrange(box), 0) for _ in range(n))
    return PadicPoint(p, coords, precision)


def extend_point(y: PadicPoint, extra: int, rng: random.Random) -> PadicPoint:
    """A higher-precision point consistent with y's approximant.

    Adds ``extra`` uniform digits above the current precision; used to test
    that certified norms are stable under refinement.
    """
    if extra < 0:
        raise ValueError("extra must be >= 0")
    box = y.p**extra
    step = pexact(y.p, 1, -y.precision)  # p**precision as a unit of Z[1/p]
    coords = tuple(c + step.mul_int(rng.randrange(box)) for c in y.coords)
    return PadicPoint(y.p, coords, y.precision + extra)
