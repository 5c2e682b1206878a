"""Exact, float-free comparison helpers for powers and logarithms.

Exponent-like quantities in this package are ratios of integer combinations
of logarithms of exact rationals.  Most comparisons reduce to comparing a
product of rational powers against 1, which is exact; genuinely bilinear
cases fall back to rigorous fixed-point interval logarithms refined until
the sign is decided.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

__all__ = [
    "sign_of_power_product",
    "pow_cmp",
    "floor_log",
    "nth_root_floor",
    "log_bounds",
    "safe_float_log",
    "LogLinRatio",
]


def sign_of_power_product(terms: Iterable[tuple[Fraction | int, int]]) -> int:
    """Sign of sum(c * log b) over (b, c) pairs, via exact evaluation of prod b**c."""
    num = 1
    den = 1
    for base, exp in terms:
        b = Fraction(base)
        if b <= 0:
            raise ValueError(f"log of non-positive base {b}")
        if exp >= 0:
            num *= b.numerator**exp
            den *= b.denominator**exp
        else:
            num *= b.denominator**-exp
            den *= b.numerator**-exp
    return (num > den) - (num < den)


def pow_cmp(base: Fraction | int, num: int, den: int, other: Fraction | int) -> int:
    """Sign of base**(num/den) - other, exactly (base, other > 0; den > 0)."""
    if den <= 0:
        raise ValueError("den must be positive")
    lhs = Fraction(base) ** num
    rhs = Fraction(other) ** den
    return (lhs > rhs) - (lhs < rhs)


def floor_log(p: int, x: Fraction | int) -> int:
    """Largest m with p**m <= x (x > 0)."""
    x = Fraction(x)
    if x <= 0:
        raise ValueError("x must be positive")
    est = int((x.numerator.bit_length() - x.denominator.bit_length()) / math.log2(p))
    while Fraction(p) ** est <= x:
        est += 1
    while Fraction(p) ** est > x:
        est -= 1
    return est


def nth_root_floor(x: int, n: int) -> int:
    """Largest z >= 0 with z**n <= x (x >= 0, n >= 1)."""
    if x < 0 or n < 1:
        raise ValueError("need x >= 0 and n >= 1")
    if x == 0:
        return 0
    if n == 1:
        return x
    z = 1 << ((x.bit_length() + n - 1) // n)
    while True:
        zn = ((n - 1) * z + x // z ** (n - 1)) // n
        if zn >= z:
            break
        z = zn
    while z**n > x:
        z -= 1
    return z


def safe_float_log(x: Fraction) -> float:
    """math.log for rationals too large to convert to float."""
    if x <= 0:
        raise ValueError("log of non-positive value")
    num, den = x.numerator, x.denominator
    sn = max(num.bit_length() - 900, 0)
    sd = max(den.bit_length() - 900, 0)
    return math.log(num >> sn) - math.log(den >> sd) + (sn - sd) * math.log(2)


def log_bounds(p: int, x: Fraction | int, bits: int = 32) -> tuple[Fraction, Fraction]:
    """Rational lo <= log_p(x) <= hi with hi - lo <= 2**(1-bits) (x > 0).

    Fixed-point interval squaring: constant word growth per digit, rigorous
    outward rounding throughout.
    """
    x = Fraction(x)
    m = floor_log(p, x)
    r = x / Fraction(p) ** m  # in [1, p)
    guard = bits + 40
    one = 1 << guard
    lo = (r.numerator << guard) // r.denominator
    hi = -((-r.numerator << guard) // r.denominator)
    pfix = p << guard
    acc = Fraction(m)
    for k in range(1, bits + 1):
        lo = (lo * lo) >> guard
        hi = -((-(hi * hi)) >> guard)
        if lo >= pfix:
            acc += Fraction(1, 2**k)
            lo //= p
            hi = -((-hi) // p)
        elif hi < pfix:
            pass
        else:
            # interval straddles the digit boundary: stop with what is certain
            return acc, acc + Fraction(1, 2 ** (k - 1))
        if hi >= (p * p) << guard:
            # drift guard; should not trigger with the chosen word size
            return acc, acc + Fraction(1, 2 ** max(k - 1, 0))
    return acc, acc + Fraction(1, 2**bits)


@dataclass(frozen=True)
class LogLinRatio:
    """Exact exponent of the form (a*log p + b*log H) / (c*log p + d*log H).

    H is an exact rational scale > 0.  Comparisons against rationals, and
    against other ratios whose cross terms stay linear in the logarithms,
    are decided by a single power-product sign; the genuinely bilinear case
    uses refined interval logarithms.
    """

    p: int
    H: Fraction
    num: tuple[int, int]
    den: tuple[int, int]

    def _den_sign(self) -> int:
        c, d = self.den
        return sign_of_power_product([(self.p, c), (self.H, d)])

    def cmp_fraction(self, r: Fraction | int) -> int:
        """Sign of self - r, exactly."""
        r = Fraction(r)
        a, b = self.num
        c, d = self.den
        ds = self._den_sign()
        if ds == 0:
            raise ZeroDivisionError("zero denominator in exponent ratio")
        u, w = r.numerator, r.denominator
        s = sign_of_power_product([(self.p, a * w - u * c), (self.H, b * w - u * d)])
        return s * ds

    def __float__(self) -> float:
        lh = safe_float_log(self.H) / math.log(self.p) if self.H != 1 else 0.0
        a, b = self.num
        c, d = self.den
        den = c + d * lh
        if den == 0:
            return math.inf
        return (a + b * lh) / den

    def cmp(self, other: "LogLinRatio", bits: int = 64, max_bits: int = 1 << 14) -> int:
        """Sign of self - other; 0 only when equality survives max refinement."""
        if self.p != other.p:
            raise ValueError("mixed primes in exponent comparison")
        s1, s2 = self._den_sign(), other._den_sign()
        if s1 == 0 or s2 == 0:
            raise ZeroDivisionError("zero denominator in exponent ratio")
        a1, b1 = self.num
        c1, d1 = self.den
        a2, b2 = other.num
        c2, d2 = other.den
        # cross product in the basis logp*logp, logp*logH1, logp*logH2, logH1*logH2
        pp = a1 * c2 - a2 * c1
        ph1 = b1 * c2 - a2 * d1
        ph2 = a1 * d2 - b2 * c1
        hh = b1 * d2 - b2 * d1
        if self.H == other.H:
            ph = ph1 + ph2
            if hh == 0:
                return sign_of_power_product([(self.p, pp), (self.H, ph)]) * s1 * s2
        elif hh == 0 or self.H == 1 or other.H == 1:
            # the logH1*logH2 term vanishes in each of these cases
            terms = [(self.p, pp)]
            if self.H != 1:
                terms.append((self.H, ph1))
            if other.H != 1:
                terms.append((other.H, ph2))
            return sign_of_power_product(terms) * s1 * s2
        while bits <= max_bits:
            lo1, hi1 = self._bounds(bits)
            lo2, hi2 = other._bounds(bits)
            if lo1 > hi2:
                return 1
            if hi1 < lo2:
                return -1
            bits *= 2
        return 0

    def _bounds(self, bits: int) -> tuple[Fraction, Fraction]:
        if self.H == 1:
            lh_lo = lh_hi = Fraction(0)
        else:
            lh_lo, lh_hi = log_bounds(self.p, self.H, bits)
        a, b = self.num
        c, d = self.den

        def combo(x: int, yc: int) -> tuple[Fraction, Fraction]:
            lo = x + yc * (lh_lo if yc >= 0 else lh_hi)
            hi = x + yc * (lh_hi if yc >= 0 else lh_lo)
            return lo, hi

        nlo, nhi = combo(a, b)
        dlo, dhi = combo(c, d)
        if dlo <= 0:
            raise ZeroDivisionError("exponent denominator not certified positive")
        return nlo / dhi, nhi / dlo
