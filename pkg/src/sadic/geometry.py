"""Polynomial maps into Q_p^n, affine subspaces, and degeneracy checkers.

Everything is exact: coefficients live in Z[1/p], evaluation at truncated
points propagates precision, ranks are computed over the rationals, and the
subspace condition on transformed covolumes is checked through the same
structured transform as the lattice module (no dense matrices).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as iproduct
from typing import Sequence

from .lattice import (
    FlowTime,
    LatticeDescription,
    PrimitiveModule,
    covolume,
    enumerate_primitive_modules,
)
from .sarith import PadicPoint, PExact, pexact, pexact_from_fraction
from .flows import flow_times_up_to

__all__ = [
    "PolyMap",
    "AffineSubspace",
    "moment_curve",
    "affine_relations",
    "nonplanarity_check",
    "NonplanarityReport",
    "condition_4_5_check",
    "Condition45Report",
    "load_poly_map",
    "dump_poly_map",
]

Monomial = tuple[int, ...]


@dataclass(frozen=True)
class PolyMap:
    """Map Q_p^d -> Q_p^n with polynomial coordinates over Z[1/p]."""

    p: int
    arity: int  # d
    coords: tuple[dict[Monomial, PExact], ...]

    def __post_init__(self):
        for poly in self.coords:
            for mono, c in poly.items():
                if len(mono) != self.arity or any(e < 0 for e in mono):
                    raise ValueError(f"bad monomial {mono}")
                if c.p != self.p:
                    raise ValueError("coefficient prime mismatch")

    @property
    def dim_out(self) -> int:
        return len(self.coords)

    def degree(self) -> int:
        return max((sum(m) for poly in self.coords for m in poly), default=0)

    def coeff_shift(self) -> int:
        """Worst denominator exponent among coefficients (precision loss)."""
        return max((c.e for poly in self.coords for c in poly.values()), default=0)

    def eval_exact(self, x: Sequence[PExact]) -> tuple[PExact, ...]:
        if len(x) != self.arity:
            raise ValueError("arity mismatch")
        out = []
        for poly in self.coords:
            acc = pexact(self.p, 0)
            for mono, c in poly.items():
                term = c
                for xi, e in zip(x, mono):
                    for _ in range(e):
                        term = term * xi
                acc = acc + term
            out.append(acc)
        return tuple(out)

    def eval_point(self, x: PadicPoint) -> PadicPoint:
        """Evaluate at a truncated point of Z_p^d; precision drops by the
        coefficient denominators."""
        if not x.is_integral():
            raise ValueError("polynomial evaluation expects an integral point")
        vals = self.eval_exact(x.coords)
        new_prec = x.precision - self.coeff_shift()
        if new_prec < 1:
            raise ValueError("precision exhausted by coefficient denominators")
        return PadicPoint(self.p, vals, new_prec)


def moment_curve(p: int, n: int) -> PolyMap:
    """x -> (x, x**2, ..., x**n): the canonical nondegenerate curve."""
    if n < 1:
        raise ValueError("n must be >= 1")
    coords = tuple({(k,): pexact(p, 1)} for k in range(1, n + 1))
    return PolyMap(p, 1, coords)


@dataclass(frozen=True)
class AffineSubspace:
    """Affine subspace x -> offset + matrix @ x with full-rank linear part."""

    p: int
    offset: tuple[PExact, ...]
    matrix: tuple[tuple[PExact, ...], ...]  # n rows, d columns

    def __post_init__(self):
        n = len(self.offset)
        if len(self.matrix) != n:
            raise ValueError("matrix rows must match the offset dimension")
        d = self.dim
        cols = [[self.matrix[i][j].to_fraction() for i in range(n)] for j in range(d)]
        if _rank_fractions(cols) != d:
            raise ValueError("linear part does not have full rank")

    @property
    def ambient(self) -> int:
        return len(self.offset)

    @property
    def dim(self) -> int:
        return len(self.matrix[0]) if self.matrix and self.matrix[0] else 0

    def as_poly_map(self) -> PolyMap:
        d = self.dim
        coords = []
        for i in range(self.ambient):
            poly: dict[Monomial, PExact] = {}
            if not self.offset[i].is_zero():
                poly[(0,) * d] = self.offset[i]
            for j in range(d):
                if not self.matrix[i][j].is_zero():
                    mono = tuple(int(k == j) for k in range(d))
                    poly[mono] = self.matrix[i][j]
            coords.append(poly)
        return PolyMap(self.p, d, tuple(coords))


def _rank_fractions(rows: list[list[Fraction]]) -> int:
    mat = [row[:] for row in rows]
    rank = 0
    cols = len(mat[0]) if mat else 0
    for c in range(cols):
        piv = next((r for r in range(rank, len(mat)) if mat[r][c] != 0), None)
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        inv = 1 / mat[rank][c]
        mat[rank] = [x * inv for x in mat[rank]]
        for r in range(len(mat)):
            if r != rank and mat[r][c]:
                f = mat[r][c]
                mat[r] = [x - f * y for x, y in zip(mat[r], mat[rank])]
        rank += 1
    return rank


def affine_relations(f: PolyMap) -> list[tuple[int, ...]]:
    """Integral vectors (q0, q) with q0 + q . f identically zero.

    Exact left kernel of the coefficient matrix of (1, f_1, ..., f_n) in the
    monomial basis; such a kernel certifies that f maps into a rational
    hyperplane (the degenerate case detectors look for).
    """
    monomials = sorted({m for poly in f.coords for m in poly} | {(0,) * f.arity})
    rows = [[Fraction(int(m == (0,) * f.arity)) for m in monomials]]
    for poly in f.coords:
        rows.append([poly.get(m, pexact(f.p, 0)).to_fraction() for m in monomials])
    # kernel of rows: vectors v with v @ rows = 0
    n_rows = len(rows)
    mat = [row[:] for row in rows]
    # transpose and solve null space of the transpose acting on the left
    at = [[mat[i][j] for i in range(n_rows)] for j in range(len(monomials))]
    kernel = _null_space(at)
    out = []
    for vec in kernel:
        den = 1
        for v in vec:
            den = den * v.denominator // _gcd(den, v.denominator)
        ints = [int(v * den) for v in vec]
        g = 0
        for v in ints:
            g = _gcd(g, v)
        if g:
            ints = [v // g for v in ints]
        out.append(tuple(ints))
    return out


def _gcd(a: int, b: int) -> int:
    a, b = abs(a), abs(b)
    while b:
        a, b = b, a % b
    return a


def _null_space(a: list[list[Fraction]]) -> list[list[Fraction]]:
    """Basis of {x : a @ x = 0} over the rationals."""
    rows = [row[:] for row in a]
    ncols = len(rows[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * ncols
        vec[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            vec[pc] = -rows[i][fc]
        basis.append(vec)
    return basis


@dataclass(frozen=True)
class NonplanarityReport:
    nonplanar: bool
    achieved_rank: int
    expected_rank: int
    witnesses: tuple[tuple[PExact, ...], ...]  # spanning sample points
    samples: int


def nonplanarity_check(
    f: PolyMap,
    center: PadicPoint,
    radius_exp: int,
    samples: int,
    rng: random.Random,
) -> NonplanarityReport:
    """Sample the ball and test whether the rows (1, f(x)) span full rank.

    Rank is computed exactly on the sampled approximants; a shortfall after
    the budget is evidence, not a proof of planarity.
    """
    p = f.p
    if radius_exp < 0:
        raise ValueError("radius exponent must be >= 0")
    expected = f.dim_out + 1
    rows: list[list[Fraction]] = []
    witnesses: list[tuple[PExact, ...]] = []
    rank = 0
    step = p**radius_exp
    box = p ** (center.precision - radius_exp)
    for _ in range(samples):
        x = tuple(
            c + pexact(p, rng.randrange(box) * step)
            for c in center.coords
        )
        vals = f.eval_exact(x)
        row = [Fraction(1)] + [v.to_fraction() for v in vals]
        new_rank = _rank_fractions(rows + [row])
        if new_rank > rank:
            rows.append(row)
            witnesses.append(x)
            rank = new_rank
        if rank == expected:
            break
    return NonplanarityReport(
        nonplanar=rank == expected,
        achieved_rank=rank,
        expected_rank=expected,
        witnesses=tuple(witnesses),
        samples=samples,
    )


@dataclass(frozen=True)
class Condition45Report:
    """Bounded evidence for the covolume floor of the subspace condition."""

    rate: Fraction
    total_time_bound: int
    cells: int
    violations: tuple[dict, ...]
    kernels: tuple[tuple[int, ...], ...]
    precision_failures: int


def condition_4_5_check(
    f: PolyMap,
    rate: Fraction,
    T: int,
    j_values: Sequence[int],
    center: PadicPoint,
    radius_exp: int,
    x_samples: int,
    seed: int,
    module_height: int = 1,
    module_limit: int | None = 40,
    time_stride: int = 1,
) -> Condition45Report:
    """Check sup_x cov(g_t u_f(x) Delta) >= p**(-j * rate * t) over sampled cells.

    Low-height primitive modules of each rank are enumerated and deduplicated;
    flow times run over all exponent patterns with total <= T (optionally
    strided).  A rational-kernel pre-pass flags the degenerate situation the
    floor is expected to fail in.
    """
    rate = Fraction(rate)
    if rate <= 0:
        raise ValueError("rate must be positive")
    p = f.p
    n = f.dim_out
    rng = random.Random(seed)
    kernels = tuple(affine_relations(f))
    # sampled points of the ball, reused across cells
    step = p**radius_exp
    box = p ** (center.precision - radius_exp)
    points = [center]
    for _ in range(max(x_samples - 1, 0)):
        coords = tuple(c + pexact(p, rng.randrange(box) * step) for c in center.coords)
        points.append(PadicPoint(p, coords, center.precision))
    images = [f.eval_point(x) for x in points]

    violations: list[dict] = []
    precision_failures = 0
    cells = 0
    for j in j_values:
        mods = enumerate_primitive_modules(p, n + 1, j, height=module_height, limit=module_limit)
        for idx, time in enumerate(flow_times_up_to(n, T)):
            if idx % time_stride:
                continue
            t = time.total
            for mod in mods:
                cells += 1
                sup_lo = Fraction(0)
                certified = True
                for y in images:
                    cv = covolume(LatticeDescription(y, time), mod)
                    sup_lo = max(sup_lo, cv.lo)
                    certified = certified and cv.certified
                if not certified:
                    precision_failures += 1
                # floor: sup >= p**(-j * rate * t), exactly
                num, den = (j * rate * t).numerator, (j * rate * t).denominator
                holds = sup_lo**den >= Fraction(p) ** (-num)
                if not holds:
                    violations.append(
                        {
                            "rank": j,
                            "time": time.exps,
                            "module": [list(r) for r in mod.int_rows],
                            "sup_cov": sup_lo,
                            "floor_exponent": j * rate * t,
                        }
                    )
    return Condition45Report(
        rate=rate,
        total_time_bound=T,
        cells=cells,
        violations=tuple(violations),
        kernels=kernels,
        precision_failures=precision_failures,
    )


# -- map description files ---------------------------------------------------


def dump_poly_map(f: PolyMap) -> str:
    """Serialize: header line, then one line per monomial term with exact
    mantissa / p-exponent encoding."""
    lines = [f"polymap p={f.p} d={f.arity} n={f.dim_out}"]
    for i, poly in enumerate(f.coords):
        for mono in sorted(poly):
            c = poly[mono]
            exps = " ".join(str(e) for e in mono)
            lines.append(f"{i} {exps} {c.m} {c.e}")
    return "\n".join(lines) + "\n"


def load_poly_map(text: str) -> PolyMap:
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines or not lines[0].startswith("polymap"):
        raise ValueError("expected a 'polymap p=.. d=.. n=..' header")
    head = dict(tok.split("=") for tok in lines[0].split()[1:])
    p, d, n = int(head["p"]), int(head["d"]), int(head["n"])
    coords: list[dict[Monomial, PExact]] = [dict() for _ in range(n)]
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 1 + d + 2:
            raise ValueError(f"bad term line: {ln!r}")
        i = int(parts[0])
        mono = tuple(int(v) for v in parts[1 : 1 + d])
        m, e = int(parts[-2]), int(parts[-1])
        if not 0 <= i < n:
            raise ValueError(f"coordinate index out of range: {ln!r}")
        coords[i][mono] = pexact(p, m, e)
    return PolyMap(p, d, tuple(coords))
