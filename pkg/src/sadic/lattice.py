"""Z[1/p]-lattices g_t u_y D^(n+1): covolume, shortest-content search, box search.

The lattice is kept in structured form (flow exponents plus a unipotent point)
and never materialized as a dense matrix.  A transformed vector's p-place norm
is max(p**t |q0 + q.y|_p, ||q||_p) and its real-place norm is
max_i p**(-t_i) |q_i|; the content is their product.

The shortest-content search ranks unit-orbit representatives: content is
invariant under the unit p of Z[1/p], so every orbit of interest has an
integral representative, and for each cancellation depth the candidates form
a congruence sublattice whose weighted shortest vector is computed exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Sequence

from .exactcmp import nth_root_floor
from .reduction import ReductionError, sup_shortest
from .sarith import CertifiedNorm, PadicPoint, PExact, dot_plus, pexact
from .svec import int_det, subsets, wedge_rows
from .zlattice import integer_rank, saturate_rows

__all__ = [
    "FlowTime",
    "LatticeDescription",
    "PrimitiveModule",
    "CertValue",
    "FlowedPoint",
    "DeltaCertificate",
    "SearchBudget",
    "SearchError",
    "PrecisionError",
    "apply_flow",
    "covolume",
    "delta_search",
    "minkowski_search",
    "random_primitive_module",
    "enumerate_primitive_modules",
]


class SearchError(RuntimeError):
    """A search that is guaranteed to succeed found nothing: region bug."""


class PrecisionError(RuntimeError):
    """The point's precision is too small to certify the requested quantity."""


@dataclass(frozen=True, slots=True)
class FlowTime:
    """Multi-parameter flow exponent t = (t_0, ..., t_n), all non-negative."""

    exps: tuple[int, ...]

    def __post_init__(self):
        if any(e < 0 for e in self.exps):
            raise ValueError("flow exponents must be non-negative")

    @property
    def total(self) -> int:
        return sum(self.exps)

    def __len__(self) -> int:
        return len(self.exps)


@dataclass(frozen=True, slots=True)
class LatticeDescription:
    """The lattice g_t u_y D^(n+1), stored in structured form."""

    y: PadicPoint
    time: FlowTime

    def __post_init__(self):
        if len(self.time) != self.y.dim + 1:
            raise ValueError("flow has one more exponent than the point dimension")
        if not self.y.is_integral():
            raise ValueError("lattice operations require an integral point (Z_p coordinates)")

    @property
    def p(self) -> int:
        return self.y.p

    @property
    def n(self) -> int:
        return self.y.dim


@dataclass(frozen=True, slots=True)
class CertValue:
    """An exact value known within [lo, hi]; certified means lo == hi."""

    lo: Fraction
    hi: Fraction

    @property
    def certified(self) -> bool:
        return self.lo == self.hi

    def exact(self) -> Fraction:
        if not self.certified:
            raise PrecisionError(f"value not certified: in [{self.lo}, {self.hi}]")
        return self.lo

    @staticmethod
    def of(x: Fraction) -> "CertValue":
        return CertValue(x, x)


@dataclass(frozen=True, slots=True)
class FlowedPoint:
    """Image of a lattice vector under g_t u_y, as per-place norms and content."""

    qtilde: tuple[PExact, ...]
    inf_norm: Fraction
    p_norm: CertValue
    content: CertValue

    @property
    def certified(self) -> bool:
        return self.content.certified


def _ppow(p: int, k: int) -> Fraction:
    return Fraction(p**k) if k >= 0 else Fraction(1, p**-k)


def apply_flow(L: LatticeDescription, qtilde: Sequence[PExact]) -> FlowedPoint:
    """Per-place norms and content of g_t u_y applied to a Z[1/p] vector."""
    p = L.p
    te = L.time.exps
    t = L.time.total
    if len(qtilde) != L.n + 1:
        raise ValueError(f"expected {L.n + 1} coordinates, got {len(qtilde)}")
    qtilde = tuple(qtilde)
    q0, q = qtilde[0], qtilde[1:]
    if all(c.is_zero() for c in qtilde):
        zero = CertValue.of(Fraction(0))
        return FlowedPoint(qtilde, Fraction(0), zero, zero)
    inf = max(c.norm_inf() * _ppow(p, -ti) for c, ti in zip(qtilde, te))
    qp = max((c.norm_p() for c in q), default=Fraction(0))
    dp = dot_plus(q, L.y, q0)
    pt = _ppow(p, t)
    lo = max(pt * dp.value if dp.certified else Fraction(0), qp)
    hi = max(pt * dp.bound, qp)
    pn = CertValue(lo, hi)
    return FlowedPoint(qtilde, inf, pn, CertValue(lo * inf, hi * inf))


# -- primitive submodules -------------------------------------------------


def _strip_ppow(n: int, p: int) -> int:
    n = abs(n)
    while n and n % p == 0:
        n //= p
    return n


@dataclass(frozen=True)
class PrimitiveModule:
    """Rank-j primitive Z[1/p]-submodule of D^(n+1), stored by basis rows.

    Construction certifies independence and primitivity: after clearing the
    p-power denominators (units of the ring), the gcd of all maximal minors
    must be a power of p.  Non-primitive input is rejected, not saturated.
    """

    p: int
    rows: tuple[tuple[PExact, ...], ...]
    int_rows: tuple[tuple[int, ...], ...] = field(init=False)
    sat_rows: tuple[tuple[int, ...], ...] = field(init=False)

    def __post_init__(self):
        if not self.rows:
            raise ValueError("empty basis")
        m = len(self.rows[0])
        if any(len(r) != m for r in self.rows):
            raise ValueError("ragged basis")
        cleared = []
        for row in self.rows:
            e = max((c.e for c in row), default=0)
            cleared.append(tuple(c.m * self.p ** (e - c.e) for c in row))
        object.__setattr__(self, "int_rows", tuple(cleared))
        j = len(self.rows)
        g = 0
        for cols in combinations(range(m), j):
            minor = int_det([[row[c] for c in cols] for row in cleared])
            g = _gcd(g, minor)
        if g == 0:
            raise ValueError("basis rows are not linearly independent")
        if _strip_ppow(g, self.p) != 1:
            raise ValueError(f"module is not primitive: minor gcd {g} is not a p-power")
        object.__setattr__(self, "sat_rows", tuple(tuple(r) for r in saturate_rows([list(r) for r in cleared])))

    @property
    def rank(self) -> int:
        return len(self.rows)

    @property
    def ambient(self) -> int:
        return len(self.rows[0])

    @classmethod
    def from_int_rows(cls, p: int, rows: Sequence[Sequence[int]]) -> "PrimitiveModule":
        return cls(p, tuple(tuple(pexact(p, c) for c in row) for row in rows))

    def plucker_key(self) -> tuple[int, ...]:
        """Projective Plucker coordinates: integer, coprime, first nonzero positive."""
        j = self.rank
        coords = []
        for cols in combinations(range(self.ambient), j):
            coords.append(int_det([[row[c] for c in cols] for row in self.sat_rows]))
        g = 0
        for c in coords:
            g = _gcd(g, c)
        coords = [c // g for c in coords]
        for c in coords:
            if c:
                if c < 0:
                    coords = [-x for x in coords]
                break
        return tuple(coords)


def _gcd(a: int, b: int) -> int:
    a, b = abs(a), abs(b)
    while b:
        a, b = b, a % b
    return a


def random_primitive_module(p: int, ambient: int, rank: int, rng, height: int = 3) -> PrimitiveModule:
    """Random primitive module: random integer rows, saturated over Z."""
    while True:
        rows = [[rng.randint(-height, height) for _ in range(ambient)] for _ in range(rank)]
        if integer_rank(rows) == rank:
            return PrimitiveModule.from_int_rows(p, saturate_rows(rows))


def enumerate_primitive_modules(p: int, ambient: int, rank: int, height: int = 1, limit: int | None = None) -> list[PrimitiveModule]:
    """Primitive modules spanned by integer bases of bounded height, deduplicated."""
    seen: set[tuple[int, ...]] = set()
    out: list[PrimitiveModule] = []
    cells = product(range(-height, height + 1), repeat=ambient * rank)
    for flat in cells:
        rows = [list(flat[i * ambient : (i + 1) * ambient]) for i in range(rank)]
        if integer_rank(rows) != rank:
            continue
        mod = PrimitiveModule.from_int_rows(p, saturate_rows(rows))
        key = mod.plucker_key()
        if key in seen:
            continue
        seen.add(key)
        out.append(mod)
        if limit is not None and len(out) >= limit:
            break
    return out


# -- covolume --------------------------------------------------------------


def _insert_sign(i: int, js: tuple[int, ...]) -> int:
    """Sign of sorting (i, *js) with js ascending and i not in js."""
    pos = sum(1 for j in js if j < i)
    return -1 if pos % 2 else 1


def covolume(L: LatticeDescription, module: PrimitiveModule) -> CertValue:
    """Content of the wedge of the transformed basis rows, with certification.

    The real place sees max over subsets I of p**(-t_I) |w_I|; the p place
    mixes the 0-subsets with the point's coordinates, which routes through the
    certified dot product.
    """
    p = L.p
    if module.ambient != L.n + 1:
        raise ValueError("module ambient dimension mismatch")
    te = L.time.exps
    t = L.time.total
    w = wedge_rows(p, [tuple(pexact(p, c) for c in row) for row in module.int_rows])
    idx = {s: k for k, s in enumerate(subsets(module.ambient, module.rank))}
    coords = w.coords
    inf = Fraction(0)
    for s, k in idx.items():
        tI = sum(te[i] for i in s)
        inf = max(inf, coords[k].norm_inf() * _ppow(p, -tI))
    pt = _ppow(p, t)
    p_lo = Fraction(0)
    p_hi = Fraction(0)
    for s, k in idx.items():
        if 0 not in s:
            v = coords[k].norm_p()
            p_lo = max(p_lo, v)
            p_hi = max(p_hi, v)
            continue
        js = tuple(i for i in s if i != 0)
        qvec = []
        for i in range(1, module.ambient):
            if i in js:
                qvec.append(pexact(p, 0))
            else:
                wk = coords[idx[tuple(sorted((i, *js)))]]
                qvec.append(wk if _insert_sign(i, js) > 0 else -wk)
        cn = dot_plus(qvec, L.y, coords[k])
        if cn.certified:
            p_lo = max(p_lo, pt * cn.value)
        p_hi = max(p_hi, pt * cn.bound)
    return CertValue(inf * p_lo, inf * p_hi)


# -- shortest-content search ------------------------------------------------


@dataclass(frozen=True)
class SearchBudget:
    """Bounds on the shortest-content search."""

    max_depth: int | None = None  # cap on the cancellation-depth scan
    enum_cap: int = 500_000  # hard cap on exact-enumeration box sizes


@dataclass(frozen=True)
class DeltaCertificate:
    """Result of a shortest-content search.

    ``value`` always bounds the true minimum from above.  ``exhaustive`` is set
    only when the candidate set provably contains a content minimizer, so the
    bound is the exact minimum.
    """

    value: Fraction
    certified: bool
    exhaustive: bool
    minimizer: tuple[PExact, ...]
    lower_bound: Fraction
    region: dict
    visited: int


def _congruence_rows(y: PadicPoint, depth: int) -> list[list[int]]:
    """Integral basis of the vectors with q0 + q.y = 0 mod p**depth."""
    p = y.p
    mod = p**depth
    rows = [[mod] + [0] * y.dim]
    for i, c in enumerate(y.coords):
        row = [(-c.m) % mod] + [0] * y.dim
        row[1 + i] = 1
        rows.append(row)
    return rows


def delta_search(L: LatticeDescription, budget: SearchBudget | None = None) -> DeltaCertificate:
    """Certified search for the minimal content of a nonzero lattice point.

    Content is invariant under the unit p of Z[1/p], so it suffices to rank
    unit-orbit representatives.  For each cancellation depth M <= t the
    integral vectors with |q0 + q.y|_p <= p**(-M) form a sublattice of
    Z^(n+1); its exact minimum in the real-place weighted sup norm, evaluated
    through the flow, dominates every lattice point whose dot product cancels
    to exactly depth M.  Scanning all depths therefore visits a content
    minimizer, and the a-priori floor p**(-t) bounds the result from below.
    """
    budget = budget or SearchBudget()
    p = L.p
    n = L.n
    te = L.time.exps
    t = L.time.total
    y = L.y
    lower = _ppow(p, -t)

    shift = y.approx_shift()
    depth_cap = t if budget.max_depth is None else min(t, budget.max_depth)
    if y.precision - shift <= depth_cap:
        raise PrecisionError(
            f"precision {y.precision} cannot certify depth {depth_cap}: need at least {depth_cap + shift + 1}"
        )

    one = pexact(p, 1)
    zero = pexact(p, 0)

    best_hi: Fraction | None = None
    best_lo: Fraction | None = None
    best_q: tuple[PExact, ...] | None = None
    visited = 0

    def consider(qt: tuple[PExact, ...]) -> None:
        nonlocal best_hi, best_lo, best_q, visited
        visited += 1
        fp = apply_flow(L, qt)
        hi, lo = fp.content.hi, fp.content.lo
        if best_hi is None or hi < best_hi:
            best_hi, best_lo, best_q = hi, lo, qt
        elif hi == best_hi and _frac_key(qt) < _frac_key(best_q):
            best_lo, best_q = lo, qt

    # the q = 0 unit orbit, not covered by the weighted minima below
    consider((-one,) + (zero,) * n)
    consider((one,) + (zero,) * n)

    T = max(te)
    colscale = [p ** (T - ti) for ti in te]
    exhaustive = depth_cap == t
    for depth in range(depth_cap + 1):
        rows = _congruence_rows(y, depth)
        weighted = [[v * s for v, s in zip(row, colscale)] for row in rows]
        try:
            _, minima = sup_shortest(weighted, enum_cap=budget.enum_cap)
        except ReductionError:
            exhaustive = False
            continue
        for vec in minima:
            orig = tuple(pexact(p, v // s) for v, s in zip(vec, colscale))
            consider(orig)

    region = {
        "mode": "congruence-depth scan",
        "depth_cap": depth_cap,
        "total_flow_time": t,
    }
    certified = best_lo == best_hi
    return DeltaCertificate(
        value=best_hi,
        certified=certified,
        exhaustive=exhaustive and certified,
        minimizer=best_q,
        lower_bound=lower,
        region=region,
        visited=visited,
    )


def _frac_key(qt: tuple[PExact, ...]):
    return tuple(c.to_fraction() for c in qt)


# -- constructive Minkowski box search --------------------------------------


def _floor_root_fraction(x: Fraction, j: int) -> int:
    """Largest integer z >= 0 with z**j <= x (x >= 0)."""
    if x < 0:
        raise ValueError("negative bound")
    z = nth_root_floor(x.numerator // x.denominator, j)
    while Fraction((z + 1) ** j) <= x:
        z += 1
    while z > 0 and Fraction(z**j) > x:
        z -= 1
    return z


def _hnf_rows(a: list[list[int]]) -> list[list[int]]:
    """Row-style Hermite form: unimodular row ops only, pivots left to right,
    positive pivots, entries below a pivot zero.  Same row lattice as input."""
    h = [row[:] for row in a]
    rows, cols = len(h), len(h[0])
    r = 0
    for c in range(cols):
        piv = None
        for i in range(r, rows):
            if h[i][c]:
                piv = i
                break
        if piv is None:
            continue
        h[r], h[piv] = h[piv], h[r]
        for i in range(r + 1, rows):
            while h[i][c]:
                q = h[r][c] // h[i][c]
                h[r] = [x - q * y for x, y in zip(h[r], h[i])]
                h[r], h[i] = h[i], h[r]
        if h[r][c] < 0:
            h[r] = [-x for x in h[r]]
        r += 1
        if r == rows:
            break
    return h


def minkowski_search(
    L: LatticeDescription,
    module: PrimitiveModule,
    leaf_cap: int = 20_000_000,
) -> FlowedPoint:
    """Nonzero lattice point with transformed real norm <= cov**(1/j) and p norm <= 1.

    The point is found inside the given primitive module, where the covolume
    bound guarantees existence; its content is then at most cov**(1/rank).
    Failure is a hard error: the box is provably large enough.

    Enumeration runs over a Hermite basis of the saturated integer rows with
    columns ordered by tightness, so every level has an exact coefficient
    range read off the pivot coordinate.
    """
    p = L.p
    te = L.time.exps
    t = L.time.total
    j = module.rank
    cov = covolume(L, module).exact()
    m = module.ambient
    if L.y.precision <= t + L.y.approx_shift():
        raise PrecisionError(f"precision {L.y.precision} cannot certify depth {t}")

    # integer per-coordinate caps: |w_i| <= floor((p**(j t_i) cov)**(1/j))
    caps = [_floor_root_fraction(_ppow(p, j * ti) * cov, j) for ti in te]

    # order columns tightest-first and Hermite-reduce in that order
    perm = sorted(range(m), key=lambda i: caps[i])
    sat_p = [[row[i] for i in perm] for row in module.sat_rows]
    h = _hnf_rows(sat_p)
    pivots = []
    for row in h:
        for c, v in enumerate(row):
            if v:
                pivots.append(c)
                break
    if len(pivots) != j:
        raise SearchError("saturated basis lost rank")
    caps_p = [caps[i] for i in perm]

    mod = p**t
    ymod = [c.m % mod for c in L.y.coords]  # integral approximants
    found: list[tuple[int, ...]] = []
    visited = 0

    def leaf(w: list[int]) -> None:
        nonlocal visited
        visited += 1
        if visited > leaf_cap:
            raise SearchError(f"enumeration exceeded {leaf_cap} leaves")
        if any(abs(v) > c for v, c in zip(w, caps_p)):
            return
        if all(v == 0 for v in w):
            return
        orig = [0] * m
        for k, i in enumerate(perm):
            orig[i] = w[k]
        s = orig[0] + sum(wi * yi for wi, yi in zip(orig[1:], ymod))
        if s % mod == 0:
            found.append(tuple(orig))

    def rec(k: int, w: list[int]) -> None:
        if k == j:
            leaf(w)
            return
        col = pivots[k]
        d = h[k][col]
        r = caps_p[col]
        # exact integer range for |w[col] + c*d| <= r, d > 0
        lo = -((r + w[col]) // d)
        hi = (r - w[col]) // d
        base = [x + lo * y for x, y in zip(w, h[k])]
        for _ in range(hi - lo + 1):
            rec(k + 1, base)
            base = [x + y for x, y in zip(base, h[k])]

    rec(0, [0] * m)
    if not found:
        raise SearchError("no lattice point satisfied the box conditions; region bug")
    w = min(found)
    return apply_flow(L, tuple(pexact(p, v) for v in w))
