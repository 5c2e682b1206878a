"""Diophantine exponent estimators, witness searches, and the flow correspondence.

Exponent estimates are always lower bounds carried by explicit witnesses; the
defining suprema are not finitely decidable and no upper-bound claims are made.
All implied exponents are exact log ratios; floats appear only in report
columns.

Two normalization conventions coexist for the Z[1/p] exponent and both are
reported: "flow", the unit-invariant reading that matches the contraction-rate
formula, and "relation", the reading on unit-normalized representatives under
which the classical exponent shifts by exactly one.  The configured convention
is recorded in every report.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .exactcmp import LogLinRatio, floor_log
from .lattice import FlowTime, LatticeDescription, apply_flow, CertValue, FlowedPoint
from .reduction import lll_reduce
from .sarith import CertifiedNorm, PadicPoint, PExact, dot_plus, pexact

__all__ = [
    "Witness",
    "ScaleEntry",
    "ExponentReport",
    "WitnessError",
    "pi_plus",
    "gamma_to_wp",
    "w_search",
    "wp_search",
    "vwma_search",
    "vwma_to_flow",
    "flow_to_vwma",
    "FlowEvent",
    "WitnessConversion",
    "liouville_point",
    "liouville_witnesses",
    "lll_reduce",
]


class WitnessError(RuntimeError):
    """A witness or event failed its exact re-verification."""


def pi_plus(qtilde: Sequence[PExact]) -> Fraction:
    """Product of |q_i| over nonzero coordinates; empty product is 1."""
    out = Fraction(1)
    for c in qtilde:
        if not c.is_zero():
            out *= c.norm_inf()
    return out


def gamma_to_wp(gamma: Fraction, n: int) -> Fraction:
    """Exponent value (n(1+gamma)+gamma) / (1-(n+1)gamma) on [0, 1/(n+1))."""
    gamma = Fraction(gamma)
    if not 0 <= gamma < Fraction(1, n + 1):
        raise ValueError(f"gamma {gamma} outside [0, 1/(n+1))")
    return (n * (1 + gamma) + gamma) / (1 - (n + 1) * gamma)


# -- witnesses ---------------------------------------------------------------


@dataclass(frozen=True)
class Witness:
    """An approximation vector with all achieved norms attached.

    ``dot`` is the certified p-adic norm of q0 + q.y; ``exact_zero`` marks a
    value that vanishes identically at working precision (its class is
    reported separately, never folded into finite exponent estimates).
    """

    qtilde: tuple[PExact, ...]
    norm_inf: Fraction
    qnorm_p: Fraction
    pi: Fraction
    dot: CertifiedNorm
    p: int

    def __post_init__(self):
        if all(c.is_zero() for c in self.qtilde):
            raise ValueError("witness vector must be nonzero")

    @property
    def integral(self) -> bool:
        return all(c.is_integral() for c in self.qtilde)

    @property
    def exact_zero(self) -> bool:
        return self.dot.value == 0

    def valuation(self) -> int:
        """a with |q0 + q.y|_p = p**(-a) (certified)."""
        if not self.dot.certified:
            raise WitnessError("valuation of an uncertified norm")
        return -floor_log(self.p, self.dot.value)

    def proxy(self) -> Fraction:
        """Unboundedness proxy ||q||_p * ||q~||_inf."""
        return self.qnorm_p * self.norm_inf

    # implied exponents, exact

    def v_classical(self) -> LogLinRatio:
        """Exponent v with |q0 + q.y|_p = ||q~||_inf**(-v), for integral q~."""
        a = self.valuation()
        if self.norm_inf <= 1:
            raise WitnessError("degenerate scale: ||q~||_inf <= 1")
        return LogLinRatio(self.p, self.norm_inf, num=(a, 0), den=(0, 1))

    def v_flow_convention(self) -> LogLinRatio:
        """Unit-invariant Z[1/p] exponent (a log p - log H) / (K log p + log H)."""
        a = self.valuation()
        K = floor_log(self.p, self.qnorm_p) if self.qnorm_p else 0
        H = self.norm_inf
        if self.qnorm_p and self.qnorm_p != Fraction(self.p) ** K:
            raise WitnessError("||q||_p is not an exact p power")
        if H * self.qnorm_p <= 1:
            raise WitnessError("degenerate scale: ||q||_p ||q~||_inf <= 1")
        return LogLinRatio(self.p, H, num=(a, -1), den=(K, 1))

    def v_relation_convention(self) -> LogLinRatio:
        """Exponent on the unit-normalized representative, shifted to satisfy
        the classical-to-Z[1/p] relation: (a* log p + log H*) / log H*."""
        a = self.valuation()
        K = floor_log(self.p, self.qnorm_p) if self.qnorm_p else 0
        a_star = a + K
        h_star = self.norm_inf * Fraction(self.p) ** K
        if h_star <= 1:
            raise WitnessError("degenerate scale on the normalized representative")
        return LogLinRatio(self.p, h_star, num=(a_star, 1), den=(0, 1))

    def epsilon(self) -> LogLinRatio:
        """Multiplicative overshoot: |q0 + q.y|_p = Pi_+(q~)**-(1+eps)."""
        a = self.valuation()
        if self.pi <= 1:
            raise WitnessError("degenerate multiplicative scale: Pi_+ <= 1")
        return LogLinRatio(self.p, self.pi, num=(a, -1), den=(0, 1))


def make_witness(y: PadicPoint, qtilde: Sequence[PExact]) -> Witness:
    qtilde = tuple(qtilde)
    q = qtilde[1:]
    dp = dot_plus(q, y, qtilde[0])
    return Witness(
        qtilde=qtilde,
        norm_inf=max(c.norm_inf() for c in qtilde),
        qnorm_p=max((c.norm_p() for c in q), default=Fraction(0)),
        pi=pi_plus(qtilde),
        dot=dp,
        p=y.p,
    )


# -- ladder reports ----------------------------------------------------------


@dataclass(frozen=True)
class ScaleEntry:
    scale: int
    witness: Witness | None
    exponent: LogLinRatio | None
    zero_witness: Witness | None
    floor_hit: bool


@dataclass(frozen=True)
class ExponentReport:
    """Lower-bound exponent estimate with its witness ladder."""

    kind: str  # "w" or "wp"
    convention: str | None
    entries: tuple[ScaleEntry, ...]
    bounds: dict

    def window(self) -> tuple[ScaleEntry, ...]:
        """Top half of the ladder: the scales the estimate is read from."""
        return self.entries[len(self.entries) // 2 :]

    def estimate(self) -> LogLinRatio | None:
        best = None
        for e in self.window():
            if e.exponent is None:
                continue
            if best is None or e.exponent.cmp(best) > 0:
                best = e.exponent
        return best

    def estimate_float(self) -> float | None:
        est = self.estimate()
        return float(est) if est is not None else None

    def estimate_at_least(self, r: Fraction) -> bool:
        est = self.estimate()
        return est is not None and est.cmp_fraction(Fraction(r)) >= 0

    def estimate_at_most(self, r: Fraction) -> bool:
        est = self.estimate()
        return est is not None and est.cmp_fraction(Fraction(r)) <= 0

    def has_zero_witness(self) -> bool:
        return any(e.zero_witness is not None for e in self.entries)


# -- lattice reduction for witness hunting -----------------------------------


def _congruence_basis(y: PadicPoint, depth: int) -> list[list[int]]:
    """Basis of the integral vectors with q0 + q.y = 0 mod p**depth (approximant)."""
    p = y.p
    mod = p**depth
    rows = [[mod] + [0] * y.dim]
    for i, c in enumerate(y.coords):
        if not c.is_integral():
            raise ValueError("witness search requires an integral point")
        row = [(-c.m) % mod] + [0] * y.dim
        row[1 + i] = 1
        rows.append(row)
    return rows


def _short_candidates(y: PadicPoint, depth: int, span: int = 2) -> list[tuple[int, ...]]:
    """Short integral vectors in the depth-d congruence lattice, via reduction."""
    reduced = lll_reduce(_congruence_basis(y, depth))
    dim = len(reduced)
    out: set[tuple[int, ...]] = set()

    def rec(i: int, acc: list[int]):
        if i == dim:
            if any(acc):
                out.add(tuple(acc))
            return
        for u in range(-span, span + 1):
            rec(i + 1, [a + u * r for a, r in zip(acc, reduced[i])])

    rec(0, [0] * (y.dim + 1))
    return sorted(out, key=lambda v: (max(abs(x) for x in v), v))


def _dyadic_ladder(bound: int) -> list[int]:
    out = []
    x = 2
    while x < bound:
        out.append(x)
        x *= 2
    out.append(bound)
    return out


def _search_ladder(
    y: PadicPoint,
    bound: int,
    kind: str,
    convention: str | None,
    depth_pad: range = range(-3, 5),
) -> ExponentReport:
    p = y.p
    n = y.dim
    entries = []
    prev_scale = 1
    for scale in _dyadic_ladder(bound):
        target = max(1, floor_log(p, Fraction(scale)) * (n + 1))
        best_w: Witness | None = None
        best_v: LogLinRatio | None = None
        zero_w: Witness | None = None
        floor_hit = False
        seen: set[tuple[int, ...]] = set()
        for pad in depth_pad:
            depth = target + pad
            if depth < 1:
                continue
            if depth >= y.precision:
                floor_hit = True
                continue
            for vec in _short_candidates(y, depth):
                if vec in seen:
                    continue
                seen.add(vec)
                if max(abs(v) for v in vec) > scale:
                    continue
                w = make_witness(y, tuple(pexact(p, v) for v in vec))
                # attribute witnesses to their own scale bracket; the Z[1/p]
                # ladder is indexed by the orbit-invariant proxy ||q||_p ||q~||
                size = w.norm_inf if kind == "w" else w.proxy()
                if not prev_scale < size <= scale:
                    continue
                if w.exact_zero:
                    if zero_w is None or w.pi < zero_w.pi:
                        zero_w = w
                    continue
                if not w.dot.certified:
                    floor_hit = True
                    continue
                try:
                    v = w.v_classical() if kind == "w" else (
                        w.v_relation_convention() if convention == "relation" else w.v_flow_convention()
                    )
                except WitnessError:
                    continue
                if best_v is None or v.cmp(best_v) > 0:
                    best_w, best_v = w, v
        entries.append(ScaleEntry(scale, best_w, best_v, zero_w, floor_hit))
        prev_scale = scale
    return ExponentReport(
        kind=kind,
        convention=convention,
        entries=tuple(entries),
        bounds={"scale_bound": bound, "ladder": [e.scale for e in entries]},
    )


def w_search(y: PadicPoint, bound: int) -> ExponentReport:
    """Classical exponent ladder over integral vectors of sup norm <= bound."""
    if bound < 2:
        raise ValueError("bound must be >= 2")
    return _search_ladder(y, bound, kind="w", convention=None)


def wp_search(y: PadicPoint, bound: int, convention: str = "relation") -> ExponentReport:
    """Z[1/p] exponent ladder; the normalization convention is recorded.

    Searches unit-orbit representatives (integral, ||q||_p = 1): both implied
    exponents are invariant under the unit p, so representatives lose nothing.
    """
    if convention not in ("relation", "flow"):
        raise ValueError("convention must be 'relation' or 'flow'")
    if bound < 2:
        raise ValueError("bound must be >= 2")
    return _search_ladder(y, bound, kind="wp", convention=convention)


# -- multiplicative witnesses ------------------------------------------------


def _balanced_rep(x: int, mod: int) -> int:
    r = x % mod
    if 2 * r > mod:
        r -= mod
    return r


def vwma_search(y: PadicPoint, bound: int, depth_cap: int | None = None) -> list[Witness]:
    """Integral witnesses of Pi_+ <= bound with positive multiplicative overshoot.

    For each q the companion q0 is read off the balanced truncations of -q.y;
    a witness is kept when |q0 + q.y|_p < Pi_+**-1 exactly.  Exact-zero values
    are kept as their own degenerate class (infinite overshoot).
    """
    p = y.p
    n = y.dim
    if not y.is_integral():
        raise ValueError("witness search requires an integral point")
    cap = depth_cap if depth_cap is not None else y.precision - 1
    out: list[Witness] = []
    seen: set[tuple[Fraction, ...]] = set()

    def q_boxes(i: int, acc: list[int], budget: Fraction):
        if i == n:
            if any(acc):
                yield tuple(acc)
            return
        v = 0
        while True:
            width = Fraction(max(abs(v), 1))
            if width > budget:
                break
            for s in ((v,) if v == 0 else (v, -v)):
                yield from q_boxes(i + 1, acc + [s], budget / width)
            v += 1

    for qvec in q_boxes(0, [], Fraction(bound)):
        q = tuple(pexact(p, v) for v in qvec)
        s = pexact(p, 0)
        for qi, yi in zip(q, y.coords):
            s = s + qi * yi
        pi_q = pi_plus((pexact(p, 0),) + q)
        cands = {0}
        for depth in range(1, cap + 1):
            r = _balanced_rep(s.m, p**depth)
            if Fraction(max(abs(r), 1)) * pi_q > bound:
                break
            cands.add(-r)
        for c0 in cands:
            qt = (pexact(p, c0),) + q
            key = tuple(c.to_fraction() for c in qt)
            if key in seen:
                continue
            seen.add(key)
            w = make_witness(y, qt)
            if w.pi > bound:
                continue
            if w.exact_zero:
                out.append(w)
                continue
            if not w.dot.certified or w.pi <= 1:
                continue
            # keep iff |dot| < Pi**-1, i.e. overshoot strictly positive
            if w.dot.value * w.pi < 1:
                out.append(w)
    out.sort(key=lambda w: (w.pi, tuple(c.to_fraction() for c in w.qtilde)))
    return out


# -- the two-way correspondence ----------------------------------------------


@dataclass(frozen=True)
class FlowEvent:
    """Integer flow time realizing a contraction event from a witness."""

    time: FlowTime
    gamma: Fraction
    gamma_prime: Fraction
    epsilon: Fraction
    content: CertValue
    flowed: FlowedPoint
    degenerate_slack: bool
    rounding_gap: int  # ceil(t_exact) - t_int, at most n+1


def _floor_log_mixed(p: int, a: Fraction, b: Fraction, num: int, den: int) -> int:
    """floor of log_p(a * b**(num/den)) for positive rationals a, b."""
    if a <= 0 or b <= 0 or den <= 0:
        raise ValueError("invalid mixed log")
    # p**(m*den) <= a**den * b**num
    rhs = a**den * b**num
    m = floor_log(p, rhs)  # floor of den * log_p(rhs**(1/den)) approx seed
    m = m // den
    while Fraction(p) ** ((m + 1) * den) <= rhs:
        m += 1
    while Fraction(p) ** (m * den) > rhs:
        m -= 1
    return m


@dataclass(frozen=True)
class ConversionExponents:
    """Flow exponents t_i = log_p(|q_i|_+ Pi**(eps/(n+1))) before rounding.

    ``exact`` carries the rational values when every |q_i|_+ is a p power
    (then the total is exactly log_p Pi**(1+eps)); the floors are always
    computed exactly through integer power comparisons.
    """

    floors: tuple[int, ...]
    exact: tuple[Fraction, ...] | None
    gamma: Fraction
    pi: Fraction


def conversion_exponents(p: int, plus: Sequence[Fraction], epsilon: Fraction) -> ConversionExponents:
    epsilon = Fraction(epsilon)
    n = len(plus) - 1
    pi = Fraction(1)
    for v in plus:
        if v < 1:
            raise ValueError("|q|_+ values are at least 1")
        pi *= v
    if pi <= 1:
        raise ValueError("degenerate witness: Pi_+ <= 1")
    u, d = epsilon.numerator, epsilon.denominator
    floors = tuple(_floor_log_mixed(p, v, pi, u, d * (n + 1)) for v in plus)
    exact: tuple[Fraction, ...] | None = None
    logs = []
    for v in plus:
        m = floor_log(p, v)
        if Fraction(p) ** m != v:
            logs = None
            break
        logs.append(Fraction(m))
    if logs is not None:
        a = floor_log(p, pi)  # pi is then a p power as well
        exact = tuple(l + a * epsilon / (n + 1) for l in logs)
    gamma = epsilon / ((n + 1) * (1 + epsilon))
    return ConversionExponents(floors=floors, exact=exact, gamma=gamma, pi=pi)


def vwma_to_flow(y: PadicPoint, witness: Witness, epsilon: Fraction) -> FlowEvent:
    """Convert a multiplicative witness into an integer-time contraction event.

    Exact exponents t_i = log_p |q_i|_+ + (eps/(n+1)) log_p Pi are rounded
    down coordinate-wise; the rate loss of the rounding is absorbed into a
    reduced rational rate gamma' which is re-verified exactly.
    """
    epsilon = Fraction(epsilon)
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    p = y.p
    n = y.dim
    if len(witness.qtilde) != n + 1:
        raise ValueError("witness dimension mismatch")
    pi = witness.pi
    if pi <= 1:
        raise WitnessError("degenerate witness: Pi_+ <= 1")
    # re-verify the multiplicative inequality at this epsilon, exactly
    ok = witness.dot.bound ** epsilon.denominator <= pi ** (-(epsilon.numerator + epsilon.denominator))
    if not ok:
        raise WitnessError("witness fails its multiplicative inequality at the given epsilon")

    plus = [c.norm_inf() if not c.is_zero() else Fraction(1) for c in witness.qtilde]
    conv = conversion_exponents(p, plus, epsilon)
    exps = list(conv.floors)
    if conv.pi != pi:
        raise WitnessError("Pi_+ bookkeeping mismatch")

    gamma = epsilon / ((n + 1) * (1 + epsilon))
    t_int = sum(exps)
    degenerate = t_int <= 0
    time = FlowTime(tuple(max(e, 0) for e in exps))
    flowed = apply_flow(LatticeDescription(y, time), witness.qtilde)

    # rounding gap: the exact total is log_p Pi**(1+eps)
    u, d = epsilon.numerator, epsilon.denominator
    t_exact_hi = _floor_log_mixed(p, Fraction(1), pi, u + d, d) + 1
    gap = t_exact_hi - t_int

    # reduced rational rate: largest k/1024 with content <= p**(-gamma' t_int)
    gamma_prime = Fraction(0)
    if not degenerate and _content_le_rate(flowed.content.hi, p, Fraction(0), t_int):
        if _content_le_rate(flowed.content.hi, p, Fraction(1), t_int):
            gamma_prime = Fraction(1)
        else:
            lo, hi = 0, 1024  # rate lo/1024 holds, hi/1024 fails
            while hi - lo > 1:
                mid = (lo + hi) // 2
                if _content_le_rate(flowed.content.hi, p, Fraction(mid, 1024), t_int):
                    lo = mid
                else:
                    hi = mid
            gamma_prime = Fraction(lo, 1024)
    degenerate = degenerate or gamma_prime <= 0
    return FlowEvent(
        time=time,
        gamma=gamma,
        gamma_prime=min(gamma_prime, gamma),
        epsilon=epsilon,
        content=flowed.content,
        flowed=flowed,
        degenerate_slack=degenerate,
        rounding_gap=gap,
    )


def _content_le_rate(content_hi: Fraction, p: int, rate: Fraction, t: int) -> bool:
    """content <= p**(-rate * t), exactly."""
    return content_hi**rate.denominator <= Fraction(p) ** (-rate.numerator * t)


@dataclass(frozen=True)
class WitnessConversion:
    """Integral witness extracted from a contraction event, with intermediates."""

    witness: Witness
    epsilon: Fraction  # the per-event rational overshoot from (k, m)
    epsilon_final: Fraction | LogLinRatio  # after the final integralizing rescale
    k: int
    m: int
    qnorm_rescale: int  # power of p applied to reach integral q
    q0_rescale: int  # extra power applied when q0 needed integralizing
    exponent: Fraction  # 1 + epsilon


def flow_to_vwma(
    y: PadicPoint,
    time: FlowTime,
    qtilde: Sequence[PExact],
    gamma: Fraction,
) -> WitnessConversion:
    """Extract an integral multiplicative witness from a contraction event.

    Pipeline: re-verify the event; rescale by ||q||_p to make the tail
    integral; count k (heavy flow directions) and m (nonzero coordinates);
    derive the rational overshoot; rescale once more if q0 kept a denominator,
    and re-verify the final inequality exactly.
    """
    gamma = Fraction(gamma)
    p = y.p
    n = y.dim
    if not 0 < gamma < Fraction(1, n + 1):
        raise ValueError("gamma must lie in (0, 1/(n+1))")
    t = time.total
    L = LatticeDescription(y, time)
    flowed = apply_flow(L, tuple(qtilde))
    if not _content_le_rate(flowed.content.hi, p, gamma, t):
        raise WitnessError("event fails its contraction inequality")
    q = tuple(qtilde)[1:]
    if all(c.is_zero() for c in q):
        raise WitnessError("event vector has q = 0: cannot carry a positive rate")
    qnorm = max(c.norm_p() for c in q if not c.is_zero())
    K = floor_log(p, qnorm)
    scaled = tuple(c.mul_ppow(K) for c in qtilde)  # multiply by p**K
    if any(not c.is_integral() for c in scaled[1:]):
        raise WitnessError("rescaled tail failed integrality")

    k = sum(1 for ti in time.exps if Fraction(ti) >= gamma * t)
    m = sum(1 for c in scaled if not c.is_zero())
    if k < 1 or m < 1:
        raise WitnessError("degenerate (k, m) counts")
    eps = gamma * (m - k + m * k) / (m * (1 - k * gamma))
    exponent = (m * gamma + m - k * gamma) / (m * (1 - k * gamma))

    q0 = scaled[0]
    j = 0
    final = scaled
    if not q0.is_zero() and not q0.is_integral():
        j = -q0.val_p()
        final = tuple(c.mul_ppow(j) for c in scaled)
    w = make_witness(y, final)
    if not w.integral:
        raise WitnessError("final witness is not integral")

    # re-verify the multiplicative inequality with the reported overshoot
    if w.exact_zero or j == 0:
        eps_final: Fraction | LogLinRatio = eps
        ok = w.dot.bound ** eps.denominator <= w.pi ** (-(eps.numerator + eps.denominator))
    else:
        if not w.dot.certified:
            raise WitnessError("cannot certify the rescaled witness at working precision")
        eps_final = w.epsilon()
        ok = eps_final.cmp_fraction(Fraction(0)) > 0
    if not ok:
        raise WitnessError("extracted witness failed exact re-verification")
    return WitnessConversion(
        witness=w,
        epsilon=eps,
        epsilon_final=eps_final,
        k=k,
        m=m,
        qnorm_rescale=K,
        q0_rescale=j,
        exponent=exponent,
    )


# -- constructed approximation families ---------------------------------------


def liouville_point(
    p: int,
    n: int,
    exponents: Sequence[int],
    precision: int,
) -> PadicPoint:
    """Point whose first coordinate is sum of p**a over the given exponents."""
    exps = sorted(set(exponents))
    if exps and exps[-1] >= precision:
        raise ValueError("exponent ladder exceeds the precision")
    total = sum(p**a for a in exps)
    coords = [pexact(p, total)] + [pexact(p, 0)] * (n - 1)
    return PadicPoint(p, tuple(coords), precision)


def liouville_witnesses(p: int, n: int, exponents: Sequence[int], y: PadicPoint) -> list[Witness]:
    """Truncation witnesses (-partial sum, 1, 0, ..., 0) for a Liouville point."""
    exps = sorted(set(exponents))
    out = []
    for stop in range(1, len(exps)):
        partial = sum(p**a for a in exps[:stop])
        qt = [pexact(p, -partial), pexact(p, 1)] + [pexact(p, 0)] * (n - 1)
        out.append(make_witness(y, tuple(qt)))
    return out
