"""Diagonal flows on the space of Z[1/p]-lattices and contraction-rate estimates.

The one-parameter flow is the balanced specialization t = (s, ..., s) of the
multi-parameter flow; the contraction rate of a point is estimated from the
trajectory of certified shortest-content values, as a lower-bound style
estimate over a tail window.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .exactcmp import LogLinRatio
from .lattice import (
    DeltaCertificate,
    FlowTime,
    LatticeDescription,
    SearchBudget,
    delta_search,
)
from .sarith import PadicPoint

__all__ = [
    "FlowTime",
    "balanced_time",
    "TrajectoryPoint",
    "GammaEstimate",
    "gamma_estimate",
    "ContractionEvent",
    "vwma_flow_condition",
    "flow_times_up_to",
]


def balanced_time(s: int, n: int) -> FlowTime:
    """The symmetric flow exponent (s, ..., s) with total (n+1)s."""
    if s < 1:
        raise ValueError("balanced time needs s >= 1")
    return FlowTime((s,) * (n + 1))


@dataclass(frozen=True)
class TrajectoryPoint:
    time: FlowTime
    delta: DeltaCertificate

    @property
    def total(self) -> int:
        return self.time.total


@dataclass(frozen=True)
class GammaEstimate:
    """Lower-bound style contraction-rate estimate from a trajectory tail.

    gamma_hat is max over the tail window of (-log_p delta) / t; it is exact
    as a log ratio and never claimed to attain the supremum.
    """

    p: int
    trajectory: tuple[TrajectoryPoint, ...]
    window_start: int  # index into trajectory

    def window(self) -> tuple[TrajectoryPoint, ...]:
        return self.trajectory[self.window_start :]

    def gamma_hat(self) -> LogLinRatio:
        best = None
        for pt in self.window():
            cand = _rate(self.p, pt)
            if best is None or cand.cmp(best) > 0:
                best = cand
        if best is None:
            raise ValueError("empty trajectory window")
        return best

    def gamma_hat_float(self) -> float:
        return float(self.gamma_hat())

    def at_least(self, r: Fraction) -> bool:
        """Exact check: some tail point has delta <= p**(-r t)."""
        r = Fraction(r)
        for pt in self.window():
            t = pt.total
            # delta <= p**(-r t)  <=>  delta**den <= p**(-num*t)
            lhs = pt.delta.value ** r.denominator
            rhs = Fraction(self.p) ** (-r.numerator * t)
            if lhs <= rhs:
                return True
        return False


def _rate(p: int, pt: TrajectoryPoint) -> LogLinRatio:
    # (-log_p delta) / t as an exact log-linear ratio in scale H = 1/delta
    d = pt.delta.value
    if d <= 0:
        raise ValueError("degenerate zero delta in trajectory")
    return LogLinRatio(p, Fraction(1) / d, num=(0, 1), den=(pt.total, 0))


def gamma_estimate(
    y: PadicPoint,
    T: int,
    budget: SearchBudget | None = None,
) -> GammaEstimate:
    """Run the shortest-content search along balanced times s = 1..T.

    The estimate is the best contraction rate seen on the last half of the
    trajectory; window parameters ride along so callers can re-window.
    """
    if T < 1:
        raise ValueError("T must be >= 1")
    n = y.dim
    traj = []
    for s in range(1, T + 1):
        time = balanced_time(s, n)
        cert = delta_search(LatticeDescription(y, time), budget)
        traj.append(TrajectoryPoint(time, cert))
    return GammaEstimate(y.p, tuple(traj), window_start=len(traj) // 2)


def flow_times_up_to(n: int, T: int) -> Iterator[FlowTime]:
    """All flow exponents (t_0..t_n) with 1 <= total <= T, lexicographic."""

    def rec(prefix: list[int], remaining: int, slots: int):
        if slots == 1:
            yield prefix + [remaining]
            return
        for v in range(remaining + 1):
            yield from rec(prefix + [v], remaining - v, slots - 1)

    for total in range(1, T + 1):
        for exps in rec([], total, n + 1):
            yield FlowTime(tuple(exps))


@dataclass(frozen=True)
class ContractionEvent:
    """A flow time at which the lattice contracted at rate gamma or better."""

    time: FlowTime
    delta: DeltaCertificate
    gamma: Fraction


def vwma_flow_condition(
    y: PadicPoint,
    T: int,
    gamma: Fraction,
    budget: SearchBudget | None = None,
) -> tuple[bool, list[ContractionEvent]]:
    """Search flow times with total <= T for contraction events delta <= p**(-gamma t).

    Coordinate 0 is distinguished; the remaining exponents are enumerated in
    full (no multiset pruning: the point's coordinates need not be
    exchangeable).  Empty evidence means false at this scale, nothing more.
    """
    gamma = Fraction(gamma)
    n = y.dim
    if not 0 < gamma < Fraction(1, n + 1):
        raise ValueError("gamma must lie in (0, 1/(n+1))")
    events = []
    for time in flow_times_up_to(n, T):
        cert = delta_search(LatticeDescription(y, time), budget)
        t = time.total
        # delta <= p**(-gamma t), compared exactly via denominators
        lhs = cert.value ** gamma.denominator
        rhs = Fraction(y.p) ** (-gamma.numerator * t)
        if lhs <= rhs:
            events.append(ContractionEvent(time, cert, gamma))
    return bool(events), events
