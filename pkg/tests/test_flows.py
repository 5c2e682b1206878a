import random
from fractions import Fraction

import pytest

from sadic.flows import (
    balanced_time,
    flow_times_up_to,
    gamma_estimate,
    vwma_flow_condition,
)
from sadic.lattice import FlowTime, LatticeDescription, PrecisionError, apply_flow, delta_search
from sadic.sarith import haar_point, pexact, point_from_coords, zero_point


def test_balanced_time():
    assert balanced_time(1, 1) == FlowTime((1, 1))
    assert balanced_time(3, 2) == FlowTime((3, 3, 3))
    assert balanced_time(3, 2).total == 9
    with pytest.raises(ValueError):
        balanced_time(0, 1)


def test_flow_times_enumeration():
    times = list(flow_times_up_to(1, 3))
    assert FlowTime((0, 1)) in times and FlowTime((3, 0)) in times
    assert FlowTime((0, 0)) not in times
    assert len(times) == 2 + 3 + 4


def test_zero_point_trajectory_matches_witness_family():
    # for y = 0, n = 1 the vector (0, 1) realizes delta = p**(-s) exactly
    y = zero_point(3, 1, precision=64)
    for s in range(1, 6):
        L = LatticeDescription(y, balanced_time(s, 1))
        cert = delta_search(L)
        assert cert.value == Fraction(1, 3**s)
        fp = apply_flow(L, (pexact(3, 0), pexact(3, 1)))
        assert fp.content.exact() == cert.value


def test_gamma_estimate_zero_point():
    y = zero_point(3, 1, precision=64)
    est = gamma_estimate(y, T=8)
    g = est.gamma_hat()
    assert g.cmp_fraction(Fraction(1, 2)) == 0  # exactly 1/2 at every time
    assert est.at_least(Fraction(1, 2))
    assert len(est.trajectory) == 8
    assert est.trajectory[0].total == 2


def test_gamma_estimate_precision_guard():
    y = zero_point(3, 1, precision=8)
    with pytest.raises(PrecisionError):
        gamma_estimate(y, T=6)  # t = 12 exceeds the certifiable depth


def test_gamma_estimate_deterministic():
    rng = random.Random(3)
    y = haar_point(3, 2, 64, rng)
    a = gamma_estimate(y, T=3)
    b = gamma_estimate(y, T=3)
    assert a == b


def test_vwma_flow_condition_zero_point():
    y = zero_point(3, 1, precision=64)
    found, events = vwma_flow_condition(y, T=4, gamma=Fraction(1, 4))
    assert found
    assert any(ev.time == FlowTime((1, 1)) for ev in events)


def test_vwma_flow_condition_rational_kernel():
    # exactly rational point: the kernel vector forces events at every rate
    y = point_from_coords(3, [1], precision=64)
    for gamma in (Fraction(1, 4), Fraction(2, 5), Fraction(9, 20)):
        found, events = vwma_flow_condition(y, T=6, gamma=gamma)
        assert found, f"no events at rate {gamma}"


def test_vwma_flow_condition_empty_at_small_scale():
    # y = 22 = 1 + 3*7: no contraction below the kernel's own height at T = 1
    y = point_from_coords(3, [22], precision=64)
    found, events = vwma_flow_condition(y, T=1, gamma=Fraction(2, 5))
    assert not found and events == []


def test_gamma_rejects_bad_rate():
    y = zero_point(3, 1, precision=64)
    with pytest.raises(ValueError):
        vwma_flow_condition(y, T=2, gamma=Fraction(1, 2))
    with pytest.raises(ValueError):
        vwma_flow_condition(y, T=2, gamma=Fraction(0))
