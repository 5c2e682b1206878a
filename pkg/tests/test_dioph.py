import random
from fractions import Fraction

import pytest

from sadic.dioph import (
    WitnessError,
    conversion_exponents,
    flow_to_vwma,
    gamma_to_wp,
    liouville_point,
    liouville_witnesses,
    lll_reduce,
    make_witness,
    pi_plus,
    vwma_search,
    vwma_to_flow,
    w_search,
    wp_search,
)
from sadic.lattice import FlowTime, LatticeDescription, apply_flow
from sadic.sarith import haar_point, pexact, zero_point
from sadic.svec import int_det


def vec(p, vals):
    return tuple(pexact(p, v) for v in vals)


def test_pi_plus():
    assert pi_plus(vec(3, [0, 2, -3])) == 6
    assert pi_plus(vec(3, [1, 1, 1])) == 1
    assert pi_plus(vec(3, [-4, 0, 5])) == 20


def test_gamma_to_wp_values():
    assert gamma_to_wp(Fraction(0), 1) == 1
    assert gamma_to_wp(Fraction(0), 3) == 3
    assert gamma_to_wp(Fraction(1, 4), 1) == 3
    with pytest.raises(ValueError):
        gamma_to_wp(Fraction(1, 2), 1)
    with pytest.raises(ValueError):
        gamma_to_wp(Fraction(-1, 10), 1)


def test_gamma_to_wp_strictly_increasing():
    for n in (1, 2, 3):
        grid = [Fraction(k, 8 * (n + 1)) for k in range(0, 8)]
        vals = [gamma_to_wp(g, n) for g in grid]
        assert all(a < b for a, b in zip(vals, vals[1:]))


def test_lll_preserves_lattice():
    rng = random.Random(5)
    for _ in range(20):
        dim = rng.randint(2, 4)
        rows = [[rng.randint(-30, 30) for _ in range(dim)] for _ in range(dim)]
        if int_det(rows) == 0:
            continue
        red = lll_reduce(rows)
        assert abs(int_det(red)) == abs(int_det(rows))
        # reduced vectors are no longer than the original worst case
        orig = max(sum(x * x for x in r) for r in rows)
        assert min(sum(x * x for x in r) for r in red) <= orig


def test_w_search_zero_point_reports_zero_class():
    y = zero_point(3, 1, precision=64)
    rep = w_search(y, 64)
    assert rep.has_zero_witness()


def test_w_search_liouville_rediscovers_truncations():
    p = 3
    exps = [2**k for k in range(8)]  # 1, 2, 4, ..., 128
    y = liouville_point(p, 1, exps, precision=200)
    rep = w_search(y, 10_000)
    est = rep.estimate()
    assert est is not None
    assert est.cmp_fraction(Fraction(9, 5)) >= 0  # >= 1.8
    # finite-scale accidents can beat the limiting exponent, but not wildly
    assert est.cmp_fraction(Fraction(4)) <= 0
    # designed truncation witnesses evaluate to exponent about 2
    for w in liouville_witnesses(p, 1, exps, y)[3:]:
        v = w.v_classical()
        assert v.cmp_fraction(Fraction(9, 5)) >= 0


def test_wp_conventions_differ_by_two_on_integral_witnesses():
    p = 3
    exps = [2**k for k in range(8)]
    y = liouville_point(p, 1, exps, precision=200)
    for w in liouville_witnesses(p, 1, exps, y)[2:]:
        rel = w.v_relation_convention()
        flow = w.v_flow_convention()
        cls = w.v_classical()
        # on integral unit-normalized witnesses: relation = classical + 1
        assert float(rel) == pytest.approx(float(cls) + 1, abs=1e-9)
        assert float(flow) == pytest.approx(float(cls) - 1, abs=1e-9)


def test_wp_search_relation_tracks_w_plus_one():
    p = 3
    exps = [2**k for k in range(8)]
    y = liouville_point(p, 1, exps, precision=200)
    w_rep = w_search(y, 4096)
    wp_rep = wp_search(y, 4096, convention="relation")
    dw = wp_rep.estimate_float() - w_rep.estimate_float()
    assert 0.6 <= dw <= 1.4


def test_vwma_search_zero_point():
    y = zero_point(3, 2, precision=64)
    out = vwma_search(y, bound=20)
    assert any(w.exact_zero for w in out)


def test_vwma_search_liouville_padding():
    p = 3
    exps = [2**k for k in range(6)]
    y1 = liouville_point(p, 1, exps, precision=128)
    hits1 = [w for w in vwma_search(y1, bound=3**6) if not w.exact_zero]
    assert hits1, "multiplicative witnesses exist for the one-dimensional point"
    y2 = liouville_point(p, 2, exps, precision=128)
    hits2 = [w for w in vwma_search(y2, bound=3**6) if not w.exact_zero]
    # padded zero coordinate contributes |q|_+ = 1 and inherits the family
    keys1 = {tuple(c.to_fraction() for c in w.qtilde) for w in hits1}
    keys2 = {tuple(c.to_fraction() for c in w.qtilde[:2]) for w in hits2 if w.qtilde[2].is_zero()}
    assert keys1 & keys2


def test_conversion_exponents_hand_example():
    # |q|_+ = (1, 2), eps = 1 at p = 2: exact exponents (1/2, 3/2), rate 1/4
    conv = conversion_exponents(2, [Fraction(1), Fraction(2)], Fraction(1))
    assert conv.exact == (Fraction(1, 2), Fraction(3, 2))
    assert conv.floors == (0, 1)
    assert conv.gamma == Fraction(1, 4)
    assert sum(conv.exact) == 2  # total matches log_2 Pi**(1+eps) = log_2 4


def test_conversion_exponents_zero_coordinate_branch():
    # zero coordinates enter as |q|_+ = 1: t_i = (eps/(n+1)) log_p Pi
    conv = conversion_exponents(3, [Fraction(9), Fraction(1)], Fraction(1, 2))
    assert conv.exact is not None
    assert conv.exact[1] == Fraction(1, 2) * Fraction(2) / 2


def test_vwma_to_flow_roundtrip_liouville():
    p = 3
    exps = [2**k for k in range(7)]
    y = liouville_point(p, 1, exps, precision=200)
    events = 0
    for w in liouville_witnesses(p, 1, exps, y)[2:]:
        ev = vwma_to_flow(y, w, Fraction(1, 2))
        assert not ev.degenerate_slack
        assert ev.gamma == Fraction(1, 6)
        assert ev.gamma_prime > 0
        # content <= p**(-gamma' t), exactly
        t = ev.time.total
        assert ev.content.hi ** ev.gamma_prime.denominator <= Fraction(p) ** (
            -ev.gamma_prime.numerator * t
        )
        assert 0 <= ev.rounding_gap <= 2  # n + 1 coordinates of floor loss
        back = flow_to_vwma(y, ev.time, w.qtilde, ev.gamma_prime)
        assert back.witness.integral
        eps_f = back.epsilon_final
        if isinstance(eps_f, Fraction):
            assert eps_f > 0
        else:
            assert eps_f.cmp_fraction(Fraction(0)) > 0
        events += 1
    assert events >= 4


def test_vwma_to_flow_rejects_bad_witness():
    p = 3
    y = haar_point(p, 1, 64, random.Random(1))
    w = make_witness(y, vec(p, [1, 1]))
    with pytest.raises(WitnessError):
        vwma_to_flow(y, w, Fraction(5))  # overshoot far beyond anything real


def test_flow_to_vwma_zero_point_degenerate_class():
    y = zero_point(3, 1, precision=64)
    time = FlowTime((2, 2))
    qt = vec(3, [0, 1])
    out = flow_to_vwma(y, time, qt, Fraction(1, 4))
    assert out.witness.exact_zero
    assert out.k == 2 and out.m == 1
    assert out.qnorm_rescale == 0


def test_flow_to_vwma_exponent_simplification():
    # with every coordinate heavy and nonzero the exponent is 1/(1 - k gamma)
    for n in (1, 2):
        for gamma in (Fraction(1, 8), Fraction(1, 2 * (n + 1))):
            k = m = n + 1
            eps = gamma * (m - k + m * k) / (m * (1 - k * gamma))
            assert 1 + eps == 1 / (1 - k * gamma)


def test_flow_to_vwma_rejects_non_event():
    y = haar_point(3, 1, 64, random.Random(9))
    time = FlowTime((1, 1))
    with pytest.raises(WitnessError):
        flow_to_vwma(y, time, vec(3, [1, 0]), Fraction(1, 4))  # e_0 never contracts
