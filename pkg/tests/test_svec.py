import random
from fractions import Fraction

import pytest

from sadic.sarith import pexact
from sadic.svec import SPoint, int_det, subsets, wedge, wedge_rows
from sadic.zlattice import random_unimodular


def sp(p, vals, **kw):
    return SPoint(p, tuple(pexact(p, v) if isinstance(v, int) else v for v in vals), **kw)


def test_content_examples():
    x = sp(3, [1, 3])
    assert x.norm_inf() == 3 and x.norm_p() == 1 and x.content() == 3
    assert sp(3, [0, 0]).content() == 0
    x = sp(2, [pexact(2, 1, 1), pexact(2, 3)])
    assert x.norm_inf() == 3
    assert x.norm_p() == 2
    assert x.content() == 6


def test_scaling_touches_one_place_only():
    x = sp(3, [2, 9])
    base_inf, base_p = x.norm_inf(), x.norm_p()
    y = x.scale_inf([-2, -2])
    assert y.norm_inf() == base_inf / 9
    assert y.norm_p() == base_p
    z = x.scale_p([1, 1])
    assert z.norm_inf() == base_inf
    assert z.norm_p() == base_p / 3


def test_int_det():
    assert int_det([[1, 2], [3, 4]]) == -2
    assert int_det([[2, 0, 0], [0, 3, 0], [0, 0, 5]]) == 30
    assert int_det([[1, 2], [2, 4]]) == 0
    rng = random.Random(3)
    for _ in range(30):
        n = rng.randint(1, 4)
        m = [[rng.randint(-5, 5) for _ in range(n)] for _ in range(n)]
        # expansion by minors as the oracle
        def det(mat):
            if len(mat) == 1:
                return mat[0][0]
            return sum(
                (-1) ** c * mat[0][c] * det([row[:c] + row[c + 1 :] for row in mat[1:]])
                for c in range(len(mat))
            )
        assert int_det(m) == det(m)


def test_wedge_examples():
    p = 5
    e1 = [pexact(p, 0), pexact(p, 1), pexact(p, 0)]
    e2 = [pexact(p, 0), pexact(p, 0), pexact(p, 1)]
    w = wedge_rows(p, [e1, e2])
    assert [c.to_fraction() for c in w.coords] == [0, 0, 1]  # subsets 01, 02, 12

    w = wedge_rows(p, [e1, e1])
    assert w.is_zero()

    rows = [[pexact(p, 1), pexact(p, 2), pexact(p, 0)], [pexact(p, 0), pexact(p, 1), pexact(p, 5)]]
    w = wedge_rows(p, rows)
    assert [c.to_fraction() for c in w.coords] == [1, 5, 10]


def test_wedge_unimodular_basis_content_one():
    rng = random.Random(11)
    for p in (2, 3):
        for _ in range(20):
            n = rng.randint(2, 4)
            m = random_unimodular(n, rng)
            rows = [[pexact(p, v) for v in row] for row in m]
            w = wedge_rows(p, rows)
            assert w.content() == 1


def test_grassmann_plucker_relation():
    # decomposable degree-2 vectors in dimension 4 satisfy the quadratic relation
    rng = random.Random(23)
    for _ in range(25):
        p = 3
        rows = [[pexact(p, rng.randint(-6, 6), rng.randint(0, 1)) for _ in range(4)] for _ in range(2)]
        w = wedge_rows(p, rows)
        c = {s: w.coord(s).to_fraction() for s in subsets(4, 2)}
        rel = c[(0, 1)] * c[(2, 3)] - c[(0, 2)] * c[(1, 3)] + c[(0, 3)] * c[(1, 2)]
        assert rel == 0


def test_wedge_rejects_scaled_input():
    p = 3
    x = sp(p, [1, 0]).scale_inf([1, 0])
    with pytest.raises(ValueError):
        wedge([x, sp(p, [0, 1])])


def test_content_basis_invariance():
    # content of the wedge is invariant under unimodular integer rebasing
    rng = random.Random(29)
    p = 3
    for _ in range(20):
        rows = [[rng.randint(-4, 4) for _ in range(4)] for _ in range(2)]
        u = random_unimodular(2, rng)
        new = [
            [sum(u[i][k] * rows[k][j] for k in range(2)) for j in range(4)]
            for i in range(2)
        ]
        w1 = wedge_rows(p, [[pexact(p, v) for v in r] for r in rows])
        w2 = wedge_rows(p, [[pexact(p, v) for v in r] for r in new])
        assert w1.content() == w2.content()
