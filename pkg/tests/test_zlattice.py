import random

from sadic.svec import int_det
from sadic.zlattice import (
    elementary_divisors,
    integer_rank,
    random_unimodular,
    saturate_rows,
    smith_normal_form,
)


def matmul(a, b):
    return [[sum(x * y for x, y in zip(row, col)) for col in zip(*b)] for row in a]


def test_snf_reconstructs():
    rng = random.Random(1)
    for _ in range(60):
        rows = rng.randint(1, 4)
        cols = rng.randint(1, 4)
        a = [[rng.randint(-8, 8) for _ in range(cols)] for _ in range(rows)]
        d, u, v, vinv = smith_normal_form(a)
        assert matmul(matmul(u, a), v) == d
        assert abs(int_det(u)) == 1 if rows else True
        assert abs(int_det(v)) == 1
        ident = matmul(v, vinv)
        assert ident == [[int(i == j) for j in range(cols)] for i in range(cols)]
        # divisibility chain
        diag = [d[t][t] for t in range(min(rows, cols))]
        for x, y in zip(diag, diag[1:]):
            if y:
                assert x and y % x == 0
            assert x >= 0


def test_known_divisors():
    assert elementary_divisors([[2, 0], [0, 3]]) == [1, 6]
    assert elementary_divisors([[4, 0], [0, 6]]) == [2, 12]
    assert elementary_divisors([[1, 0], [0, 0]]) == [1]


def test_saturation():
    # row space of (2, 0) saturates to (1, 0)
    sat = saturate_rows([[2, 0]])
    assert len(sat) == 1 and sorted(map(abs, sat[0])) == [0, 1]
    # (1, 1, 0) and (0, 2, 2): saturation contains (0, 1, 1)
    sat = saturate_rows([[1, 1, 0], [0, 2, 2]])
    assert integer_rank(sat) == 2
    # index of the original inside the saturation is the divisor product
    assert elementary_divisors(sat) == [1, 1]


def test_saturation_is_saturated():
    rng = random.Random(9)
    for _ in range(40):
        rows = rng.randint(1, 3)
        a = [[rng.randint(-6, 6) for _ in range(4)] for _ in range(rows)]
        r = integer_rank(a)
        if r == 0:
            continue
        sat = saturate_rows(a)
        assert len(sat) == r
        assert all(d == 1 for d in elementary_divisors(sat))
        # original rows lie in the span of the saturation over Q
        stacked = sat + a
        assert integer_rank(stacked) == r


def test_random_unimodular():
    rng = random.Random(4)
    for _ in range(20):
        n = rng.randint(2, 4)
        assert abs(int_det(random_unimodular(n, rng))) == 1
