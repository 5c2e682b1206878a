"""Integer-matrix utilities: Smith normal form, row-space saturation.

Used to certify primitivity of Z[1/p]-submodules (all elementary divisors of
an integer basis must be p-powers) and to produce saturated integer bases for
enumeration.
"""

from __future__ import annotations

__all__ = [
    "smith_normal_form",
    "elementary_divisors",
    "saturate_rows",
    "integer_rank",
    "random_unimodular",
]


class _Worksheet:
    """Row/column operation tracker: keeps u * a * v = d with v_inv alongside."""

    def __init__(self, a: list[list[int]]):
        self.rows = len(a)
        self.cols = len(a[0]) if self.rows else 0
        self.d = [row[:] for row in a]
        self.u = [[int(i == j) for j in range(self.rows)] for i in range(self.rows)]
        self.v = [[int(i == j) for j in range(self.cols)] for i in range(self.cols)]
        self.vinv = [[int(i == j) for j in range(self.cols)] for i in range(self.cols)]

    def swap_rows(self, i, j):
        if i == j:
            return
        self.d[i], self.d[j] = self.d[j], self.d[i]
        self.u[i], self.u[j] = self.u[j], self.u[i]

    def addmul_row(self, i, j, c):
        self.d[i] = [x + c * y for x, y in zip(self.d[i], self.d[j])]
        self.u[i] = [x + c * y for x, y in zip(self.u[i], self.u[j])]

    def neg_row(self, i):
        self.d[i] = [-x for x in self.d[i]]
        self.u[i] = [-x for x in self.u[i]]

    def swap_cols(self, i, j):
        if i == j:
            return
        for row in self.d:
            row[i], row[j] = row[j], row[i]
        for row in self.v:
            row[i], row[j] = row[j], row[i]
        self.vinv[i], self.vinv[j] = self.vinv[j], self.vinv[i]

    def addmul_col(self, i, j, c):
        for row in self.d:
            row[i] += c * row[j]
        for row in self.v:
            row[i] += c * row[j]
        self.vinv[j] = [x - c * y for x, y in zip(self.vinv[j], self.vinv[i])]


def _diagonalize(w: _Worksheet) -> int:
    """Reduce w.d to diagonal form; returns the number of nonzero pivots."""
    t = 0
    while t < min(w.rows, w.cols):
        piv = None
        for i in range(t, w.rows):
            for j in range(t, w.cols):
                if w.d[i][j] != 0:
                    if piv is None or abs(w.d[i][j]) < abs(w.d[piv[0]][piv[1]]):
                        piv = (i, j)
        if piv is None:
            break
        w.swap_rows(t, piv[0])
        w.swap_cols(t, piv[1])
        while True:
            dirty = False
            for i in range(t + 1, w.rows):
                if w.d[i][t]:
                    q = w.d[i][t] // w.d[t][t]
                    w.addmul_row(i, t, -q)
                    if w.d[i][t]:
                        w.swap_rows(t, i)
                        dirty = True
            for j in range(t + 1, w.cols):
                if w.d[t][j]:
                    q = w.d[t][j] // w.d[t][t]
                    w.addmul_col(j, t, -q)
                    if w.d[t][j]:
                        w.swap_cols(t, j)
                        dirty = True
            if not dirty:
                break
        if w.d[t][t] < 0:
            w.neg_row(t)
        t += 1
    return t


def _fix_pair(w: _Worksheet, i: int) -> None:
    """Replace diag block (d_i, d_j) by (gcd, lcm)-style entries, j = i + 1.

    Rows i, j are zero outside columns i, j and vice versa, so the repair
    stays local to the 2x2 block.
    """
    j = i + 1
    w.addmul_col(i, j, 1)  # block becomes [d_i 0; d_j d_j]
    while w.d[j][i]:
        q = w.d[i][i] // w.d[j][i]
        w.addmul_row(i, j, -q)
        w.swap_rows(i, j)
    g = w.d[i][i]
    if w.d[i][j]:
        w.addmul_col(j, i, -(w.d[i][j] // g))
    for k in (i, j):
        if w.d[k][k] < 0:
            w.neg_row(k)


def smith_normal_form(a: list[list[int]]):
    """Return (d, u, v, v_inv) with u*a*v = d in Smith normal form.

    u, v are unimodular; v_inv is maintained alongside v so callers can read
    off a saturated row basis without inverting anything.
    """
    w = _Worksheet(a)
    r = _diagonalize(w)
    while True:
        violation = None
        for i in range(r - 1):
            if w.d[i + 1][i + 1] % max(w.d[i][i], 1) != 0:
                violation = i
                break
        if violation is None:
            return w.d, w.u, w.v, w.vinv
        # each repair shrinks d_i strictly to gcd(d_i, d_{i+1}), so this ends
        _fix_pair(w, violation)


def elementary_divisors(a: list[list[int]]) -> list[int]:
    d, _, _, _ = smith_normal_form(a)
    out = []
    for t in range(min(len(d), len(d[0]) if d else 0)):
        if d[t][t]:
            out.append(abs(d[t][t]))
    return out


def integer_rank(a: list[list[int]]) -> int:
    return len(elementary_divisors(a))


def saturate_rows(a: list[list[int]]) -> list[list[int]]:
    """Basis of the saturation of the row space: Z^cols intersect Q-span(rows)."""
    d, _, _, vinv = smith_normal_form(a)
    r = len([1 for t in range(min(len(d), len(d[0]))) if d[t][t]])
    return [vinv[i][:] for i in range(r)]


def random_unimodular(n: int, rng, steps: int = 12) -> list[list[int]]:
    """Random GL(n, Z) matrix as a product of elementary operations."""
    m = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(steps):
        i, j = rng.randrange(n), rng.randrange(n)
        if i == j:
            continue
        c = rng.choice([-2, -1, 1, 2])
        for k in range(n):
            m[i][k] += c * m[j][k]
    if rng.random() < 0.5:
        i = rng.randrange(n)
        for k in range(n):
            m[i][k] = -m[i][k]
    return m
