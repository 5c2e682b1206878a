"""Integer lattice reduction: small-dimension LLL and exact sup-norm minima.

The shortest-vector routine is exact: after LLL preconditioning it encloses
the optimum in a coefficient box read off the inverse basis and enumerates it
completely, in rational arithmetic.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

__all__ = ["lll_reduce", "sup_shortest", "ReductionError"]


class ReductionError(RuntimeError):
    pass


def lll_reduce(rows: Sequence[Sequence[int]], delta: Fraction = Fraction(99, 100)) -> list[list[int]]:
    """Textbook integer LLL with exact rational Gram-Schmidt (small dimensions)."""
    b = [list(r) for r in rows]
    n = len(b)

    def gso():
        star: list[list[Fraction]] = []
        mu = [[Fraction(0)] * n for _ in range(n)]
        norms: list[Fraction] = []
        for i in range(n):
            v = [Fraction(x) for x in b[i]]
            for j in range(i):
                if norms[j] == 0:
                    mu[i][j] = Fraction(0)
                    continue
                mu[i][j] = sum(Fraction(x) * y for x, y in zip(b[i], star[j])) / norms[j]
                v = [x - mu[i][j] * y for x, y in zip(v, star[j])]
            star.append(v)
            norms.append(sum(x * x for x in v))
        return star, mu, norms

    star, mu, norms = gso()
    k = 1
    while k < n:
        for j in range(k - 1, -1, -1):
            q = round(mu[k][j])
            if q:
                b[k] = [x - q * y for x, y in zip(b[k], b[j])]
                star, mu, norms = gso()
        if norms[k] >= (delta - mu[k][k - 1] ** 2) * norms[k - 1]:
            k += 1
        else:
            b[k], b[k - 1] = b[k - 1], b[k]
            star, mu, norms = gso()
            k = max(k - 1, 1)
    return b


def _inverse(mat: list[list[int]]) -> list[list[Fraction]]:
    n = len(mat)
    aug = [[Fraction(v) for v in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(mat)]
    for c in range(n):
        piv = next((r for r in range(c, n) if aug[r][c] != 0), None)
        if piv is None:
            raise ReductionError("singular basis")
        aug[c], aug[piv] = aug[piv], aug[c]
        inv = 1 / aug[c][c]
        aug[c] = [x * inv for x in aug[c]]
        for r in range(n):
            if r != c and aug[r][c]:
                f = aug[r][c]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[c])]
    return [row[n:] for row in aug]


def sup_shortest(
    rows: Sequence[Sequence[int]],
    enum_cap: int = 500_000,
) -> tuple[int, list[tuple[int, ...]]]:
    """Exact sup-norm minimum of a full-rank integer lattice, with all minima.

    Returns (min sup norm, the nonzero achieving vectors up to sign: each
    listed with its negation).  LLL narrows the search; the coefficient box
    from the inverse of the reduced basis is then enumerated completely.
    """
    red = lll_reduce(rows)
    d = len(red)
    best = min(max(abs(x) for x in row) for row in red)
    inv = _inverse(red)  # columns give coefficients of unit vectors
    # |u_j| <= best * sum_i |inv[i][j]| for any vector of sup norm <= best
    caps = []
    for j in range(d):
        l1 = sum(abs(inv[i][j]) for i in range(d))
        caps.append(int(best * l1))
    size = 1
    for c in caps:
        size *= 2 * c + 1
    if size > enum_cap:
        raise ReductionError(f"enumeration box {size} exceeds cap {enum_cap}")
    minima: list[tuple[int, ...]] = []
    u = [0] * d

    def rec(j: int, vec: list[int]) -> None:
        nonlocal best, minima
        if j == d:
            if all(v == 0 for v in vec):
                return
            s = max(abs(v) for v in vec)
            if s < best:
                best = s
                minima = [tuple(vec)]
            elif s == best:
                minima.append(tuple(vec))
            return
        base = [x - caps[j] * y for x, y in zip(vec, red[j])]
        for _ in range(2 * caps[j] + 1):
            rec(j + 1, base)
            base = [x + y for x, y in zip(base, red[j])]

    rec(0, [0] * d)
    if not minima:
        raise ReductionError("no nonzero vector found; basis degenerate")
    return best, sorted(set(minima))
