"""Exact Gaussian elimination over a field.

Matrices are lists of rows.  Entries may be any exact field elements that
support ``+ - * /`` and ``bool()`` (scalars from :mod:`leavitt.scalar` or
:class:`~leavitt.polys.RationalFunction`).  Pivots are chosen by least total
polynomial degree to keep entry growth down.
"""
from __future__ import annotations

from typing import Any, Callable, List, Sequence, Tuple

Matrix = List[List[Any]]


class NotInvertible(ArithmeticError):
    pass


def _weight(a) -> int:
    return getattr(a, "weight", 0)


def identity(n: int, zero, one) -> Matrix:
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def zeros(n: int, m: int, zero) -> Matrix:
    return [[zero] * m for _ in range(n)]


def transpose(a: Sequence[Sequence[Any]]) -> Matrix:
    return [list(col) for col in zip(*a)] if a else []


def mat_mul(a: Sequence[Sequence[Any]], b: Sequence[Sequence[Any]], zero) -> Matrix:
    n, k = len(a), len(b)
    m = len(b[0]) if b else 0
    out = zeros(n, m, zero)
    for i in range(n):
        row = a[i]
        for t in range(k):
            x = row[t]
            if not x:
                continue
            bt = b[t]
            for j in range(m):
                y = bt[j]
                if y:
                    out[i][j] = out[i][j] + x * y
    return out


def mat_add(a, b) -> Matrix:
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_sub(a, b) -> Matrix:
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_map(a, f: Callable) -> Matrix:
    return [[f(x) for x in row] for row in a]


def row_reduce(a: Sequence[Sequence[Any]], zero, one) -> Tuple[Matrix, List[int], Matrix]:
    """Reduced row echelon form.

    Returns ``(R, pivots, S)`` with ``S`` invertible and ``S @ a == R``;
    ``pivots`` lists the pivot column of each nonzero row of ``R``.
    """
    n = len(a)
    m = len(a[0]) if n else 0
    r = [list(row) for row in a]
    s = identity(n, zero, one)
    pivots: List[int] = []
    row = 0
    for col in range(m):
        if row == n:
            break
        cands = [i for i in range(row, n) if r[i][col]]
        if not cands:
            continue
        piv = min(cands, key=lambda i: (_weight(r[i][col]), i))
        r[row], r[piv] = r[piv], r[row]
        s[row], s[piv] = s[piv], s[row]
        inv = one / r[row][col]
        r[row] = [x * inv for x in r[row]]
        s[row] = [x * inv for x in s[row]]
        for i in range(n):
            if i != row and r[i][col]:
                f = r[i][col]
                r[i] = [x - f * y for x, y in zip(r[i], r[row])]
                s[i] = [x - f * y for x, y in zip(s[i], s[row])]
        pivots.append(col)
        row += 1
    return r, pivots, s


def rank(a, zero, one) -> int:
    return len(row_reduce(a, zero, one)[1])


def fraction_free_rank(a: Sequence[Sequence[Any]], exact_div: Callable[[Any, Any], Any], one) -> int:
    """Rank over an integral domain by Bareiss elimination.

    Every intermediate entry is a minor of ``a``, so each division by the
    previous pivot is exact and no fractions appear.
    """
    r = [list(row) for row in a]
    n = len(r)
    m = len(r[0]) if n else 0
    prev = one
    row = 0
    for col in range(m):
        cands = [i for i in range(row, n) if r[i][col]]
        if not cands:
            continue
        piv = min(cands, key=lambda i: (getattr(r[i][col], "degree", 0), i))
        r[row], r[piv] = r[piv], r[row]
        p = r[row][col]
        for i in range(row + 1, n):
            f = r[i][col]
            for j in range(col + 1, m):
                r[i][j] = exact_div(p * r[i][j] - f * r[row][j], prev)
            r[i][col] = f - f
        prev = p
        row += 1
        if row == n:
            break
    return row


def inverse(a, zero, one) -> Matrix:
    r, pivots, s = row_reduce(a, zero, one)
    if len(pivots) != len(a):
        raise NotInvertible("matrix is singular")
    return s


def det(a, zero, one):
    """Determinant by Gaussian elimination."""
    n = len(a)
    r = [list(row) for row in a]
    d = one
    for col in range(n):
        cands = [i for i in range(col, n) if r[i][col]]
        if not cands:
            return zero
        piv = min(cands, key=lambda i: (_weight(r[i][col]), i))
        if piv != col:
            r[col], r[piv] = r[piv], r[col]
            d = -d
        p = r[col][col]
        d = d * p
        inv = one / p
        for i in range(col + 1, n):
            if r[i][col]:
                f = r[i][col] * inv
                r[i] = [x - f * y for x, y in zip(r[i], r[col])]
    return d


def rank_factorization(a, zero, one) -> Tuple[Matrix, Matrix, int]:
    """Invertible ``S, T`` and rank ``r`` with ``S @ a @ T == diag(I_r, 0)``.

    ``S`` comes from row reducing ``a`` to ``B``; the nonzero rows of ``B`` are
    its first ``r`` rows and are independent, so row reducing ``B^T`` gives
    exactly ``diag(I_r, 0)`` and its transformation, transposed, is ``T``.
    """
    b, pivots, s = row_reduce(a, zero, one)
    _, _, t_left = row_reduce(transpose(b), zero, one)
    return s, transpose(t_left), len(pivots)
