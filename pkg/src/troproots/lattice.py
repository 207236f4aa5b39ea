"""Exact integer linear algebra: Smith normal form with transforms.

Matrices are plain lists of lists of Python ints; everything is exact.
"""

from __future__ import annotations

from typing import NamedTuple, Sequence

Matrix = list[list[int]]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def mat_vec(m: Sequence[Sequence[int]], v: Sequence[int]) -> list[int]:
    return [sum(a * b for a, b in zip(row, v)) for row in m]


class SmithForm(NamedTuple):
    """``U @ A @ V == S`` with ``U``, ``V`` unimodular and ``S`` diagonal,
    ``S[i][i] | S[i+1][i+1]`` and nonnegative diagonal."""

    S: Matrix
    U: Matrix
    V: Matrix
    rank: int

    @property
    def invariant_factors(self) -> list[int]:
        return [self.S[i][i] for i in range(self.rank)]


def smith_normal_form(a: Sequence[Sequence[int]], ncols: int | None = None) -> SmithForm:
    """Smith normal form of an integer matrix.

    ``ncols`` is only needed for matrices with zero rows.
    """
    S = [list(map(int, row)) for row in a]
    m = len(S)
    n = len(S[0]) if m else (ncols or 0)
    U = identity(m)
    V = identity(n)

    def swap_rows(i, j):
        S[i], S[j] = S[j], S[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in S:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, k):
        # row_dst += k * row_src
        if k:
            S[dst] = [x + k * y for x, y in zip(S[dst], S[src])]
            U[dst] = [x + k * y for x, y in zip(U[dst], U[src])]

    def add_col(dst, src, k):
        if k:
            for row in S:
                row[dst] += k * row[src]
            for row in V:
                row[dst] += k * row[src]

    t = 0
    while t < min(m, n):
        while True:
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    x = S[i][j]
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), i, j)
            if best is None:
                return SmithForm(S, U, V, t)
            _, i, j = best
            swap_rows(t, i)
            swap_cols(t, j)
            p = S[t][t]
            clean = True
            for i in range(t + 1, m):
                if S[i][t]:
                    add_row(i, t, -(S[i][t] // p))
                    clean = clean and S[i][t] == 0
            for j in range(t + 1, n):
                if S[t][j]:
                    add_col(j, t, -(S[t][j] // p))
                    clean = clean and S[t][j] == 0
            if not clean:
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if S[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if S[t][t] < 0:
            S[t] = [-x for x in S[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    return SmithForm(S, U, V, t)


class IntegerSolution(NamedTuple):
    solution: list[int] | None
    # when unsolvable: a row vector u with u @ A == 0 (mod modulus) but
    # u @ b != 0 (mod modulus); modulus 0 means exact equality
    obstruction: list[int] | None
    modulus: int | None


def solve_integer(a: Sequence[Sequence[int]], b: Sequence[int], ncols: int | None = None) -> IntegerSolution:
    """Find an integer ``x`` with ``a @ x == b``, or a certificate that none exists."""
    snf = smith_normal_form(a, ncols)
    S, U, V, rank = snf
    n = len(V)
    ub = mat_vec(U, b)
    y = [0] * n
    for i, c in enumerate(ub):
        if i < rank:
            d = S[i][i]
            if c % d:
                return IntegerSolution(None, U[i], d)
            y[i] = c // d
        elif c:
            return IntegerSolution(None, U[i], 0)
    return IntegerSolution(mat_vec(V, y), None, None)


def integer_kernel(a: Sequence[Sequence[int]], ncols: int | None = None) -> list[list[int]]:
    """A Z-basis of ``{x in Z^n : a @ x == 0}``."""
    snf = smith_normal_form(a, ncols)
    n = len(snf.V)
    return [[snf.V[i][j] for i in range(n)] for j in range(snf.rank, n)]
