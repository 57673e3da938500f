"""Exact integer linear algebra: fraction-free determinant and adjugate."""

from __future__ import annotations

from fractions import Fraction

Matrix = list[list[int]]

COFACTOR_LIMIT = 6


def _check_square(m: Matrix) -> int:
    n = len(m)
    if any(len(row) != n for row in m):
        raise ValueError("matrix must be square")
    return n


def bareiss_det(m: Matrix) -> int:
    """Determinant by Bareiss fraction-free elimination; every division is exact."""
    n = _check_square(m)
    if n == 0:
        return 1
    a = [[int(x) for x in row] for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * pivot - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = pivot
    return sign * a[n - 1][n - 1]


def exact_det(m: Matrix) -> int:
    return bareiss_det(m)


def _minor(m: Matrix, i: int, j: int) -> Matrix:
    return [row[:j] + row[j + 1 :] for r, row in enumerate(m) if r != i]


def _adjugate_cofactor(m: Matrix) -> Matrix:
    n = len(m)
    if n == 1:
        return [[1]]
    adj = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            c = bareiss_det(_minor(m, i, j))
            adj[j][i] = c if (i + j) % 2 == 0 else -c
    return adj


def _adjugate_solve(m: Matrix, det: int) -> Matrix:
    """``det * m^-1`` column by column from a Bareiss triangularization."""
    n = len(m)
    aug = [[int(x) for x in row] + [int(i == r) for i in range(n)] for r, row in enumerate(m)]
    width = 2 * n
    prev = 1
    for k in range(n):
        if aug[k][k] == 0:
            for i in range(k + 1, n):
                if aug[i][k] != 0:
                    aug[k], aug[i] = aug[i], aug[k]
                    break
        pivot = aug[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, width):
                aug[i][j] = (aug[i][j] * pivot - aug[i][k] * aug[k][j]) // prev
            aug[i][k] = 0
        prev = pivot
    adj = [[0] * n for _ in range(n)]
    for col in range(n):
        x = [Fraction(0)] * n
        for i in range(n - 1, -1, -1):
            s = Fraction(aug[i][n + col]) - sum(aug[i][j] * x[j] for j in range(i + 1, n))
            x[i] = s / aug[i][i]
        for i in range(n):
            v = x[i] * det
            if v.denominator != 1:
                raise ArithmeticError("adjugate entry is not integral")
            adj[i][col] = int(v)
    return adj


def adjugate(m: Matrix) -> Matrix:
    """Classical adjoint: ``adjugate(m) @ m == det(m) * I`` exactly."""
    n = _check_square(m)
    if n <= COFACTOR_LIMIT:
        return _adjugate_cofactor(m)
    det = bareiss_det(m)
    if det == 0:
        return _adjugate_cofactor(m)
    return _adjugate_solve(m, det)


def matmul(a: Matrix, b: Matrix) -> Matrix:
    inner = len(b)
    cols = len(b[0]) if b else 0
    return [[sum(a[i][k] * b[k][j] for k in range(inner)) for j in range(cols)] for i in range(len(a))]


def identity(n: int, scale: int = 1) -> Matrix:
    return [[scale if i == j else 0 for j in range(n)] for i in range(n)]


def is_sdd_matrix(m: Matrix) -> bool:
    """Strict row diagonal dominance ``|m_ii| > sum_{j != i} |m_ij|``."""
    n = _check_square(m)
    return all(abs(m[i][i]) > sum(abs(m[i][j]) for j in range(n) if j != i) for i in range(n))
