"""Fraction-free exact linear algebra on small integer matrices.

The solver uses Bareiss elimination: all intermediate values are integer
minors, divisions are exact, and the pivot is always the first row with a
nonzero entry in the current column (canonical order in, canonical order
out). Fractions appear only in the back-substitution.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence


class SingularSystemError(ValueError):
    pass


def leading_principal_minors(matrix: Sequence[Sequence[int]]) -> list[int]:
    """The n leading principal minors det(M[:k,:k]), k = 1..n.

    Computed by fraction-free elimination without row swaps; once a zero
    pivot appears, that minor and all later ones are reported via direct
    expansion of the affected leading blocks.
    """
    n = len(matrix)
    a = [[int(v) for v in row] for row in matrix]
    minors: list[int] = []
    prev = 1
    for k in range(n):
        if a[k][k] == 0:
            # Zero pivot: fall back to cofactor expansion for the rest.
            for j in range(k, n):
                minors.append(_det_cofactor([row[: j + 1] for row in matrix[: j + 1]]))
            return minors
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        minors.append(a[k][k])
        prev = a[k][k]
    return minors


def _det_cofactor(matrix: Sequence[Sequence[int]]) -> int:
    n = len(matrix)
    if n == 0:
        return 1
    if n == 1:
        return matrix[0][0]
    total = 0
    for j in range(n):
        if matrix[0][j] == 0:
            continue
        minor = [[row[c] for c in range(n) if c != j] for row in matrix[1:]]
        total += (-1) ** j * matrix[0][j] * _det_cofactor(minor)
    return total


def solve_exact(
    matrix: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]
) -> list[Fraction]:
    """Solve A x = b exactly. Raises SingularSystemError if A is singular."""
    n = len(matrix)
    if n == 0:
        return []
    # Scale each row to integers (row scaling leaves the solution unchanged).
    a: list[list[int]] = []
    b: list[int] = []
    for row, r in zip(matrix, rhs):
        scale = 1
        for v in list(row) + [r]:
            scale = math.lcm(scale, Fraction(v).denominator)
        a.append([int(Fraction(v) * scale) for v in row])
        b.append(int(Fraction(r) * scale))

    prev = 1
    for k in range(n):
        pivot_row = next((i for i in range(k, n) if a[i][k] != 0), None)
        if pivot_row is None:
            raise SingularSystemError("singular system: zero column during elimination")
        if pivot_row != k:
            a[k], a[pivot_row] = a[pivot_row], a[k]
            b[k], b[pivot_row] = b[pivot_row], b[k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            b[i] = (b[i] * a[k][k] - a[i][k] * b[k]) // prev
            a[i][k] = 0
        prev = a[k][k]
    if a[n - 1][n - 1] == 0:
        raise SingularSystemError("singular system: zero final pivot")

    x: list[Fraction] = [Fraction(0)] * n
    for i in reversed(range(n)):
        acc = Fraction(b[i])
        for j in range(i + 1, n):
            acc -= a[i][j] * x[j]
        x[i] = acc / a[i][i]
    return x
