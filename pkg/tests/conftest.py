"""Shared independent oracles for the test suite.

These deliberately avoid the package's own linear algebra: plain Gaussian
elimination with Fractions, recursive cofactor determinants, and direct
product-space searches. Expected values asserted in the tests were computed
with these oracles.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

import pytest

from logdisc import graphs


def naive_solve(matrix, rhs):
    """Textbook Gaussian elimination over Fractions (partial pivot)."""
    n = len(matrix)
    a = [[Fraction(v) for v in row] + [Fraction(rhs[i])] for i, row in enumerate(matrix)]
    for col in range(n):
        pivot = next(i for i in range(col, n) if a[i][col] != 0)
        a[col], a[pivot] = a[pivot], a[col]
        for i in range(col + 1, n):
            factor = a[i][col] / a[col][col]
            for j in range(col, n + 1):
                a[i][j] -= factor * a[col][j]
    x = [Fraction(0)] * n
    for i in reversed(range(n)):
        acc = a[i][n] - sum(a[i][j] * x[j] for j in range(i + 1, n))
        x[i] = acc / a[i][i]
    return x


def cofactor_det(matrix):
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
        total += (-1) ** j * matrix[0][j] * cofactor_det(minor)
    return total


def negative_definite_oracle(matrix) -> bool:
    n = len(matrix)
    for k in range(1, n + 1):
        minor = cofactor_det([row[:k] for row in matrix[:k]])
        if (-1) ** k * minor <= 0:
            return False
    return True


def adjunction_rows(graph, values_by_id):
    """Residuals of (K + sum (1-a_j)E_j + sum b C).E_i computed straight
    from the intersection matrix, independent of the solver's system."""
    ids = graph.exceptional_ids
    matrix = graphs.intersection_matrix(graph)
    rows = []
    for i, curve_id in enumerate(ids):
        acc = Fraction(-2) - matrix[i][i]  # K.E_i for a rational curve
        for j, other_id in enumerate(ids):
            acc += (1 - values_by_id[other_id]) * matrix[i][j]
        for boundary_id in graph.boundary_ids:
            coeff = graph.node_map[boundary_id].boundary_coeff
            acc += coeff * graph.multiplicity(curve_id, boundary_id)
        rows.append(acc)
    return rows


def exhaustive_complement(coeffs, n, eps):
    """All (eps, n)-complements by direct product enumeration (tiny inputs).

    Returns the list of (plus, padding) choices with coefficients in
    (1/n)Z, plus >= the rounding floor, everything <= 1 - eps, sum 2,
    padding at most 2n points.
    """
    out = []
    lows = [((n + 1) * b).__floor__() for b in coeffs]
    cap = (n * (1 - eps)).__floor__()
    ranges = [range(low, cap + 1) for low in lows]
    for ts in itertools.product(*ranges):
        gap = 2 * n - sum(ts)
        if gap < 0:
            continue
        if gap == 0:
            out.append((ts, ()))
            continue
        if cap < 1:
            continue
        for count in range(1, 2 * n + 1):
            for pad in itertools.combinations_with_replacement(range(1, cap + 1), count):
                if sum(pad) == gap:
                    out.append((ts, pad))
    return out


@pytest.fixture
def chain34():
    return graphs.generate_chain([3, 4])
