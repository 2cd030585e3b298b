from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from logdisc.linalg import (
    SingularSystemError,
    leading_principal_minors,
    solve_exact,
)

from conftest import cofactor_det, naive_solve

F = Fraction


def test_minors_of_chain_matrix():
    m = [[-3, 1], [1, -4]]
    assert leading_principal_minors(m) == [-3, 11]


def test_minors_with_zero_pivot_fall_back():
    m = [[0, 1], [1, 0]]
    assert leading_principal_minors(m) == [0, -1]


@st.composite
def square_int_matrix(draw):
    n = draw(st.integers(1, 5))
    return [
        [draw(st.integers(-6, 6)) for _ in range(n)] for _ in range(n)
    ]


@given(square_int_matrix())
@settings(max_examples=200, deadline=None)
def test_minors_match_cofactor_expansion(m):
    expected = [cofactor_det([row[:k] for row in m[:k]]) for k in range(1, len(m) + 1)]
    assert leading_principal_minors(m) == expected


@given(square_int_matrix())
@settings(max_examples=200, deadline=None)
def test_solve_matches_naive_gaussian(m):
    n = len(m)
    rhs = [F(i + 1, 3) for i in range(n)]
    det = cofactor_det(m)
    matrix = [[F(v) for v in row] for row in m]
    if det == 0:
        with pytest.raises(SingularSystemError):
            solve_exact(matrix, rhs)
        return
    assert solve_exact(matrix, rhs) == naive_solve(matrix, rhs)


def test_solve_empty_system():
    assert solve_exact([], []) == []


def test_solve_scales_fractional_rows():
    matrix = [[F(1, 2), F(0)], [F(0), F(1, 3)]]
    rhs = [F(1, 4), F(1, 5)]
    assert solve_exact(matrix, rhs) == [F(1, 2), F(3, 5)]
