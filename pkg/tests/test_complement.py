from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from logdisc.complement import (
    BoundaryP1,
    ComplementError,
    ComplementResult,
    chain_subboundary,
    complement_attempt,
    complement_index_window,
    coefficient_class,
    find_curve_complement,
    floor_condition,
    is_complement_p1,
    is_standard,
    round_up_to_set,
    round_up_to_standard,
    rounding_safety_violations,
    safe_rounding_tau_table,
    satisfies_subboundary,
    standard_above,
    standard_below,
    standard_k,
)
from logdisc.discrepancy import solve_log_discrepancies
from logdisc.graphs import generate_chain, generate_dr

from conftest import exhaustive_complement

F = Fraction

rationals01 = st.fractions(min_value=0, max_value=1, max_denominator=40)


# -- standard set --------------------------------------------------------------

def test_standard_membership():
    assert is_standard(F(0))
    assert is_standard(F(1, 2))
    assert is_standard(F(6, 7))
    assert is_standard(F(1))
    assert not is_standard(F(2, 5))
    assert standard_k(F(6, 7)) == 7
    assert standard_k(F(1)) is None


def test_standard_queries():
    assert standard_below(F(7, 10)) == (F(2, 3), 3)
    assert standard_above(F(7, 10)) == (F(3, 4), 4)
    assert standard_above(F(1)) == (F(1), None)
    assert standard_below(F(1)) == (F(1), None)
    assert standard_above(F(2, 3)) == (F(2, 3), 3)


# -- floor condition -----------------------------------------------------------

def test_floor_condition_example_two_thirds():
    assert floor_condition(F(2, 3), F(2, 3), 3)  # floor(8/3)=2 <= 2


def test_floor_condition_zero():
    for n in (1, 2, 7):
        assert floor_condition(F(0), F(0), n)


def test_floor_condition_rejects():
    assert not floor_condition(F(3, 4), F(1, 2), 4)  # floor(15/4)=3 > 2


@given(rationals01, rationals01, st.integers(1, 10))
@settings(max_examples=200, deadline=None)
def test_floor_condition_matches_definition(b, b_plus, n):
    lhs = ((n + 1) * b).__floor__()
    assert floor_condition(b, b_plus, n) == (lhs <= n * b_plus)


# -- paper examples for the complement check ------------------------------------

def test_two_points_coefficient_one_is_0_1_complement():
    result = ComplementResult(
        n=1, plus_coeffs=(), padding_coeffs=(F(1), F(1)), eps_achieved=F(0)
    )
    assert is_complement_p1(BoundaryP1.of([]), result, F(0))


def test_two_points_coefficient_one_rejected_at_positive_eps():
    result = ComplementResult(
        n=1, plus_coeffs=(), padding_coeffs=(F(1), F(1)), eps_achieved=F(0)
    )
    assert not is_complement_p1(BoundaryP1.of([]), result, F(1, 3))
    assert not is_complement_p1(BoundaryP1.of([]), result, F(1, 100))


def test_three_thirds_is_third_complement():
    result = ComplementResult(
        n=3,
        plus_coeffs=(),
        padding_coeffs=(F(2, 3), F(2, 3), F(2, 3)),
        eps_achieved=F(1, 3),
    )
    assert is_complement_p1(BoundaryP1.of([]), result, F(1, 3))


def test_complement_check_rejects_wrong_sum():
    result = ComplementResult(
        n=2, plus_coeffs=(), padding_coeffs=(F(1, 2),), eps_achieved=F(1, 2)
    )
    assert not is_complement_p1(BoundaryP1.of([]), result, F(1, 2))


def test_complement_check_rejects_non_integral():
    result = ComplementResult(
        n=2, plus_coeffs=(), padding_coeffs=(F(2, 3), F(2, 3), F(2, 3)), eps_achieved=F(1, 3)
    )
    assert not is_complement_p1(BoundaryP1.of([]), result, F(0))


# -- index window and class ------------------------------------------------------

def test_index_window():
    assert complement_index_window(F(1)) == 1
    assert complement_index_window(F(1, 2)) == 2
    assert complement_index_window(F(1, 3)) == 3
    assert complement_index_window(F(2, 5)) == 2
    with pytest.raises(ComplementError):
        complement_index_window(F(0))


def test_coefficient_class():
    assert coefficient_class(F(0)) == 1
    assert coefficient_class(F(1, 3)) == 1
    assert coefficient_class(F(1, 2)) == 2
    assert coefficient_class(F(2, 3)) == 3
    assert coefficient_class(F(3, 4)) == 4


# -- the search ------------------------------------------------------------------

def test_find_empty_boundary_third():
    search = find_curve_complement(BoundaryP1.of([]), F(1, 3))
    assert search.tried == (1, 2)
    result = search.result
    assert result.n == 2
    assert result.padding_coeffs == (F(1, 2),) * 4
    assert result.eps_achieved == F(1, 2) >= F(1, 4)
    # oracle: some n=2 assignment summing to 2 out of halves exists
    assert exhaustive_complement([], 2, F(1, 4))


def test_find_three_quarters_fifth():
    search = find_curve_complement(BoundaryP1.of([F(3, 4)]), F(1, 5))
    result = search.result
    assert (search.m, search.k, result.n) == (5, 4, 4)
    assert result.plus_coeffs == (F(3, 4),)
    assert result.padding_coeffs == (F(3, 4), F(1, 2))
    assert result.eps_achieved == F(1, 4) >= F(1, 6)


@pytest.mark.parametrize("b", [F(0), F(1, 4), F(33, 100)])
def test_find_small_single_coefficient_half(b):
    search = find_curve_complement(BoundaryP1.of([b]), F(1, 2))
    result = search.result
    assert result.n == 2
    expected_plus = F((3 * b).__floor__(), 2)
    assert result.plus_coeffs == (expected_plus,)
    if b < F(1, 3):
        assert expected_plus == 0
        assert result.padding_coeffs == (F(1, 2),) * 4


def test_find_five_thirds_needs_third_index():
    search = find_curve_complement(BoundaryP1.of([F(1, 3)] * 5), F(1, 2))
    assert search.tried == (1, 2, 3)
    assert search.result.n == 3
    assert is_complement_p1(
        BoundaryP1.of([F(1, 3)] * 5), search.result, F(1, 3)
    )
    # oracle: no valid n=2 assignment exists for five 1/3 points
    assert exhaustive_complement([F(1, 3)] * 5, 2, F(1, 3)) == []
    assert exhaustive_complement([F(1, 3)] * 5, 3, F(1, 3)) != []


def test_find_rejects_sum_two():
    with pytest.raises(ComplementError):
        find_curve_complement(BoundaryP1.of([F(1), F(1)]), F(1, 2))


def test_find_rejects_non_delta_lc():
    with pytest.raises(ComplementError):
        find_curve_complement(BoundaryP1.of([F(3, 4)]), F(1, 2))


def test_attempt_failure_modes():
    assert complement_attempt(BoundaryP1.of([]), 1) is None  # deficit unfillable
    assert complement_attempt(BoundaryP1.of([F(1, 3)] * 5), 2) is None  # sum > 2


@given(
    st.lists(st.fractions(min_value=0, max_value=F(2, 3), max_denominator=12), max_size=5),
)
@settings(max_examples=200, deadline=None)
def test_find_meets_window_and_eps_bounds(coeffs):
    B = BoundaryP1.of(coeffs)
    if B.total >= 2:
        return
    delta = F(1, 3)
    search = find_curve_complement(B, delta)
    m = search.m
    assert search.result.n in {n for k in range(1, m + 1) for n in (k, k + 1)}
    assert search.result.eps_achieved >= F(1, m + 1)
    assert is_complement_p1(B, search.result, F(1, m + 1))


# -- rounding transforms ----------------------------------------------------------

def test_round_standard_examples():
    assert round_up_to_standard([F(16, 25)], F(1, 20)) == [F(2, 3)]
    assert round_up_to_standard([F(1, 2)], F(1, 10)) == [F(1, 2)]
    assert round_up_to_standard([F(1, 10)], F(1, 20)) == [F(1, 10)]


def test_round_standard_scan_oracle():
    # scan k = 1..200 for the smallest matching window
    for b in [F(16, 25), F(1, 10), F(7, 9), F(44, 45), F(0), F(1)]:
        for tau in [F(0), F(1, 50), F(1, 20), F(1, 5)]:
            expected = b
            for k in range(1, 201):
                low = F(k - 1, k) - tau
                if low <= b <= F(k - 1, k):
                    expected = F(k - 1, k)
                    break
            assert round_up_to_standard([b], tau) == [expected], (b, tau)


def test_round_set_examples():
    targets = [F(1, 2), F(2, 3)]
    assert round_up_to_set([F(16, 25)], F(1, 20), targets) == [F(2, 3)]
    assert round_up_to_set([F(16, 25)], F(1, 5), targets) == [F(2, 3)]
    assert round_up_to_set([F(1, 10)], F(1, 20), targets) == [F(1, 10)]


def test_round_set_member_stays_or_climbs():
    targets = [F(1, 2), F(5, 9), F(2, 3)]
    assert round_up_to_set([F(1, 2)], F(1, 20), targets) == [F(1, 2)]
    # window [1/2, 11/18] reaches 5/9 but not 2/3
    assert round_up_to_set([F(1, 2)], F(1, 9), targets) == [F(5, 9)]
    # window [1/2, 2/3] reaches 2/3, the biggest target wins
    assert round_up_to_set([F(1, 2)], F(1, 6), targets) == [F(2, 3)]


def test_round_set_rejects_empty():
    with pytest.raises(ComplementError):
        round_up_to_set([F(1, 2)], F(1, 10), [])


@given(st.lists(rationals01, max_size=6), st.fractions(min_value=0, max_value=F(1, 2), max_denominator=30))
@settings(max_examples=300, deadline=None)
def test_round_standard_properties(coeffs, tau):
    once = round_up_to_standard(coeffs, tau)
    assert round_up_to_standard(once, tau) == once
    for before, after in zip(coeffs, once):
        assert after >= before
        assert after == before or is_standard(after)


def test_round_standard_tau_zero_fixes_standard():
    values = [F(0), F(1, 2), F(2, 3), F(3, 4), F(1), F(2, 5)]
    assert round_up_to_standard(values, F(0)) == values


# -- subboundary -------------------------------------------------------------------

def test_subboundary_all_two():
    g = generate_chain([2, 2, 2])
    result = chain_subboundary(g, F(1, 2))
    assert result.u == (F(0),) * 3
    assert result.path == "all-two"


def test_subboundary_zero_mode():
    g = generate_chain([3, 4])
    result = chain_subboundary(g, F(0))
    assert result.u == (F(0),) * 2
    assert result.path == "zero"


def test_subboundary_chain34():
    g = generate_chain([3, 4])
    result = chain_subboundary(g, F(4, 11))
    assert satisfies_subboundary([3, 4], list(result.u))
    assert max(x.denominator for x in result.u) <= result.denominator_bound
    assert any(x > 0 for x in result.u)


def test_subboundary_rejects_low_mld():
    g = generate_chain([3, 4])  # mld 4/11 < 1/2
    with pytest.raises(ComplementError):
        chain_subboundary(g, F(1, 2))


def test_subboundary_rejects_fork():
    from logdisc.graphs import GraphStructureError

    with pytest.raises(GraphStructureError):
        chain_subboundary(generate_dr([2, 2]), F(1, 2))


@given(st.lists(st.integers(2, 5), min_size=1, max_size=6))
@settings(max_examples=120, deadline=None)
def test_subboundary_system_and_bound(ws):
    g = generate_chain(ws)
    profile = solve_log_discrepancies(g)
    for delta in (F(1, 3), F(1, 5)):
        if profile.mld < delta:
            continue
        result = chain_subboundary(g, delta)
        assert satisfies_subboundary(ws, list(result.u))
        assert max(x.denominator for x in result.u) <= result.denominator_bound


# -- rounding safety table ----------------------------------------------------------

def test_safety_table_values_frozen():
    table = safe_rounding_tau_table((2, 3))
    assert table.taus == {2: F(1, 5), 3: F(1, 50)}


def test_safety_holds_at_published_taus():
    table = safe_rounding_tau_table((2, 3))
    for m, tau in table.taus.items():
        checked, violations = rounding_safety_violations(m, tau)
        assert checked > 0
        assert violations == []


def test_safety_847_instance_breaks_coarse_tau():
    # chain (2,3) with 7/9 attached sits at mld exactly 1/3; rounding to 4/5
    # under tau = 1/20 drops it to 8/25
    checked, violations = rounding_safety_violations(3, F(1, 20))
    assert ((2, 3), 0, F(7, 9)) in violations
