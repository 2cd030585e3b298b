"""Complement arithmetic on the projective line and coefficient transforms.

An (eps, n)-complement for a boundary B = {b_i} on the line is a coefficient
assignment B+ with n*b integral, total degree sum exactly 2, the rounding
condition floor((n+1) b_i) <= n b_i+ per original point, and every
coefficient <= 1 - eps.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .discrepancy import solve_log_discrepancies
from .graphs import (
    CurveNode,
    DualGraph,
    GraphStructureError,
    chain_order,
    classify,
    generate_chain,
)
from .linalg import SingularSystemError, leading_principal_minors, solve_exact
from .rationals import ceil_fraction, floor_fraction


class ComplementError(ValueError):
    pass


# -- standard multiplicities ------------------------------------------------

def is_standard(x: Fraction) -> bool:
    """Membership in {(k-1)/k : k natural} union {1}."""
    if x == 1:
        return True
    if not (0 <= x < 1):
        return False
    return (1 / (1 - x)).denominator == 1


def standard_k(x: Fraction) -> Optional[int]:
    """The k with x = (k-1)/k, or None (x = 1 included as None)."""
    if 0 <= x < 1 and (1 / (1 - x)).denominator == 1:
        return int(1 / (1 - x))
    return None


def standard_below(x: Fraction) -> tuple[Fraction, Optional[int]]:
    """Largest member of the standard set <= x, with its k (None for 1)."""
    if not (0 <= x <= 1):
        raise ValueError("x outside [0,1]")
    if x == 1:
        return Fraction(1), None
    k = floor_fraction(1 / (1 - x))
    return Fraction(k - 1, k), k


def standard_above(x: Fraction) -> tuple[Fraction, Optional[int]]:
    """Smallest member of the standard set >= x, with its k (None for 1)."""
    if not (0 <= x <= 1):
        raise ValueError("x outside [0,1]")
    if x == 1:
        return Fraction(1), None
    k = ceil_fraction(1 / (1 - x))
    return Fraction(k - 1, k), k


# -- complements ------------------------------------------------------------

def floor_condition(b: Fraction, b_plus: Fraction, n: int) -> bool:
    if not (0 <= b <= 1):
        raise ComplementError("coefficient outside [0,1]")
    if n < 1:
        raise ComplementError("n must be a positive integer")
    return floor_fraction((n + 1) * b) <= n * b_plus


@dataclass(frozen=True)
class BoundaryP1:
    """Multiset of boundary coefficients on the line, kept sorted."""

    coeffs: tuple[Fraction, ...]

    @staticmethod
    def of(coeffs: Iterable[Fraction]) -> "BoundaryP1":
        cs = tuple(sorted(Fraction(c) for c in coeffs))
        for c in cs:
            if not (0 <= c <= 1):
                raise ComplementError("coefficient outside [0,1]")
        return BoundaryP1(coeffs=cs)

    @property
    def total(self) -> Fraction:
        return sum(self.coeffs, Fraction(0))


@dataclass(frozen=True)
class ComplementResult:
    n: int
    plus_coeffs: tuple[Fraction, ...]     # aligned with the sorted originals
    padding_coeffs: tuple[Fraction, ...]  # new points
    eps_achieved: Fraction

    @property
    def all_coeffs(self) -> tuple[Fraction, ...]:
        return self.plus_coeffs + self.padding_coeffs

    @property
    def total(self) -> Fraction:
        return sum(self.all_coeffs, Fraction(0))


def is_complement_p1(B: BoundaryP1, result: ComplementResult, eps: Fraction) -> bool:
    coeffs = result.all_coeffs
    if not coeffs:
        return False
    if any(result.n * c != int(result.n * c) for c in coeffs):
        return False
    if result.total != 2:
        return False
    if len(result.plus_coeffs) != len(B.coeffs):
        return False
    plus = sorted(result.plus_coeffs)
    for b, b_plus in zip(sorted(B.coeffs), plus):
        if not floor_condition(b, b_plus, result.n):
            return False
    top = max(coeffs)
    if result.eps_achieved != 1 - top:
        return False
    return top <= 1 - eps


def complement_index_window(delta: Fraction) -> int:
    """The m with 1/(m+1) < delta <= 1/m."""
    if not (0 < delta <= 1):
        raise ComplementError("delta must be in (0,1]")
    return floor_fraction(1 / delta)


def coefficient_class(b: Fraction) -> int:
    """The k with (k-1)/k <= b < k/(k+1); k = 1 for b < 1/2."""
    if not (0 <= b < 1):
        raise ComplementError("coefficient class needs b in [0,1)")
    return floor_fraction(1 / (1 - b))


def complement_attempt(B: BoundaryP1, n: int) -> Optional[ComplementResult]:
    """Minimal rounding at index n, greedy padding capped at (n-1)/n.

    Returns None when the minimal rounded coefficients already exceed
    degree 2 or the remaining deficit cannot be filled under the cap.
    """
    plus = tuple(Fraction(floor_fraction((n + 1) * b), n) for b in B.coeffs)
    deficit = 2 - sum(plus, Fraction(0))
    if deficit < 0:
        return None
    cap = Fraction(n - 1, n)
    padding: list[Fraction] = []
    while deficit > 0:
        if cap == 0:
            return None
        piece = min(deficit, cap)
        padding.append(piece)
        deficit -= piece
    coeffs = plus + tuple(padding)
    return ComplementResult(
        n=n,
        plus_coeffs=plus,
        padding_coeffs=tuple(padding),
        eps_achieved=1 - max(coeffs),
    )


@dataclass(frozen=True)
class ComplementSearch:
    result: ComplementResult
    m: int
    k: int
    tried: tuple[int, ...]   # candidate indices attempted, in order


def find_curve_complement(B: BoundaryP1, delta: Fraction) -> ComplementSearch:
    """Complement construction for a delta-lc boundary with sum < 2.

    Candidate indices run from the class k of the largest coefficient up to
    m + 1; the first index whose minimal rounding fits degree 2 wins. Every
    produced coefficient is <= m/(m+1), so the result is 1/(m+1)-lc.
    """
    if B.total >= 2:
        raise ComplementError("boundary degree sum must be < 2")
    m = complement_index_window(delta)
    top = max(B.coeffs, default=Fraction(0))
    if top > 1 - delta:
        raise ComplementError("boundary is not delta-lc (max coefficient > 1 - delta)")
    k = coefficient_class(top)
    tried: list[int] = []
    for n in range(k, m + 2):
        tried.append(n)
        result = complement_attempt(B, n)
        if result is not None:
            return ComplementSearch(result=result, m=m, k=k, tried=tuple(tried))
    raise ComplementError(
        f"no complement with index <= {m + 1}; tried {tried}"
    )  # unreachable: some index in k..m+1 always fits a delta-lc boundary


# -- coefficient rounding transforms ----------------------------------------

def round_up_to_standard(coeffs: Sequence[Fraction], tau: Fraction) -> list[Fraction]:
    """Replace b by (k-1)/k for the smallest k with b in [(k-1)/k - tau, (k-1)/k].

    Coefficients matching no window are unchanged; the output dominates the
    input componentwise.
    """
    if tau < 0:
        raise ComplementError("tau must be >= 0")
    out: list[Fraction] = []
    for b in coeffs:
        if not (0 <= b <= 1):
            raise ComplementError("coefficient outside [0,1]")
        out.append(_round_one_standard(b, tau))
    return out


def _round_one_standard(b: Fraction, tau: Fraction) -> Fraction:
    if b == 1:
        return b
    k = ceil_fraction(1 / (1 - b))  # smallest k with (k-1)/k >= b
    value = Fraction(k - 1, k)
    if value - tau <= b:
        return value
    return b


def round_up_to_set(
    coeffs: Sequence[Fraction], tau: Fraction, targets: Sequence[Fraction]
) -> list[Fraction]:
    """Replace b by the biggest a in targets with b in [a - tau, a]."""
    if not targets:
        raise ComplementError("empty target set")
    if tau < 0:
        raise ComplementError("tau must be >= 0")
    values = sorted(set(Fraction(a) for a in targets), reverse=True)
    for a in values:
        if not (0 <= a <= 1):
            raise ComplementError("target outside [0,1]")
    out: list[Fraction] = []
    for b in coeffs:
        if not (0 <= b <= 1):
            raise ComplementError("coefficient outside [0,1]")
        hit = next((a for a in values if a - tau <= b <= a), None)
        out.append(hit if hit is not None else b)
    return out


# -- bounded-denominator subboundary on a chain ------------------------------

@dataclass(frozen=True)
class SubboundaryResult:
    u: tuple[Fraction, ...]       # in chain order
    chain_ids: tuple[str, ...]
    path: str                     # zero | all-two | structured | fallback
    denominator_bound: int        # reported D(delta)
    delta: Fraction


def _antinef_rows(weights: Sequence[int], u: Sequence[Fraction]) -> list[Fraction]:
    r = len(weights)
    rows = []
    for i in range(r):
        acc = u[i] * weights[i]
        acc -= u[i - 1] if i > 0 else Fraction(1)
        acc -= u[i + 1] if i < r - 1 else Fraction(1)
        if r == 1:
            acc = u[0] * weights[0] - 2
        rows.append(acc)
    return rows


def satisfies_subboundary(weights: Sequence[int], u: Sequence[Fraction]) -> bool:
    return all(row <= 0 for row in _antinef_rows(weights, u)) and all(
        0 <= x < 1 for x in u
    )


def _solve_segment(
    weights: Sequence[int], boundary_value: Fraction, attach: str
) -> list[Fraction]:
    """Equality rows of the chain system on a head or tail segment.

    attach = 'right' solves indices 0..s-1 given the neighbor to the right
    of the last index; attach = 'left' is the mirror. The outermost row is
    an end row (constant 1).
    """
    s = len(weights)
    if s == 0:
        return []
    matrix = [[Fraction(0)] * s for _ in range(s)]
    rhs = [Fraction(0)] * s
    for i in range(s):
        matrix[i][i] = Fraction(weights[i])
        if i > 0:
            matrix[i][i - 1] = Fraction(-1)
        if i < s - 1:
            matrix[i][i + 1] = Fraction(-1)
    if attach == "right":
        rhs[0] = Fraction(1)
        rhs[s - 1] += boundary_value
    else:
        rhs[s - 1] = Fraction(1)
        rhs[0] += boundary_value
    return solve_exact(matrix, rhs)


def _run_start(weights: Sequence[int], i: int) -> int:
    """Start of the maximal weight-2 run immediately left of position i."""
    j = i
    while j > 0 and weights[j - 1] == 2:
        j -= 1
    return j


def _structured_candidate(
    weights: Sequence[int], valley: int, seed: Fraction
) -> Optional[list[Fraction]]:
    """Seed the -2 run ending at the valley, solve the outer segments."""
    r = len(weights)
    i = valley  # 0-based
    j = _run_start(weights, i)
    try:
        head = _solve_segment(weights[:j], seed, attach="right") if j > 0 else []
        tail = (
            _solve_segment(weights[i + 1 :], seed, attach="left") if i < r - 1 else []
        )
    except SingularSystemError:
        return None
    u = head + [seed] * (i - j + 1) + tail
    return u if satisfies_subboundary(weights, u) else None


def _fallback_candidate(
    weights: Sequence[int], q_max: int
) -> Optional[tuple[list[Fraction], int]]:
    """Depth-first search over the grid {0, 1/q, ..., (q-1)/q}, largest first."""
    r = len(weights)
    for q in range(2, q_max + 1):
        grid = [Fraction(t, q) for t in reversed(range(q))]
        u: list[Fraction] = []

        def prefix_ok() -> bool:
            # check the newest row whose variables are all chosen
            k = len(u)
            if k >= 2:
                idx = k - 2
                left = u[idx - 1] if idx > 0 else Fraction(1)
                if u[idx] * weights[idx] - left - u[idx + 1] > 0:
                    return False
            if k == r:
                if r == 1:
                    return u[0] * weights[0] - 2 <= 0
                left = u[r - 2] if r > 1 else Fraction(1)
                return u[r - 1] * weights[r - 1] - left - 1 <= 0
            return True

        def dfs() -> bool:
            if len(u) == r:
                return True
            for value in grid:
                u.append(value)
                if prefix_ok() and dfs():
                    return True
                u.pop()
            return False

        if dfs() and satisfies_subboundary(weights, u):
            return list(u), q
    return None


def chain_subboundary(graph: DualGraph, delta: Fraction) -> SubboundaryResult:
    """Bounded-denominator solution of the antinef inequality system.

    Every row u_i w_i - u_{i-1} - u_{i+1} <= 0 (ends read a fixed neighbor
    value of 1) holds exactly; the reported bound D(delta) dominates every
    denominator in the answer.
    """
    cls = classify(graph)
    if cls.tag != "A":
        raise GraphStructureError(f"subboundary needs a chain, got {cls}")
    order = chain_order(graph)
    weights = [graph.node_map[i].weight for i in order]
    r = len(order)

    if delta == 0:
        return SubboundaryResult(
            u=tuple([Fraction(0)] * r),
            chain_ids=tuple(order),
            path="zero",
            denominator_bound=1,
            delta=delta,
        )
    if delta < 0:
        raise ComplementError("delta must be >= 0")

    profile = solve_log_discrepancies(graph)
    if profile.mld < delta:
        raise ComplementError("chain is not delta-lc")

    if all(w == 2 for w in weights):
        return SubboundaryResult(
            u=tuple([Fraction(0)] * r),
            chain_ids=tuple(order),
            path="all-two",
            denominator_bound=2 * ceil_fraction(1 / delta),
            delta=delta,
        )

    values = [profile.value(i) for i in order]
    valley = values.index(min(values))
    mirror_valley = r - 1 - values[::-1].index(min(values))
    divisor_cap = ceil_fraction(1 / delta)
    for orientation, v in (("fwd", valley), ("rev", mirror_valley)):
        ws = weights if orientation == "fwd" else weights[::-1]
        vv = v if orientation == "fwd" else r - 1 - v
        for d in range(1, divisor_cap + 1):
            candidate = _structured_candidate(ws, vv, Fraction(1, 2 * d))
            if candidate is not None:
                u = candidate if orientation == "fwd" else candidate[::-1]
                bound = _denominator_bound(weights, valley, mirror_valley, delta)
                assert max(x.denominator for x in u) <= bound
                return SubboundaryResult(
                    u=tuple(u),
                    chain_ids=tuple(order),
                    path="structured",
                    denominator_bound=bound,
                    delta=delta,
                )
    bound = _denominator_bound(weights, valley, mirror_valley, delta)
    found = _fallback_candidate(weights, bound)
    if found is None:
        raise ComplementError("no bounded-denominator subboundary found")
    u, _ = found
    assert max(x.denominator for x in u) <= bound
    return SubboundaryResult(
        u=tuple(u),
        chain_ids=tuple(order),
        path="fallback",
        denominator_bound=bound,
        delta=delta,
    )


def _segment_determinant(weights: Sequence[int]) -> int:
    if not weights:
        return 1
    s = len(weights)
    matrix = [[0] * s for _ in range(s)]
    for i in range(s):
        matrix[i][i] = weights[i]
        if i > 0:
            matrix[i][i - 1] = -1
        if i < s - 1:
            matrix[i][i + 1] = -1
    return abs(leading_principal_minors(matrix)[-1])


def _denominator_bound(
    weights: Sequence[int], valley: int, mirror_valley: int, delta: Fraction
) -> int:
    """2 * ceil(1/delta) * lcm of the solved-segment determinants."""
    r = len(weights)
    lcm = 1
    for ws, v in (
        (list(weights), valley),
        (list(reversed(weights)), r - 1 - mirror_valley),
    ):
        j = _run_start(ws, v)
        for segment in (ws[:j], ws[v + 1 :]):
            lcm = math.lcm(lcm, max(_segment_determinant(segment), 1))
    return 2 * ceil_fraction(1 / delta) * lcm


# -- empirical safety margins for standard rounding ---------------------------

ROUNDING_GRID_MAX_R = 3
ROUNDING_GRID_WEIGHTS = (2, 3)
ROUNDING_GRID_DENOMINATOR = 10
ROUNDING_TAU_CANDIDATES = tuple(
    sorted(
        {Fraction(1, q) for q in (100, 90, 80, 70, 60, 50, 45, 40, 30, 25, 20, 10, 5, 4, 3, 2)}
    )
)


@dataclass(frozen=True)
class RoundingSafetyTable:
    """Largest grid tau per m such that rounding a single attached boundary
    coefficient up to a standard value never drops the mld below 1/m."""

    taus: dict[int, Fraction]
    grid_instances: int


def _attached_chain(weights: Sequence[int], position: int, coeff: Fraction) -> DualGraph:
    base = generate_chain(list(weights))
    target = base.exceptional_ids[position]
    nodes = list(base.nodes) + [CurveNode(id="zb", boundary_coeff=coeff)]
    edges = list(base.edges) + [("zb", target, 1)]
    return DualGraph.build(nodes, edges)


def _farey(max_denominator: int) -> list[Fraction]:
    values = {Fraction(0), Fraction(1)}
    for q in range(1, max_denominator + 1):
        for p in range(q + 1):
            values.add(Fraction(p, q))
    return sorted(values)


def rounding_safety_violations(
    m: int, tau: Fraction, max_r: int = ROUNDING_GRID_MAX_R
) -> tuple[int, list[tuple[tuple[int, ...], int, Fraction]]]:
    """Instances and violations of the mld-preservation property at tau.

    An instance participates when the pair (chain + one attached coefficient)
    has mld >= 1/m and the rounded coefficient is standard; it is a violation
    when the rounded pair has mld < 1/m.
    """
    threshold = Fraction(1, m)
    checked = 0
    violations: list[tuple[tuple[int, ...], int, Fraction]] = []
    memo: dict[tuple, Fraction] = {}

    def chain_mld(ws: tuple[int, ...], pos: int, b: Fraction) -> Fraction:
        key = (ws, pos, b)
        if key not in memo:
            memo[key] = solve_log_discrepancies(_attached_chain(ws, pos, b)).mld
        return memo[key]

    for r in range(1, max_r + 1):
        for ws in itertools.product(ROUNDING_GRID_WEIGHTS, repeat=r):
            for pos in range(r):
                for b in _farey(ROUNDING_GRID_DENOMINATOR):
                    rounded = _round_one_standard(b, tau)
                    if not is_standard(rounded):
                        continue
                    if chain_mld(ws, pos, b) < threshold:
                        continue
                    checked += 1
                    if chain_mld(ws, pos, rounded) < threshold:
                        violations.append((ws, pos, b))
    return checked, violations


def safe_rounding_tau_table(ms: Sequence[int] = (2, 3)) -> RoundingSafetyTable:
    taus: dict[int, Fraction] = {}
    total = 0
    for m in ms:
        best = Fraction(0)
        for tau in sorted(ROUNDING_TAU_CANDIDATES, reverse=True):
            checked, violations = rounding_safety_violations(m, tau)
            total = max(total, checked)
            if not violations:
                best = tau
                break
        taus[m] = best
    return RoundingSafetyTable(taus=taus, grid_instances=total)
