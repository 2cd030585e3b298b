"""Exact log discrepancies on resolution dual graphs.

For every exceptional curve E_i (rational, weight w_i = -E_i^2) the crepant
pullback condition (K + sum (1-a_j)E_j + sum b_C C) . E_i = 0 gives the row

    a_i w_i - sum_{j != i} m_ij a_j = 2 - sum_{j != i} m_ij - sum_C b_C m_iC

and the profile is the unique exact solution of that system.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .graphs import (
    DualGraph,
    GraphStructureError,
    chain_order,
    classify,
    generate_chain,
    is_contractible,
)
from .linalg import SingularSystemError, solve_exact
from .rationals import format_rational, lcm_denominators, parse_rational


class NotContractibleError(ValueError):
    """The exceptional intersection matrix is not negative definite."""


@dataclass(frozen=True)
class DiscrepancyProfile:
    ids: tuple[str, ...]          # canonical (lexicographic) order
    a: tuple[Fraction, ...]       # log discrepancies, aligned with ids
    mld: Fraction
    index: int                    # lcm of the denominators of the a_i
    unimodal_valley: Optional[int] = None  # 1-based chain position, chains only

    def value(self, curve_id: str) -> Fraction:
        return self.a[self.ids.index(curve_id)]

    def as_dict(self) -> dict[str, Fraction]:
        return dict(zip(self.ids, self.a))


def _system(graph: DualGraph):
    ids = graph.exceptional_ids
    index = {i: k for k, i in enumerate(ids)}
    n = len(ids)
    matrix = [[Fraction(0)] * n for _ in range(n)]
    rhs = [Fraction(0)] * n
    for k, i in enumerate(ids):
        matrix[k][k] = Fraction(graph.node_map[i].weight)
        acc = Fraction(2)
        for nb, mult in graph.adjacency[i].items():
            node = graph.node_map[nb]
            if node.is_boundary:
                acc -= node.boundary_coeff * mult
            else:
                matrix[k][index[nb]] = Fraction(-mult)
                acc -= mult
        rhs[k] = acc
    return ids, matrix, rhs


def residuals(graph: DualGraph, profile: DiscrepancyProfile) -> list[Fraction]:
    """Row residuals of the defining system; all zero for a valid profile."""
    ids, matrix, rhs = _system(graph)
    values = [profile.value(i) for i in ids]
    return [
        sum(matrix[k][j] * values[j] for j in range(len(ids))) - rhs[k]
        for k in range(len(ids))
    ]


def solve_log_discrepancies(graph: DualGraph) -> DiscrepancyProfile:
    ids = graph.exceptional_ids
    if not ids:
        return DiscrepancyProfile(ids=(), a=(), mld=Fraction(1), index=1)
    if not graph.exceptional_connected():
        raise GraphStructureError("disconnected exceptional locus")
    if not is_contractible(graph):
        raise NotContractibleError(
            "intersection matrix is not negative definite (graph not contractible)"
        )
    _, matrix, rhs = _system(graph)
    try:
        values = solve_exact(matrix, rhs)
    except SingularSystemError as exc:  # unreachable after the minor check
        raise NotContractibleError(str(exc))
    profile = DiscrepancyProfile(
        ids=ids,
        a=tuple(values),
        mld=min(values),
        index=lcm_denominators(values),
        unimodal_valley=None,
    )
    assert all(r == 0 for r in residuals(graph, profile))
    valley = _valley_position(graph, profile)
    if valley is not None:
        profile = DiscrepancyProfile(
            ids=profile.ids,
            a=profile.a,
            mld=profile.mld,
            index=profile.index,
            unimodal_valley=valley,
        )
    return profile


def _valley_position(graph: DualGraph, profile: DiscrepancyProfile) -> Optional[int]:
    if graph.boundary_ids:
        return None
    try:
        cls = classify(graph)
    except GraphStructureError:
        return None
    if cls.tag != "A":
        return None
    order = chain_order(graph)
    values = [profile.value(i) for i in order]
    low = min(values)
    return values.index(low) + 1


def chain_values(graph: DualGraph, profile: DiscrepancyProfile) -> list[Fraction]:
    """Profile values in chain order (chains only)."""
    return [profile.value(i) for i in chain_order(graph)]


def mld(profile: DiscrepancyProfile) -> Fraction:
    return profile.mld


def is_eps_lc(profile: DiscrepancyProfile, eps: Fraction) -> bool:
    if eps < 0:
        raise ValueError("eps must be >= 0")
    return profile.mld >= eps


def discrepancy_index(profile: DiscrepancyProfile) -> int:
    return profile.index


def chain_324_profile(r: int) -> DiscrepancyProfile:
    """Closed-form profile of the chain with weights (3, 2, ..., 2, 4).

    The interior rows force constant consecutive differences t, the two end
    rows force a_1 = (1-t)/2 and a_r = (1+t)/3, and consistency of
    a_r = a_1 - (r-1)t pins t = 1/(6r-1).
    """
    if r < 2:
        raise ValueError("chain needs r >= 2")
    t = Fraction(1, 6 * r - 1)
    a1 = (1 - t) / 2
    values = [a1 - (i - 1) * t for i in range(1, r)]
    values.append((1 + t) / 3)
    graph = generate_chain([3] + [2] * (r - 2) + [4])
    return DiscrepancyProfile(
        ids=graph.exceptional_ids,
        a=tuple(values),
        mld=min(values),
        index=lcm_denominators(values),
        unimodal_valley=values.index(min(values)) + 1,
    )


@dataclass(frozen=True)
class BoundReport:
    delta: Fraction
    valley: int
    l: int          # weights > 2 from the valley (inclusive) up to r-1
    lprime: int     # weights > 2 from 1 up to the valley (inclusive)
    l_within: bool       # l * delta <= 1
    pair_within: bool    # (l + l') * delta <= 2


def bound_report(
    profile: DiscrepancyProfile, graph: DualGraph, delta: Fraction
) -> BoundReport:
    if delta <= 0:
        raise ValueError("delta must be positive")
    cls = classify(graph)
    if cls.tag != "A":
        raise GraphStructureError(f"bound report needs a chain, got {cls}")
    if profile.mld < delta:
        raise ValueError("profile is not delta-lc")
    order = chain_order(graph)
    values = [profile.value(i) for i in order]
    valley = values.index(min(values)) + 1
    weights = [graph.node_map[i].weight for i in order]
    r = len(order)
    l = sum(1 for j in range(valley, r) if weights[j - 1] > 2)
    lprime = sum(1 for j in range(1, valley + 1) if weights[j - 1] > 2)
    return BoundReport(
        delta=delta,
        valley=valley,
        l=l,
        lprime=lprime,
        l_within=l * delta <= 1,
        pair_within=(l + lprime) * delta <= 2,
    )


@dataclass(frozen=True)
class DrReduction:
    """Reduced chain system of a fork graph.

    The two weight-2 leaves satisfy 2a - a_1 - 1 = 0, so a = a' = (a_1+1)/2
    and the fork row collapses to a_1 (w_1 - 1) - a_2 = 0.
    """

    chain_ids: tuple[str, ...]        # fork node first, then along the arm
    leaf_ids: tuple[str, str]
    matrix: tuple[tuple[Fraction, ...], ...]
    rhs: tuple[Fraction, ...]
    chain_values: tuple[Fraction, ...]
    leaf_value: Fraction
    profile: DiscrepancyProfile       # assembled full-graph profile


def dr_reduce(graph: DualGraph) -> DrReduction:
    cls = classify(graph)
    if cls.tag != "D":
        raise GraphStructureError(f"not a fork graph: {cls}")
    deg: dict[str, int] = {i: 0 for i in graph.exceptional_ids}
    for a, b, _ in graph.edges:
        if a in deg and b in deg:
            deg[a] += 1
            deg[b] += 1
    center = next(i for i in graph.exceptional_ids if deg[i] == 3)
    leaf_candidates = sorted(
        nb
        for nb in graph.adjacency[center]
        if not graph.node_map[nb].is_boundary
        and deg[nb] == 1
        and graph.node_map[nb].weight == 2
    )
    leaves = (leaf_candidates[0], leaf_candidates[1])
    chain_ids = [center]
    prev = None
    while True:
        nxt = [
            nb
            for nb in graph.adjacency[chain_ids[-1]]
            if nb != prev
            and nb not in leaves
            and not graph.node_map[nb].is_boundary
        ]
        if not nxt:
            break
        prev = chain_ids[-1]
        chain_ids.append(nxt[0])
    r = len(chain_ids)
    weights = [graph.node_map[i].weight for i in chain_ids]
    matrix = [[Fraction(0)] * r for _ in range(r)]
    rhs = [Fraction(0)] * r
    matrix[0][0] = Fraction(weights[0] - 1)
    if r > 1:
        matrix[0][1] = Fraction(-1)
    rhs[0] = Fraction(0)
    for i in range(1, r):
        matrix[i][i] = Fraction(weights[i])
        matrix[i][i - 1] = Fraction(-1)
        if i < r - 1:
            matrix[i][i + 1] = Fraction(-1)
        rhs[i] = Fraction(1) if i == r - 1 else Fraction(0)
    values = solve_exact(matrix, rhs)
    leaf_value = (values[0] + 1) / 2
    mapping = dict(zip(chain_ids, values))
    mapping[leaves[0]] = leaf_value
    mapping[leaves[1]] = leaf_value
    ids = graph.exceptional_ids
    a = tuple(mapping[i] for i in ids)
    profile = DiscrepancyProfile(
        ids=ids, a=a, mld=min(a), index=lcm_denominators(a)
    )
    return DrReduction(
        chain_ids=tuple(chain_ids),
        leaf_ids=leaves,
        matrix=tuple(tuple(row) for row in matrix),
        rhs=tuple(rhs),
        chain_values=tuple(values),
        leaf_value=leaf_value,
        profile=profile,
    )


def profile_to_csv(profile: DiscrepancyProfile) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["id", "a"])
    for curve_id, value in zip(profile.ids, profile.a):
        writer.writerow([curve_id, format_rational(value)])
    writer.writerow(["mld", format_rational(profile.mld)])
    writer.writerow(["index", str(profile.index)])
    return out.getvalue()


def profile_from_csv(text: str) -> DiscrepancyProfile:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or rows[0] != ["id", "a"]:
        raise ValueError("profile CSV must start with header id,a")
    pairs: list[tuple[str, Fraction]] = []
    footer: dict[str, str] = {}
    for row in rows[1:]:
        if row[0] in ("mld", "index"):
            footer[row[0]] = row[1]
        else:
            pairs.append((row[0], parse_rational(row[1])))
    pairs.sort(key=lambda kv: kv[0])
    ids = tuple(k for k, _ in pairs)
    a = tuple(v for _, v in pairs)
    mld_value = parse_rational(footer["mld"]) if "mld" in footer else min(a, default=Fraction(1))
    index_value = int(footer["index"]) if "index" in footer else lcm_denominators(a)
    return DiscrepancyProfile(ids=ids, a=a, mld=mld_value, index=index_value)
