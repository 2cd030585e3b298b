"""Exhaustive and randomized verification harness.

Every structural claim the package relies on is re-checked here at desk
scale: exact residuals and unimodality over enumerated chains, the valley
bounds, the curve-complement construction against a brute-force lattice
search, the subboundary system, and the tower accounting identities and
negativity bounds over enumerated and seeded-random towers.
"""

from __future__ import annotations

import csv
import functools
import io
import itertools
import random
import time
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable, Iterator, Optional, Sequence

from . import blowup, complement, discrepancy, graphs
from .rationals import (
    ceil_fraction,
    floor_fraction,
    format_rational,
    format_rational_list,
    parse_rational,
)


@dataclass(frozen=True)
class EnumerationSpec:
    max_r: int = 7
    max_weight: int = 5
    fork_max_r: int = 5
    fork_max_weight: int = 4
    max_p: int = 8
    max_denominator: int = 12
    max_points: int = 6
    depth: int = 6
    tower_count: int = 1000
    tower_max_r: int = 6
    bounds_max_r: int = 5
    bounds_max_weight: int = 4
    closed_form_max_r: int = 60
    rounding_denominator: int = 50
    deltas: tuple[Fraction, ...] = (Fraction(1, 2), Fraction(1, 3), Fraction(1, 5))
    complement_deltas: tuple[Fraction, ...] = (
        Fraction(1, 2),
        Fraction(1, 3),
        Fraction(1, 4),
    )
    subboundary_deltas: tuple[Fraction, ...] = (Fraction(1, 3), Fraction(1, 5))
    seed: int = 1


@dataclass
class VerificationReport:
    property_id: str
    instances: int
    failures: list[tuple[str, str]] = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.failures


class UnknownPropertyError(ValueError):
    pass


# -- enumerations -------------------------------------------------------------

def enumerate_chain_weights(max_r: int, max_weight: int) -> Iterator[tuple[int, ...]]:
    for r in range(1, max_r + 1):
        yield from itertools.product(range(2, max_weight + 1), repeat=r)


def enumerate_fork_weights(max_r: int, max_weight: int) -> Iterator[tuple[int, ...]]:
    for r in range(2, max_r + 1):
        yield from itertools.product(range(2, max_weight + 1), repeat=r)


def enumerate_boundaries(
    max_points: int, max_denominator: int
) -> Iterator[tuple[Fraction, ...]]:
    """Nondecreasing coefficient tuples on the 1/q lattice with sum < 2."""
    values = [Fraction(t, max_denominator) for t in range(1, max_denominator + 1)]
    yield ()
    for count in range(1, max_points + 1):
        for combo in itertools.combinations_with_replacement(values, count):
            if sum(combo) < 2:
                yield combo


# -- brute-force complement oracle --------------------------------------------

def brute_force_complement(
    B: complement.BoundaryP1, n: int, eps: Fraction
) -> Optional[complement.ComplementResult]:
    """Exhaustive lattice search for an (eps, n)-complement.

    Coefficients live in (1/n)Z: originals in [floor((n+1)b)/n, 1-eps],
    padding points (at most 2n of them) in (0, 1-eps]. Returns the
    lexicographically least solution, scanning original assignments in
    ascending order and padding greedily largest-first.
    """
    if n > 12 or len(B.coeffs) > 8:
        raise complement.ComplementError("brute-force guard exceeded (n <= 12, points <= 8)")
    if n < 1:
        raise complement.ComplementError("n must be positive")
    mins = [floor_fraction((n + 1) * b) for b in B.coeffs]
    cap = floor_fraction(n * (1 - eps))
    if any(mn > cap for mn in mins):
        return None
    target = 2 * n
    suffix_min = [0] * (len(mins) + 1)
    for i in reversed(range(len(mins))):
        suffix_min[i] = suffix_min[i + 1] + mins[i]

    chosen: list[int] = []

    def pad_for(gap: int) -> Optional[list[int]]:
        if gap == 0:
            return []
        if cap < 1 or gap < 0 or gap > 2 * n * cap:
            return None
        pieces = []
        while gap > 0:
            piece = min(gap, cap)
            pieces.append(piece)
            gap -= piece
        return pieces if len(pieces) <= 2 * n else None

    def dfs(idx: int, acc: int) -> Optional[list[int]]:
        if acc + suffix_min[idx] > target:
            return None
        if idx == len(mins):
            return pad_for(target - acc)
        for t in range(mins[idx], cap + 1):
            if acc + t + suffix_min[idx + 1] > target:
                break
            chosen.append(t)
            pad = dfs(idx + 1, acc + t)
            if pad is not None:
                return pad
            chosen.pop()
        return None

    pad = dfs(0, 0)
    if pad is None:
        return None
    plus = tuple(Fraction(t, n) for t in chosen)
    padding = tuple(Fraction(t, n) for t in pad)
    coeffs = plus + padding
    return complement.ComplementResult(
        n=n,
        plus_coeffs=plus,
        padding_coeffs=padding,
        eps_achieved=1 - max(coeffs),
    )


# -- E-type atlas --------------------------------------------------------------

@dataclass(frozen=True)
class AtlasRow:
    family: int
    p: int
    contractible: bool
    mld: Optional[Fraction]
    index: Optional[int]


def e_type_atlas(p_max: int) -> list[AtlasRow]:
    if p_max < 2:
        raise ValueError("p_max must be >= 2")
    rows: list[AtlasRow] = []
    for family in range(1, 16):
        for p in range(2, p_max + 1):
            graph = graphs.generate_e_type(family, p)
            if graphs.is_contractible(graph):
                profile = discrepancy.solve_log_discrepancies(graph)
                rows.append(AtlasRow(family, p, True, profile.mld, profile.index))
            else:
                rows.append(AtlasRow(family, p, False, None, None))
    return rows


def atlas_to_csv(rows: Sequence[AtlasRow]) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["family", "p", "contractible", "mld", "index"])
    for row in rows:
        writer.writerow(
            [
                row.family,
                row.p,
                "yes" if row.contractible else "no",
                format_rational(row.mld) if row.mld is not None else "",
                row.index if row.index is not None else "",
            ]
        )
    return out.getvalue()


def atlas_from_csv(text: str) -> list[AtlasRow]:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or rows[0] != ["family", "p", "contractible", "mld", "index"]:
        raise ValueError("atlas CSV must start with header family,p,contractible,mld,index")
    out = []
    for r in rows[1:]:
        contractible = r[2] == "yes"
        out.append(
            AtlasRow(
                family=int(r[0]),
                p=int(r[1]),
                contractible=contractible,
                mld=parse_rational(r[3]) if r[3] else None,
                index=int(r[4]) if r[4] else None,
            )
        )
    return out


# -- property suite ------------------------------------------------------------

@functools.lru_cache(maxsize=65536)
def _chain_case(ws: tuple[int, ...]) -> tuple:
    graph = graphs.generate_chain(list(ws))
    profile = discrepancy.solve_log_discrepancies(graph)
    order = graphs.chain_order(graph)
    values = tuple(profile.value(i) for i in order)
    return graph, profile, values


@functools.lru_cache(maxsize=16384)
def _fork_case(ws: tuple[int, ...]) -> tuple:
    graph = graphs.generate_dr(list(ws))
    profile = discrepancy.solve_log_discrepancies(graph)
    return graph, profile


def _prop_residual_zero(spec: EnumerationSpec, report: VerificationReport) -> None:
    for ws in enumerate_chain_weights(spec.max_r, spec.max_weight):
        graph, profile, _ = _chain_case(ws)
        report.instances += 1
        if any(r != 0 for r in discrepancy.residuals(graph, profile)):
            report.failures.append((f"chain {ws}", "nonzero residual"))
    for ws in enumerate_fork_weights(spec.fork_max_r, spec.fork_max_weight):
        graph, profile = _fork_case(ws)
        report.instances += 1
        if any(r != 0 for r in discrepancy.residuals(graph, profile)):
            report.failures.append((f"fork {ws}", "nonzero residual"))
    for family in range(1, 16):
        for p in range(2, spec.max_p + 1):
            graph = graphs.generate_e_type(family, p)
            if not graphs.is_contractible(graph):
                continue
            profile = discrepancy.solve_log_discrepancies(graph)
            report.instances += 1
            if any(r != 0 for r in discrepancy.residuals(graph, profile)):
                report.failures.append((f"e-type {family},{p}", "nonzero residual"))


def _prop_unimodality(spec: EnumerationSpec, report: VerificationReport) -> None:
    for ws in enumerate_chain_weights(spec.max_r, spec.max_weight):
        _, profile, values = _chain_case(ws)
        report.instances += 1
        valley = profile.unimodal_valley
        head = values[: valley - 1 + 1]
        tail = values[valley - 1 :]
        descending = all(head[i] >= head[i + 1] for i in range(len(head) - 1))
        ascending = all(tail[i] <= tail[i + 1] for i in range(len(tail) - 1))
        if not (descending and ascending):
            report.failures.append(
                (f"chain {ws}", f"not unimodal: {format_rational_list(values)}")
            )


def _prop_monotone_difference(spec: EnumerationSpec, report: VerificationReport) -> None:
    for ws in enumerate_chain_weights(spec.max_r, spec.max_weight):
        _, _, values = _chain_case(ws)
        report.instances += 1
        for i in range(1, len(values) - 1):
            if values[i - 1] <= values[i] and not values[i] <= values[i + 1]:
                report.failures.append((f"chain {ws}", f"row {i}: weak step broken"))
                break
            if values[i - 1] < values[i] and not values[i] < values[i + 1]:
                report.failures.append((f"chain {ws}", f"row {i}: strict step broken"))
                break


def _prop_fork_monotonicity(spec: EnumerationSpec, report: VerificationReport) -> None:
    for ws in enumerate_fork_weights(spec.fork_max_r, spec.fork_max_weight):
        graph, _ = _fork_case(ws)
        reduction = discrepancy.dr_reduce(graph)
        report.instances += 1
        values = reduction.chain_values
        if any(values[i] > values[i + 1] for i in range(len(values) - 1)):
            report.failures.append((f"fork {ws}", "chain values not nondecreasing"))


def _prop_fork_reduction(spec: EnumerationSpec, report: VerificationReport) -> None:
    for ws in enumerate_fork_weights(spec.fork_max_r, spec.fork_max_weight):
        graph, full = _fork_case(ws)
        reduction = discrepancy.dr_reduce(graph)
        report.instances += 1
        if reduction.profile.a != full.a:
            report.failures.append((f"fork {ws}", "reduced path disagrees with full solve"))


def _prop_closed_form(spec: EnumerationSpec, report: VerificationReport) -> None:
    for r in range(2, spec.closed_form_max_r + 1):
        closed = discrepancy.chain_324_profile(r)
        solved = discrepancy.solve_log_discrepancies(
            graphs.generate_chain([3] + [2] * (r - 2) + [4])
        )
        report.instances += 1
        if closed.a != solved.a or closed.index != solved.index:
            report.failures.append((f"r={r}", "closed form disagrees with solver"))


def _prop_chain_contractible(spec: EnumerationSpec, report: VerificationReport) -> None:
    for ws in enumerate_chain_weights(spec.max_r, spec.max_weight):
        report.instances += 1
        if not graphs.is_contractible(graphs.generate_chain(list(ws))):
            report.failures.append((f"chain {ws}", "not negative definite"))


def _prop_classify_generators(spec: EnumerationSpec, report: VerificationReport) -> None:
    for ws in enumerate_chain_weights(spec.max_r, spec.max_weight):
        report.instances += 1
        cls = graphs.classify(graphs.generate_chain(list(ws)))
        if (cls.tag, cls.r) != ("A", len(ws)):
            report.failures.append((f"chain {ws}", f"classified {cls}"))
    for family in range(1, 16):
        for p in range(2, spec.max_p + 1):
            report.instances += 1
            cls = graphs.classify(graphs.generate_e_type(family, p))
            if (cls.tag, cls.family, cls.p) != ("E", family, p):
                report.failures.append((f"e-type {family},{p}", f"classified {cls}"))
    for ws in enumerate_fork_weights(spec.fork_max_r, spec.fork_max_weight):
        report.instances += 1
        cls = graphs.classify(graphs.generate_dr(list(ws)))
        if (cls.tag, cls.r) != ("D", len(ws)):
            report.failures.append((f"fork {ws}", f"classified {cls}"))


def _prop_valley_bounds(spec: EnumerationSpec, report: VerificationReport) -> None:
    for ws in enumerate_chain_weights(spec.max_r, spec.max_weight):
        graph, profile, _ = _chain_case(ws)
        for delta in spec.deltas:
            if profile.mld < delta:
                continue
            report.instances += 1
            bounds = discrepancy.bound_report(profile, graph, delta)
            if not (bounds.l_within and bounds.pair_within):
                report.failures.append(
                    (
                        f"chain {ws} delta={format_rational(delta)}",
                        f"l={bounds.l} l'={bounds.lprime}",
                    )
                )


def _prop_curve_complement(spec: EnumerationSpec, report: VerificationReport) -> None:
    for coeffs in enumerate_boundaries(spec.max_points, spec.max_denominator):
        B = complement.BoundaryP1.of(coeffs)
        for delta in spec.complement_deltas:
            if B.coeffs and max(B.coeffs) > 1 - delta:
                continue  # the guarantee needs a delta-lc pair
            report.instances += 1
            m = complement.complement_index_window(delta)
            eps = Fraction(1, m + 1)
            label = f"B={format_rational_list(coeffs)} delta={format_rational(delta)}"
            try:
                search = complement.find_curve_complement(B, delta)
            except complement.ComplementError as exc:
                report.failures.append((label, f"search failed: {exc}"))
                continue
            result = search.result
            allowed = set()
            for k in range(1, m + 1):
                allowed.update({k, k + 1})
            if result.n not in allowed:
                report.failures.append((label, f"index {result.n} outside 1..m+1"))
            elif result.eps_achieved < eps:
                report.failures.append(
                    (label, f"eps {format_rational(result.eps_achieved)} below bound")
                )
            elif not complement.is_complement_p1(B, result, eps):
                report.failures.append((label, "complement check rejected the result"))


def _prop_complement_agreement(spec: EnumerationSpec, report: VerificationReport) -> None:
    for coeffs in enumerate_boundaries(spec.max_points, spec.max_denominator):
        B = complement.BoundaryP1.of(coeffs)
        for delta in spec.complement_deltas:
            if B.coeffs and max(B.coeffs) > 1 - delta:
                continue
            m = complement.complement_index_window(delta)
            eps = Fraction(1, m + 1)
            k = complement.coefficient_class(max(B.coeffs, default=Fraction(0)))
            label = f"B={format_rational_list(coeffs)} delta={format_rational(delta)}"
            for n in range(k, m + 2):
                report.instances += 1
                mine = complement.complement_attempt(B, n)
                brute = brute_force_complement(B, n, eps)
                if (mine is None) != (brute is None):
                    report.failures.append(
                        (label, f"n={n}: attempt={mine is not None} brute={brute is not None}")
                    )
                elif mine is not None and not complement.is_complement_p1(B, brute, eps):
                    report.failures.append((label, f"n={n}: brute output rejected"))
                if mine is not None:
                    break


def _prop_rounding(spec: EnumerationSpec, report: VerificationReport) -> None:
    grid = complement._farey(spec.rounding_denominator)
    taus = (
        Fraction(0),
        Fraction(1, 50),
        Fraction(1, 20),
        Fraction(1, 10),
        Fraction(1, 5),
        Fraction(1, 2),
    )
    for tau in taus:
        out = complement.round_up_to_standard(grid, tau)
        again = complement.round_up_to_standard(out, tau)
        for b, once, twice in zip(grid, out, again):
            report.instances += 1
            label = f"b={format_rational(b)} tau={format_rational(tau)}"
            if once != twice:
                report.failures.append((label, "not idempotent"))
            elif once < b:
                report.failures.append((label, "not monotone"))
            elif once != b and not complement.is_standard(once):
                report.failures.append((label, "changed entry not standard"))
            elif tau == 0 and complement.is_standard(b) and once != b:
                report.failures.append((label, "tau=0 moved a standard value"))
            elif tau == 0 and once != b:
                report.failures.append((label, "tau=0 changed a value"))


def _prop_rounding_safety(spec: EnumerationSpec, report: VerificationReport) -> None:
    table = complement.safe_rounding_tau_table((2, 3))
    for m, tau in sorted(table.taus.items()):
        checked, violations = complement.rounding_safety_violations(m, tau)
        report.instances += checked
        for ws, pos, b in violations:
            report.failures.append(
                (
                    f"m={m} tau={format_rational(tau)} chain {ws} pos {pos}",
                    f"b={format_rational(b)} drops mld below 1/{m}",
                )
            )


def _prop_subboundary(spec: EnumerationSpec, report: VerificationReport) -> None:
    for ws in enumerate_chain_weights(spec.max_r, spec.max_weight):
        graph, profile, _ = _chain_case(ws)
        for delta in spec.subboundary_deltas:
            if profile.mld < delta:
                continue
            report.instances += 1
            label = f"chain {ws} delta={format_rational(delta)}"
            result = complement.chain_subboundary(graph, delta)
            if not complement.satisfies_subboundary(list(ws), list(result.u)):
                report.failures.append((label, "inequality system violated"))
            elif max(x.denominator for x in result.u) > result.denominator_bound:
                report.failures.append((label, "denominator above reported bound"))


def _crepant_up_scripts(model: blowup.SmoothModel) -> list[list[tuple]]:
    """Deterministic small scripts: every single, every double, and two-step
    extensions of each double (nested double, single on the new curve)."""
    scripts: list[list[tuple]] = []
    for i in model.ids:
        scripts.append([("on", i)])
    for a, b, m in model.pairs:
        scripts.append([("between", a, b)])
        scripts.append([("between", a, b), ("between-new", a)])
        scripts.append([("between", a, b), ("on-new",)])
    return scripts


def _apply_script(model: blowup.SmoothModel, script: list[tuple]) -> blowup.SmoothModel:
    current = model
    last_new: Optional[str] = None
    for step in script:
        if step[0] == "on":
            current = blowup.blow_up_on(current, step[1])
        elif step[0] == "between":
            current = blowup.blow_up_between(current, step[1], step[2])
        elif step[0] == "between-new":
            current = blowup.blow_up_between(current, last_new, step[1])
        elif step[0] == "on-new":
            current = blowup.blow_up_on(current, last_new)
        last_new = current.provenance[-1].new_id
    return current


def _check_blowdown_tree(
    top: blowup.SmoothModel,
    delta: Fraction,
    report: VerificationReport,
    label: str,
) -> None:
    """Walk every blow-down sequence from the top model, checking that
    negativity stays nonpositive and within the component bounds."""
    seen: set = set()

    def visit(state: blowup.SmoothModel) -> None:
        key = (state.curves, state.pairs)
        if key in seen:
            return
        seen.add(key)
        report.instances += 1
        rep = blowup.negativity_report(state)
        if any(v > 0 for v in rep.per_curve.values()):
            report.failures.append((label, "positive negativity on a reached model"))
            return
        bounds = blowup.check_negativity_bounds(state, delta)
        if not bounds.ok:
            bad = [p for p in bounds.parts if not p.ok]
            report.failures.append(
                (label, f"component bound violated: {bad[0].shape} {bad[0].ids}")
            )
            return
        minus_ones = [c.id for c in state.curves if c.is_minus_one]
        for curve_id in minus_ones:
            before_total = rep.total
            child = blowup.blow_down(state, curve_id)
            neighbors = state.neighbors(curve_id)
            if all(m == 1 for m in neighbors.values()):
                child_total = blowup.negativity_report(child).total
                n_f = rep.per_curve[curve_id]
                if len(neighbors) == 1 and child_total != before_total:
                    report.failures.append((label, "single-type contraction moved the total"))
                if len(neighbors) == 2 and child_total != before_total + n_f:
                    report.failures.append((label, "double-type contraction total mismatch"))
            visit(child)

    visit(top)


def _prop_tower_bounds(spec: EnumerationSpec, report: VerificationReport) -> None:
    cases: list[tuple[str, graphs.DualGraph]] = []
    for ws in enumerate_chain_weights(spec.bounds_max_r, spec.bounds_max_weight):
        cases.append((f"chain {ws}", graphs.generate_chain(list(ws))))
    for ws in enumerate_fork_weights(
        min(spec.fork_max_r, spec.bounds_max_r), spec.bounds_max_weight
    ):
        cases.append((f"fork {ws}", graphs.generate_dr(list(ws))))
    for label, graph in cases:
        profile = discrepancy.solve_log_discrepancies(graph)
        delta = profile.mld
        base = blowup.model_from_solved_graph(graph, profile)
        for script in _crepant_up_scripts(base):
            top = _apply_script(base, script)
            _check_blowdown_tree(top, delta, report, f"{label} script {script}")


def _prop_double_run(spec: EnumerationSpec, report: VerificationReport) -> None:
    rng = random.Random(spec.seed)
    deltas = [Fraction(1, 2), Fraction(1, 3), Fraction(1, 5)]
    for delta in deltas:
        bound = ceil_fraction(2 * (1 - delta) / delta)
        for _ in range(100):
            r = rng.randint(2, 4)
            ws = [rng.randint(2, 4) for _ in range(r)]
            graph = graphs.generate_chain(ws)
            profile = discrepancy.solve_log_discrepancies(graph)
            if profile.mld < delta:
                continue
            model = blowup.model_from_solved_graph(graph, profile)
            order = graphs.chain_order(graph)
            pos = rng.randrange(len(order) - 1)
            left, right = order[pos], order[pos + 1]
            moves: list[blowup.Move] = []
            current = model
            anchor = left
            other = right
            while True:
                a_low = current.curve(anchor).a + current.curve(other).a - delta / 2
                a_high = min(Fraction(1), current.curve(anchor).a + current.curve(other).a)
                if a_low > a_high:
                    break
                denom = rng.choice([2, 3, 4, 6, 12])
                steps = floor_fraction(a_high * denom) - ceil_fraction(a_low * denom)
                if steps < 0:
                    a_new = a_high
                else:
                    a_new = Fraction(
                        ceil_fraction(a_low * denom) + rng.randint(0, steps), denom
                    )
                move = blowup.BlowUpBetween(
                    id1=anchor, id2=other, a_new=a_new, new_id=f"u{len(moves) + 1}"
                )
                nxt = blowup.apply_move(current, move)
                if blowup.negativity(nxt, move.new_id) < -delta / 2:
                    break
                moves.append(move)
                current = nxt
                other = anchor if rng.random() < 0.5 else other
                anchor = move.new_id
                if len(moves) > bound + 2:
                    break
            if not moves:
                continue
            report.instances += 1
            label = f"delta={format_rational(delta)} chain {ws} run {len(moves)}"
            try:
                run = blowup.count_nested_double_run(model, moves, delta)
            except blowup.AdmissibilityError as exc:
                report.failures.append((label, f"generator produced inadmissible run: {exc}"))
                continue
            if not run.ok:
                report.failures.append(
                    (label, f"run length {run.length} exceeds bound {run.bound}")
                )


def random_towers(spec: EnumerationSpec) -> VerificationReport:
    """Seeded random towers re-checking the per-move accounting identities,
    the inverse-move identity, and the single blow-up jump bound."""
    report = VerificationReport(property_id="tower-identities", instances=0)
    rng = random.Random(spec.seed)
    for tower in range(spec.tower_count):
        r = rng.randint(1, spec.tower_max_r)
        ws = [rng.randint(2, 4) for _ in range(r)]
        graph = graphs.generate_chain(ws)
        profile = discrepancy.solve_log_discrepancies(graph)
        delta = profile.mld
        model = blowup.model_from_solved_graph(graph, profile)
        label = f"tower {tower} chain {ws}"
        for _ in range(spec.depth):
            kind = rng.random()
            minus_ones = [c.id for c in model.curves if c.is_minus_one]
            if kind < 0.2 and minus_ones:
                model = blowup.blow_down(model, rng.choice(minus_ones))
                continue
            report.instances += 1
            if kind < 0.6:
                beta = rng.choice(model.ids)
                choice = rng.random()
                if choice < 0.5:
                    a_new = None  # crepant
                elif choice < 0.75:
                    a_new = model.curve(beta).a + delta
                else:
                    a_new = model.curve(beta).a + Fraction(rng.randint(1, 7), 7)
                before = model
                model = blowup.blow_up_on(before, beta, a_new)
                move = model.provenance[-1]
            else:
                pairs = [(a, b) for a, b, m in model.pairs]
                if not pairs:
                    report.instances -= 1
                    continue
                a_id, b_id = rng.choice(pairs)
                choice = rng.random()
                if choice < 0.5:
                    a_new = None
                else:
                    a_new = (
                        model.curve(a_id).a
                        + model.curve(b_id).a
                        - Fraction(rng.randint(0, 3), 12)
                    )
                before = model
                model = blowup.blow_up_between(before, a_id, b_id, a_new)
                move = model.provenance[-1]
            identities = blowup.check_blowup_identities(before, model, move)
            if not identities.ok:
                report.failures.append((label, f"identity failed: {identities.checks}"))
            undone = blowup.blow_down(model, move.new_id)
            if not undone.same_state(before):
                report.failures.append((label, "blow_down after blow_up is not identity"))
            if isinstance(move, blowup.BlowUpOn):
                if blowup.negativity(before, move.curve_id) >= delta - 1:
                    jump = blowup.check_single_blowup_jump(before, model, move, delta)
                    if not jump.ok:
                        report.failures.append(
                            (label, f"jump margin negative: {jump.margin}")
                        )
    return report


PROPERTIES: dict[str, Callable[[EnumerationSpec, VerificationReport], None]] = {
    "residual-zero": _prop_residual_zero,
    "unimodality": _prop_unimodality,
    "monotone-difference": _prop_monotone_difference,
    "fork-monotonicity": _prop_fork_monotonicity,
    "fork-reduction": _prop_fork_reduction,
    "closed-form-family": _prop_closed_form,
    "chain-contractibility": _prop_chain_contractible,
    "classify-generators": _prop_classify_generators,
    "valley-bounds": _prop_valley_bounds,
    "curve-complement": _prop_curve_complement,
    "complement-agreement": _prop_complement_agreement,
    "rounding": _prop_rounding,
    "rounding-safety": _prop_rounding_safety,
    "subboundary": _prop_subboundary,
    "tower-bounds": _prop_tower_bounds,
    "double-run": _prop_double_run,
}

SUITES: dict[str, tuple[str, ...]] = {
    "default": tuple(PROPERTIES) + ("tower-identities",),
    "quick": (
        "residual-zero",
        "unimodality",
        "closed-form-family",
        "rounding",
        "fork-reduction",
    ),
}

QUICK_SPEC = EnumerationSpec(
    max_r=5,
    max_weight=4,
    fork_max_r=4,
    fork_max_weight=3,
    closed_form_max_r=20,
    tower_count=50,
    rounding_denominator=20,
)


def enumerate_and_verify(
    spec: EnumerationSpec, properties: Sequence[str]
) -> list[VerificationReport]:
    reports: list[VerificationReport] = []
    for prop in properties:
        start = time.monotonic()
        if prop == "tower-identities":
            report = random_towers(spec)
        elif prop in PROPERTIES:
            report = VerificationReport(property_id=prop, instances=0)
            PROPERTIES[prop](spec, report)
        else:
            raise UnknownPropertyError(f"unknown property {prop!r}")
        report.elapsed = time.monotonic() - start
        reports.append(report)
    return reports


def reports_to_csv(reports: Sequence[VerificationReport]) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["property", "instances", "failures"])
    for report in reports:
        writer.writerow([report.property_id, report.instances, len(report.failures)])
    return out.getvalue()


def reports_from_csv(text: str) -> list[tuple[str, int, int]]:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or rows[0] != ["property", "instances", "failures"]:
        raise ValueError("report CSV must start with header property,instances,failures")
    return [(r[0], int(r[1]), int(r[2])) for r in rows[1:]]
