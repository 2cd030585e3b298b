"""Smooth-model tower simulator with exact negativity bookkeeping.

A model carries rational curves with integer self-intersections and fixed
coefficients c = 1 - a (a = log discrepancy assigned at tower creation).
The negativity of a curve G is (K + w).G = (-2 - G^2) + sum_j c_j (C_j.G),
never positive on models reached from a crepant top model by contractions.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from .discrepancy import DiscrepancyProfile
from .graphs import CurveNode, DualGraph, classify
from .rationals import ceil_fraction, format_rational, parse_rational


class ModelError(ValueError):
    pass


class AdmissibilityError(ValueError):
    """A recorded tower does not satisfy the filter of the check asked for."""


class NegativityBoundError(AssertionError):
    pass


@dataclass(frozen=True)
class Curve:
    id: str
    self_int: int
    a: Fraction

    @property
    def coeff(self) -> Fraction:
        return 1 - self.a

    @property
    def is_minus_one(self) -> bool:
        return self.self_int == -1


@dataclass(frozen=True)
class BlowDown:
    curve_id: str

    def render(self) -> str:
        return f"down {self.curve_id}"


@dataclass(frozen=True)
class BlowUpOn:
    curve_id: str
    a_new: Fraction
    new_id: str

    def render(self) -> str:
        return f"up-on {self.curve_id} a={format_rational(self.a_new)}"


@dataclass(frozen=True)
class BlowUpBetween:
    id1: str
    id2: str
    a_new: Fraction
    new_id: str

    def render(self) -> str:
        return f"up-between {self.id1} {self.id2} a={format_rational(self.a_new)}"


Move = Union[BlowDown, BlowUpOn, BlowUpBetween]


@dataclass(frozen=True)
class SmoothModel:
    curves: tuple[Curve, ...]                  # sorted by id
    pairs: tuple[tuple[str, str, int], ...]    # (min id, max id, multiplicity)
    provenance: tuple[Move, ...] = ()

    @staticmethod
    def build(curves, pairs, provenance=()) -> "SmoothModel":
        cs = tuple(sorted(curves, key=lambda c: c.id))
        ids = [c.id for c in cs]
        if len(set(ids)) != len(ids):
            raise ModelError("duplicate curve id")
        norm: dict[tuple[str, str], int] = {}
        for a, b, m in pairs:
            if a == b:
                raise ModelError("self-pair in intersection data")
            if m == 0:
                continue
            key = (min(a, b), max(a, b))
            norm[key] = norm.get(key, 0) + m
        for (a, b), m in norm.items():
            if a not in set(ids) or b not in set(ids):
                raise ModelError(f"intersection with unknown curve {a!r}/{b!r}")
            if m < 0:
                raise ModelError("negative intersection multiplicity")
        return SmoothModel(
            curves=cs,
            pairs=tuple((a, b, m) for (a, b), m in sorted(norm.items())),
            provenance=tuple(provenance),
        )

    @property
    def ids(self) -> tuple[str, ...]:
        return tuple(c.id for c in self.curves)

    def curve(self, curve_id: str) -> Curve:
        for c in self.curves:
            if c.id == curve_id:
                return c
        raise ModelError(f"unknown curve {curve_id!r}")

    def mult(self, a: str, b: str) -> int:
        key = (min(a, b), max(a, b))
        for x, y, m in self.pairs:
            if (x, y) == key:
                return m
        return 0

    def neighbors(self, curve_id: str) -> dict[str, int]:
        out: dict[str, int] = {}
        for a, b, m in self.pairs:
            if a == curve_id:
                out[b] = m
            elif b == curve_id:
                out[a] = m
        return out

    def same_state(self, other: "SmoothModel") -> bool:
        return self.curves == other.curves and self.pairs == other.pairs

    def _next_up_id(self) -> str:
        count = sum(
            1 for mv in self.provenance if isinstance(mv, (BlowUpOn, BlowUpBetween))
        )
        return f"u{count + 1}"


def model_from_solved_graph(graph: DualGraph, profile: DiscrepancyProfile) -> SmoothModel:
    if graph.boundary_ids:
        raise ModelError("tower models carry exceptional curves only")
    ids = graph.exceptional_ids
    if tuple(profile.ids) != tuple(ids):
        raise ModelError("profile does not match the graph's curves")
    curves = [
        Curve(id=i, self_int=-graph.node_map[i].weight, a=profile.value(i))
        for i in ids
    ]
    pairs = [(a, b, m) for a, b, m in graph.edges]
    model = SmoothModel.build(curves, pairs)
    bad = [i for i in ids if negativity(model, i) != 0]
    if bad:
        raise ModelError(f"profile does not solve the graph (nonzero rows at {bad})")
    return model


def negativity(model: SmoothModel, curve_id: str) -> Fraction:
    g = model.curve(curve_id)
    acc = Fraction(-2 - g.self_int)
    acc += g.coeff * g.self_int
    for other, m in model.neighbors(curve_id).items():
        acc += model.curve(other).coeff * m
    return acc


@dataclass(frozen=True)
class NegativityReport:
    per_curve: dict[str, Fraction]
    total: Fraction
    per_component: tuple[tuple[tuple[str, ...], Fraction], ...]


def components(model: SmoothModel) -> list[tuple[str, ...]]:
    remaining = set(model.ids)
    out: list[tuple[str, ...]] = []
    while remaining:
        seed = min(remaining)
        seen = {seed}
        stack = [seed]
        while stack:
            cur = stack.pop()
            for nb in model.neighbors(cur):
                if nb not in seen:
                    seen.add(nb)
                    stack.append(nb)
        out.append(tuple(sorted(seen)))
        remaining -= seen
    return out


def negativity_report(model: SmoothModel) -> NegativityReport:
    per_curve = {i: negativity(model, i) for i in model.ids}
    comps = tuple(
        (comp, sum((per_curve[i] for i in comp), Fraction(0)))
        for comp in components(model)
    )
    return NegativityReport(
        per_curve=per_curve,
        total=sum(per_curve.values(), Fraction(0)),
        per_component=comps,
    )


def blow_down(model: SmoothModel, curve_id: str) -> SmoothModel:
    f = model.curve(curve_id)
    if f.self_int != -1:
        raise ModelError(f"{curve_id!r} is not a -1-curve (self_int {f.self_int})")
    touching = model.neighbors(curve_id)
    curves = []
    for c in model.curves:
        if c.id == curve_id:
            continue
        mf = touching.get(c.id, 0)
        curves.append(Curve(id=c.id, self_int=c.self_int + mf * mf, a=c.a))
    pairs: dict[tuple[str, str], int] = {}
    for a, b, m in model.pairs:
        if curve_id in (a, b):
            continue
        pairs[(a, b)] = m
    touch_ids = sorted(touching)
    for i, a in enumerate(touch_ids):
        for b in touch_ids[i + 1 :]:
            key = (min(a, b), max(a, b))
            pairs[key] = pairs.get(key, 0) + touching[a] * touching[b]
    return SmoothModel.build(
        curves,
        [(a, b, m) for (a, b), m in pairs.items()],
        model.provenance + (BlowDown(curve_id),),
    )


def blow_up_on(
    model: SmoothModel,
    curve_id: str,
    a_new: Optional[Fraction] = None,
    new_id: Optional[str] = None,
) -> SmoothModel:
    """Blow up a point on one curve; a_new defaults to the crepant a + 1."""
    beta = model.curve(curve_id)
    if a_new is None:
        a_new = beta.a + 1
    if new_id is None:
        new_id = model._next_up_id()
    if new_id in model.ids:
        raise ModelError(f"curve id {new_id!r} already present")
    curves = [
        Curve(id=c.id, self_int=c.self_int - 1, a=c.a) if c.id == curve_id else c
        for c in model.curves
    ]
    curves.append(Curve(id=new_id, self_int=-1, a=a_new))
    pairs = list(model.pairs) + [(new_id, curve_id, 1)]
    move = BlowUpOn(curve_id=curve_id, a_new=a_new, new_id=new_id)
    return SmoothModel.build(curves, pairs, model.provenance + (move,))


def blow_up_between(
    model: SmoothModel,
    id1: str,
    id2: str,
    a_new: Optional[Fraction] = None,
    new_id: Optional[str] = None,
) -> SmoothModel:
    """Blow up an intersection point of two curves; crepant default a1 + a2."""
    beta, gamma = model.curve(id1), model.curve(id2)
    old = model.mult(id1, id2)
    if old < 1:
        raise ModelError(f"curves {id1!r} and {id2!r} do not intersect")
    if a_new is None:
        a_new = beta.a + gamma.a
    if new_id is None:
        new_id = model._next_up_id()
    if new_id in model.ids:
        raise ModelError(f"curve id {new_id!r} already present")
    curves = []
    for c in model.curves:
        if c.id in (id1, id2):
            curves.append(Curve(id=c.id, self_int=c.self_int - 1, a=c.a))
        else:
            curves.append(c)
    curves.append(Curve(id=new_id, self_int=-1, a=a_new))
    pairs: list[tuple[str, str, int]] = []
    for a, b, m in model.pairs:
        if {a, b} == {id1, id2}:
            if m - 1 > 0:
                pairs.append((a, b, m - 1))
        else:
            pairs.append((a, b, m))
    pairs += [(new_id, id1, 1), (new_id, id2, 1)]
    move = BlowUpBetween(id1=id1, id2=id2, a_new=a_new, new_id=new_id)
    return SmoothModel.build(curves, pairs, model.provenance + (move,))


def apply_move(model: SmoothModel, move: Move) -> SmoothModel:
    if isinstance(move, BlowDown):
        return blow_down(model, move.curve_id)
    if isinstance(move, BlowUpOn):
        return blow_up_on(model, move.curve_id, move.a_new, move.new_id)
    if isinstance(move, BlowUpBetween):
        return blow_up_between(model, move.id1, move.id2, move.a_new, move.new_id)
    raise ModelError(f"unknown move {move!r}")


# -- identity checks ----------------------------------------------------------

@dataclass(frozen=True)
class IdentityReport:
    kind: str  # "double" | "single"
    checks: tuple[tuple[str, bool], ...]

    @property
    def ok(self) -> bool:
        return all(ok for _, ok in self.checks)


def check_blowup_identities(
    before: SmoothModel, after: SmoothModel, move: Move
) -> IdentityReport:
    """Exact accounting of one blow-up: the new curve's negativity, the
    adjustment of the cited curves, and the total."""
    if isinstance(move, BlowDown):
        raise ModelError("identity check applies to blow-ups")
    if not apply_move(before, move).same_state(after):
        raise ModelError("models are not related by the given move")
    n_before = {i: negativity(before, i) for i in before.ids}
    n_after = {i: negativity(after, i) for i in after.ids}
    total_before = sum(n_before.values(), Fraction(0))
    total_after = sum(n_after.values(), Fraction(0))
    alpha = move.new_id
    a_alpha = after.curve(alpha).a
    if isinstance(move, BlowUpBetween):
        a_beta = before.curve(move.id1).a
        a_gamma = before.curve(move.id2).a
        checks = (
            ("new-curve", n_after[alpha] == a_alpha - a_beta - a_gamma),
            (
                "first-cited",
                n_after[move.id1] == n_before[move.id1] - n_after[alpha],
            ),
            (
                "second-cited",
                n_after[move.id2] == n_before[move.id2] - n_after[alpha],
            ),
            ("total", total_after == total_before - n_after[alpha]),
        )
        return IdentityReport(kind="double", checks=checks)
    a_beta = before.curve(move.curve_id).a
    checks = (
        ("new-curve", n_after[alpha] == a_alpha - a_beta - 1),
        (
            "cited",
            n_after[move.curve_id] == n_before[move.curve_id] - n_after[alpha],
        ),
        ("total", total_after == total_before),
    )
    return IdentityReport(kind="single", checks=checks)


def is_strictly_monotonic(values: Sequence[Fraction]) -> bool:
    """Chain values strictly increasing from one end (r = 1 counts)."""
    if len(values) <= 1:
        return True
    inc = all(values[i] < values[i + 1] for i in range(len(values) - 1))
    dec = all(values[i] > values[i + 1] for i in range(len(values) - 1))
    return inc or dec


def model_component_graph(model: SmoothModel, comp: Sequence[str]) -> Optional[DualGraph]:
    """The component as a dual graph, or None when a curve has self_int >= 0."""
    if any(model.curve(i).self_int >= 0 for i in comp):
        return None
    nodes = [CurveNode(id=i, weight=-model.curve(i).self_int) for i in comp]
    members = set(comp)
    pairs = [(a, b, m) for a, b, m in model.pairs if a in members and b in members]
    return DualGraph.build(nodes, pairs)


@dataclass(frozen=True)
class ComponentBounds:
    ids: tuple[str, ...]
    shape: str                 # rendered class or "none"
    qualified: bool
    reason: str                # why a component is exempt from assertion
    min_negativity: Fraction
    sum_negativity: Fraction
    ok: bool


@dataclass(frozen=True)
class BoundsReport:
    delta: Fraction
    parts: tuple[ComponentBounds, ...]

    @property
    def ok(self) -> bool:
        return all(p.ok for p in self.parts)


def check_negativity_bounds(
    model: SmoothModel, delta: Fraction, assert_mode: bool = False
) -> BoundsReport:
    """Per-component lower bounds on negativity under a delta-lc tower.

    Chain components that are not strictly monotonic must satisfy
    N(G) >= delta - 1 per curve and sum >= 2(delta - 1); fork components
    additionally bound the component sum by delta - 1; star components
    only assert the per-curve bound. Components with a curve of
    self-intersection >= -1 or unrecognized shape are reported, not asserted.
    """
    parts: list[ComponentBounds] = []
    per_curve = {i: negativity(model, i) for i in model.ids}
    for comp in components(model):
        min_n = min(per_curve[i] for i in comp)
        sum_n = sum((per_curve[i] for i in comp), Fraction(0))
        graph = model_component_graph(model, comp)
        shape = "none"
        qualified = False
        reason = ""
        ok = True
        if graph is None:
            reason = "curve with self-intersection >= 0"
        else:
            cls = classify(graph)
            shape = str(cls)
            weights_ok = all(
                graph.node_map[i].weight >= 2 for i in graph.exceptional_ids
            )
            if cls.tag == "A":
                from .graphs import chain_order

                order = chain_order(graph)
                values = [model.curve(i).a for i in order]
                if not weights_ok:
                    reason = "curve of weight 1 in the chain"
                elif is_strictly_monotonic(values):
                    reason = "strictly monotonic chain"
                else:
                    qualified = True
                    ok = min_n >= delta - 1 and sum_n >= 2 * (delta - 1)
            elif cls.tag == "D":
                if not weights_ok:
                    reason = "curve of weight 1 in the fork"
                else:
                    qualified = True
                    ok = min_n >= delta - 1 and sum_n >= delta - 1
            elif cls.tag == "E":
                qualified = True  # arm and center weights fixed >= 2 by shape
                ok = min_n >= delta - 1
            else:
                reason = "unrecognized shape"
        parts.append(
            ComponentBounds(
                ids=comp,
                shape=shape,
                qualified=qualified,
                reason=reason,
                min_negativity=min_n,
                sum_negativity=sum_n,
                ok=ok,
            )
        )
    report = BoundsReport(delta=delta, parts=tuple(parts))
    if assert_mode and not report.ok:
        bad = [p for p in report.parts if not p.ok]
        raise NegativityBoundError(f"negativity bounds violated on {bad}")
    return report


@dataclass(frozen=True)
class JumpReport:
    margin: Fraction       # a_new - a_cited - delta
    admissible: bool       # new curve keeps N >= delta - 1
    ok: bool


def check_single_blowup_jump(
    before: SmoothModel, after: SmoothModel, move: Move, delta: Fraction
) -> JumpReport:
    """On an admissible single blow-up the log discrepancy grows by >= delta."""
    if not isinstance(move, BlowUpOn):
        raise AdmissibilityError("jump check applies to single blow-ups")
    if not apply_move(before, move).same_state(after):
        raise ModelError("models are not related by the given move")
    if negativity(before, move.curve_id) < delta - 1:
        raise AdmissibilityError("cited curve already below the negativity bound")
    a_alpha = after.curve(move.new_id).a
    a_beta = before.curve(move.curve_id).a
    margin = a_alpha - a_beta - delta
    admissible = negativity(after, move.new_id) >= delta - 1
    return JumpReport(margin=margin, admissible=admissible, ok=(not admissible) or margin >= 0)


@dataclass(frozen=True)
class DoubleRunReport:
    length: int
    bound: int
    ok: bool


def count_nested_double_run(
    model: SmoothModel, moves: Sequence[Move], delta: Fraction
) -> DoubleRunReport:
    """Length of a nested run of double blow-ups with N(new) >= -delta/2.

    Each step must cite the previous step's new curve, keep every involved
    log discrepancy in [delta, 1], and stay within the negativity filter;
    the length is then at most ceil(2(1-delta)/delta).
    """
    if delta <= 0:
        raise AdmissibilityError("delta must be positive")
    current = model
    previous_new: Optional[str] = None
    for move in moves:
        if not isinstance(move, BlowUpBetween):
            raise AdmissibilityError("run must consist of double blow-ups")
        if previous_new is not None and previous_new not in (move.id1, move.id2):
            raise AdmissibilityError("run is not nested over the previous blow-up")
        values = (
            current.curve(move.id1).a,
            current.curve(move.id2).a,
            move.a_new,
        )
        if any(v < delta or v > 1 for v in values):
            raise AdmissibilityError("log discrepancy outside [delta, 1]")
        nxt = apply_move(current, move)
        if negativity(nxt, move.new_id) < -delta / 2:
            raise AdmissibilityError("double blow-up below the -delta/2 filter")
        current = nxt
        previous_new = move.new_id
    bound = ceil_fraction(2 * (1 - delta) / delta)
    return DoubleRunReport(length=len(moves), bound=bound, ok=len(moves) <= bound)


# -- tower scripts ------------------------------------------------------------

class TowerScriptError(ValueError):
    pass


def parse_tower_script(text: str) -> list[Move]:
    """One move per line: ``down <id>``, ``up-on <id> a=<rational>`` or
    ``up-between <id> <id> a=<rational>``. New curves are named u1, u2, ...
    in order of appearance and may be referenced by later lines."""
    moves: list[Move] = []
    ups = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        try:
            if tokens[0] == "down" and len(tokens) == 2:
                moves.append(BlowDown(curve_id=tokens[1]))
            elif tokens[0] == "up-on" and len(tokens) == 3 and tokens[2].startswith("a="):
                ups += 1
                moves.append(
                    BlowUpOn(
                        curve_id=tokens[1],
                        a_new=parse_rational(tokens[2][2:]),
                        new_id=f"u{ups}",
                    )
                )
            elif (
                tokens[0] == "up-between"
                and len(tokens) == 4
                and tokens[3].startswith("a=")
            ):
                ups += 1
                moves.append(
                    BlowUpBetween(
                        id1=tokens[1],
                        id2=tokens[2],
                        a_new=parse_rational(tokens[3][2:]),
                        new_id=f"u{ups}",
                    )
                )
            else:
                raise TowerScriptError(f"line {lineno}: cannot parse {line!r}")
        except TowerScriptError:
            raise
        except ValueError as exc:
            raise TowerScriptError(f"line {lineno}: {exc}")
    return moves


def replay(model: SmoothModel, moves: Sequence[Move]) -> list[SmoothModel]:
    """Model states: the input followed by the state after each move."""
    states = [model]
    for move in moves:
        states.append(apply_move(states[-1], move))
    return states


def trace_csv(states: Sequence[SmoothModel], moves: Sequence[Move]) -> str:
    """Long-format trace: step, move, curve, negativity; the reserved curve
    name (total) carries the model total."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["step", "move", "curve", "negativity"])
    for step, state in enumerate(states):
        label = "" if step == 0 else moves[step - 1].render()
        total = Fraction(0)
        for i in state.ids:
            n = negativity(state, i)
            total += n
            writer.writerow([step, label, i, format_rational(n)])
        writer.writerow([step, label, "(total)", format_rational(total)])
    return out.getvalue()


def trace_from_csv(text: str) -> list[tuple[int, str, str, Fraction]]:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or rows[0] != ["step", "move", "curve", "negativity"]:
        raise TowerScriptError("trace CSV must start with header step,move,curve,negativity")
    return [(int(r[0]), r[1], r[2], parse_rational(r[3])) for r in rows[1:]]
