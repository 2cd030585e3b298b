"""Weighted resolution dual graphs: model, file format, classification.

A graph holds exceptional curves (weighted by minus the self-intersection)
and optional boundary attachments carrying a coefficient in [0,1]. The
line-oriented file format is::

    # comment
    curve <id> w=<positive int>
    boundary <id> b=<rational p/q or integer>
    edge <id> <id> [m=<positive int, default 1>]

Ids are arbitrary strings; every canonical order in the package is the
lexicographic order of ids.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Optional

from .linalg import leading_principal_minors
from .rationals import RationalFormatError, format_rational, parse_rational


class GraphFormatError(ValueError):
    """Syntax or validation error in the graph format; carries line/column."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        if line:
            message = f"line {line}, column {column}: {message}"
        super().__init__(message)


class GraphStructureError(ValueError):
    """The graph fails a structural precondition (disconnected, wrong shape)."""


@dataclass(frozen=True)
class CurveNode:
    """Exceptional curve (weight = -E^2 >= 1) or boundary attachment."""

    id: str
    weight: Optional[int] = None
    boundary_coeff: Optional[Fraction] = None

    @property
    def is_boundary(self) -> bool:
        return self.boundary_coeff is not None

    def __post_init__(self):
        if self.is_boundary:
            if self.weight is not None:
                raise ValueError(f"boundary node {self.id!r} must not carry a weight")
            if not (0 <= self.boundary_coeff <= 1):
                raise ValueError(
                    f"boundary coefficient of {self.id!r} outside [0,1]: "
                    f"{format_rational(self.boundary_coeff)}"
                )
        else:
            if self.weight is None or self.weight < 1:
                raise ValueError(f"curve {self.id!r} needs a positive weight")


@dataclass(frozen=True)
class SingularityClass:
    """Shape tag: A(r), D(r), E(family, p) or Other."""

    tag: str
    r: Optional[int] = None
    family: Optional[int] = None
    p: Optional[int] = None

    def __str__(self) -> str:
        if self.tag == "A":
            return f"A({self.r})"
        if self.tag == "D":
            return f"D({self.r})"
        if self.tag == "E":
            return f"E({self.family},{self.p})"
        return "Other"


# The fifteen star-shaped diagram families: two arms read outward from the
# center, plus one weight-2 pendant; the center weight p is free (p >= 2).
E_FAMILY_ARMS: dict[int, tuple[tuple[int, ...], tuple[int, ...]]] = {
    1: ((3,), (3,)),
    2: ((2, 2), (3,)),
    3: ((2, 2), (2, 2)),
    4: ((3,), (4,)),
    5: ((2, 2), (4,)),
    6: ((3,), (2, 2, 2)),
    7: ((2, 2), (2, 2, 2)),
    8: ((3,), (5,)),
    9: ((2, 2), (5,)),
    10: ((3,), (2, 3)),
    11: ((2, 2), (2, 3)),
    12: ((3,), (3, 2)),
    13: ((2, 2), (3, 2)),
    14: ((3,), (2, 2, 2, 2)),
    15: ((2, 2), (2, 2, 2, 2)),
}


@dataclass(frozen=True)
class DualGraph:
    nodes: tuple[CurveNode, ...]
    edges: tuple[tuple[str, str, int], ...]  # (min id, max id, multiplicity)

    @staticmethod
    def build(
        nodes: Iterable[CurveNode], edges: Iterable[tuple[str, str, int]]
    ) -> "DualGraph":
        """Normalize, aggregate edge multiplicities and validate."""
        node_list = sorted(nodes, key=lambda n: n.id)
        seen: set[str] = set()
        for n in node_list:
            if n.id in seen:
                raise GraphFormatError(f"duplicate id {n.id!r}")
            seen.add(n.id)
        agg: dict[tuple[str, str], int] = {}
        for a, b, m in edges:
            if a == b:
                raise GraphFormatError(f"self-loop on {a!r}")
            if a not in seen or b not in seen:
                missing = a if a not in seen else b
                raise GraphFormatError(f"edge to unknown id {missing!r}")
            if m < 1:
                raise GraphFormatError(f"non-positive edge multiplicity on {a!r} {b!r}")
            key = (min(a, b), max(a, b))
            agg[key] = agg.get(key, 0) + m
        by_id = {n.id: n for n in node_list}
        for (a, b) in agg:
            if by_id[a].is_boundary and by_id[b].is_boundary:
                raise GraphFormatError(f"edge {a!r} {b!r} joins two boundary components")
        edge_list = tuple((a, b, m) for (a, b), m in sorted(agg.items()))
        return DualGraph(nodes=tuple(node_list), edges=edge_list)

    @cached_property
    def node_map(self) -> dict[str, CurveNode]:
        return {n.id: n for n in self.nodes}

    @cached_property
    def exceptional_ids(self) -> tuple[str, ...]:
        return tuple(n.id for n in self.nodes if not n.is_boundary)

    @cached_property
    def boundary_ids(self) -> tuple[str, ...]:
        return tuple(n.id for n in self.nodes if n.is_boundary)

    def multiplicity(self, a: str, b: str) -> int:
        key = (min(a, b), max(a, b))
        for x, y, m in self.edges:
            if (x, y) == key:
                return m
        return 0

    @cached_property
    def adjacency(self) -> dict[str, dict[str, int]]:
        adj: dict[str, dict[str, int]] = {n.id: {} for n in self.nodes}
        for a, b, m in self.edges:
            adj[a][b] = m
            adj[b][a] = m
        return adj

    def exceptional_connected(self) -> bool:
        ids = self.exceptional_ids
        if not ids:
            return True
        seen = {ids[0]}
        stack = [ids[0]]
        while stack:
            cur = stack.pop()
            for nb in self.adjacency[cur]:
                if nb in seen or self.node_map[nb].is_boundary:
                    continue
                seen.add(nb)
                stack.append(nb)
        return len(seen) == len(ids)


def parse_graph(text: str) -> DualGraph:
    nodes: list[CurveNode] = []
    edges: list[tuple[str, str, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        tokens = line.split()
        kind = tokens[0]
        col = raw.index(kind) + 1
        try:
            if kind == "curve":
                if len(tokens) != 3 or not tokens[2].startswith("w="):
                    raise GraphFormatError("expected: curve <id> w=<int>", lineno, col)
                weight = _parse_int(tokens[2][2:], lineno, raw, tokens[2])
                if weight < 1:
                    raise GraphFormatError(
                        f"non-positive weight for {tokens[1]!r}", lineno, _col(raw, tokens[2])
                    )
                nodes.append(CurveNode(id=tokens[1], weight=weight))
            elif kind == "boundary":
                if len(tokens) != 3 or not tokens[2].startswith("b="):
                    raise GraphFormatError("expected: boundary <id> b=<rational>", lineno, col)
                try:
                    coeff = parse_rational(tokens[2][2:])
                except RationalFormatError as exc:
                    raise GraphFormatError(str(exc), lineno, _col(raw, tokens[2]))
                if not (0 <= coeff <= 1):
                    raise GraphFormatError(
                        f"boundary coefficient outside [0,1] for {tokens[1]!r}",
                        lineno,
                        _col(raw, tokens[2]),
                    )
                nodes.append(CurveNode(id=tokens[1], boundary_coeff=coeff))
            elif kind == "edge":
                if len(tokens) == 3:
                    mult = 1
                elif len(tokens) == 4 and tokens[3].startswith("m="):
                    mult = _parse_int(tokens[3][2:], lineno, raw, tokens[3])
                    if mult < 1:
                        raise GraphFormatError(
                            "non-positive edge multiplicity", lineno, _col(raw, tokens[3])
                        )
                else:
                    raise GraphFormatError(
                        "expected: edge <id> <id> [m=<int>]", lineno, col
                    )
                edges.append((tokens[1], tokens[2], mult))
            else:
                raise GraphFormatError(f"unknown directive {kind!r}", lineno, col)
        except ValueError as exc:
            if isinstance(exc, GraphFormatError):
                raise
            raise GraphFormatError(str(exc), lineno, col)
    try:
        return DualGraph.build(nodes, edges)
    except GraphFormatError:
        raise
    except ValueError as exc:
        raise GraphFormatError(str(exc))


def _col(raw: str, token: str) -> int:
    return raw.index(token) + 1


def _parse_int(text: str, lineno: int, raw: str, token: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise GraphFormatError(f"not an integer: {text!r}", lineno, _col(raw, token))


def serialize_graph(graph: DualGraph) -> str:
    lines: list[str] = []
    for n in graph.nodes:
        if not n.is_boundary:
            lines.append(f"curve {n.id} w={n.weight}")
    for n in graph.nodes:
        if n.is_boundary:
            lines.append(f"boundary {n.id} b={format_rational(n.boundary_coeff)}")
    for a, b, m in graph.edges:
        lines.append(f"edge {a} {b}" + (f" m={m}" if m != 1 else ""))
    return "\n".join(lines) + "\n"


def generate_chain(weights: list[int], prefix: str = "e") -> DualGraph:
    """Path graph with the given weights in order; ids are zero-padded."""
    if not weights:
        raise ValueError("empty weight list")
    width = len(str(len(weights)))
    ids = [f"{prefix}{i:0{width}d}" for i in range(1, len(weights) + 1)]
    nodes = [CurveNode(id=i, weight=w) for i, w in zip(ids, weights)]
    edges = [(ids[i], ids[i + 1], 1) for i in range(len(ids) - 1)]
    return DualGraph.build(nodes, edges)


def generate_dr(chain_weights: list[int]) -> DualGraph:
    """Fork: chain with two weight-2 leaves attached to its first node."""
    if len(chain_weights) < 2:
        raise ValueError("fork needs a chain of length >= 2")
    graph = generate_chain(chain_weights)
    first = graph.exceptional_ids[0]
    nodes = list(graph.nodes) + [
        CurveNode(id="f1", weight=2),
        CurveNode(id="f2", weight=2),
    ]
    edges = [(a, b, m) for a, b, m in graph.edges]
    edges += [("f1", first, 1), ("f2", first, 1)]
    return DualGraph.build(nodes, edges)


def generate_e_type(family: int, p: int) -> DualGraph:
    """Star diagram of the given family with center weight p.

    p = 1 is admitted so degenerate (non-contractible) variants can be
    built; classify only recognizes the p >= 2 diagrams.
    """
    if family not in E_FAMILY_ARMS:
        raise ValueError(f"family out of range 1..15: {family}")
    if p < 1:
        raise ValueError(f"center weight must be positive: {p}")
    left, right = E_FAMILY_ARMS[family]
    nodes = [CurveNode(id="c", weight=p), CurveNode(id="d", weight=2)]
    edges = [("c", "d", 1)]
    for prefix, arm in (("l", left), ("r", right)):
        prev = "c"
        for i, w in enumerate(arm, start=1):
            nid = f"{prefix}{i}"
            nodes.append(CurveNode(id=nid, weight=w))
            edges.append((prev, nid, 1))
            prev = nid
    return DualGraph.build(nodes, edges)


def intersection_matrix(graph: DualGraph) -> list[list[int]]:
    """M[i][i] = -weight, M[i][j] = edge multiplicity; exceptional nodes only,
    rows/columns in canonical id order."""
    ids = graph.exceptional_ids
    index = {i: k for k, i in enumerate(ids)}
    n = len(ids)
    m = [[0] * n for _ in range(n)]
    for k, i in enumerate(ids):
        m[k][k] = -graph.node_map[i].weight
    for a, b, mult in graph.edges:
        if a in index and b in index:
            m[index[a]][index[b]] = mult
            m[index[b]][index[a]] = mult
    return m


def is_contractible(graph: DualGraph) -> bool:
    """True iff the exceptional intersection matrix is negative definite,
    decided by exact signs of the leading principal minors."""
    matrix = intersection_matrix(graph)
    minors = leading_principal_minors(matrix)
    for k, minor in enumerate(minors, start=1):
        if (-1) ** k * minor <= 0:
            return False
    return True


def chain_order(graph: DualGraph) -> list[str]:
    """Path order of a chain's exceptional nodes, starting from the
    lexicographically smaller endpoint."""
    cls = classify(graph)
    if cls.tag != "A":
        raise GraphStructureError(f"not a chain: {cls}")
    ids = graph.exceptional_ids
    if len(ids) == 1:
        return [ids[0]]
    deg = _exceptional_degrees(graph)
    endpoints = sorted(i for i in ids if deg[i] == 1)
    order = [endpoints[0]]
    prev = None
    while len(order) < len(ids):
        nxt = [
            nb
            for nb in graph.adjacency[order[-1]]
            if nb != prev and not graph.node_map[nb].is_boundary
        ]
        prev = order[-1]
        order.append(nxt[0])
    return order


def _exceptional_degrees(graph: DualGraph) -> dict[str, int]:
    deg: dict[str, int] = {i: 0 for i in graph.exceptional_ids}
    for a, b, m in graph.edges:
        if a in deg and b in deg:
            deg[a] += 1
            deg[b] += 1
    return deg


def classify(graph: DualGraph) -> SingularityClass:
    """Shape-based classification of the exceptional subgraph.

    Boundary attachments are ignored. Edge multiplicities > 1, cycles and
    anything outside the chain / fork / star catalog give Other.
    """
    ids = graph.exceptional_ids
    if not ids:
        raise GraphStructureError("no exceptional curves")
    if not graph.exceptional_connected():
        raise GraphStructureError("disconnected exceptional locus")

    exc_edges = [
        (a, b, m)
        for a, b, m in graph.edges
        if a in graph.node_map
        and not graph.node_map[a].is_boundary
        and not graph.node_map[b].is_boundary
    ]
    if any(m > 1 for _, _, m in exc_edges):
        return SingularityClass(tag="Other")
    if len(exc_edges) != len(ids) - 1:  # connected, so this rules out cycles
        return SingularityClass(tag="Other")

    deg = _exceptional_degrees(graph)
    weight = {i: graph.node_map[i].weight for i in ids}
    if all(d <= 2 for d in deg.values()):
        return SingularityClass(tag="A", r=len(ids))

    centers = [i for i in ids if deg[i] == 3]
    if len(centers) != 1 or any(deg[i] > 3 for i in ids):
        return SingularityClass(tag="Other")
    center = centers[0]

    arms: list[list[str]] = []
    for nb in sorted(graph.adjacency[center]):
        if graph.node_map[nb].is_boundary:
            continue
        arm = [nb]
        prev = center
        while deg[arm[-1]] == 2:
            nxt = [
                x
                for x in graph.adjacency[arm[-1]]
                if x != prev and not graph.node_map[x].is_boundary
            ]
            prev = arm[-1]
            arm.append(nxt[0])
        if deg[arm[-1]] != 1:
            return SingularityClass(tag="Other")
        arms.append(arm)

    leaf_arms = [a for a in arms if len(a) == 1 and weight[a[0]] == 2]
    if len(leaf_arms) >= 2:
        return SingularityClass(tag="D", r=len(ids) - 2)
    if len(leaf_arms) == 1 and weight[center] >= 2:
        others = sorted(
            tuple(weight[i] for i in a) for a in arms if a is not leaf_arms[0]
        )
        for family, (left, right) in E_FAMILY_ARMS.items():
            if sorted((left, right)) == others:
                return SingularityClass(tag="E", family=family, p=weight[center])
    return SingularityClass(tag="Other")
