from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from logdisc import graphs
from logdisc.graphs import (
    CurveNode,
    DualGraph,
    GraphFormatError,
    GraphStructureError,
    classify,
    generate_chain,
    generate_dr,
    generate_e_type,
    intersection_matrix,
    is_contractible,
    parse_graph,
    serialize_graph,
)

from conftest import negative_definite_oracle


def test_parse_single_curve():
    g = parse_graph("curve e1 w=2")
    assert g.exceptional_ids == ("e1",)
    assert g.node_map["e1"].weight == 2


def test_parse_two_curve_chain():
    g = parse_graph("curve e1 w=3\ncurve e2 w=4\nedge e1 e2")
    assert classify(g) == graphs.SingularityClass(tag="A", r=2)
    assert g.multiplicity("e1", "e2") == 1


def test_parse_rejects_nonpositive_weight():
    with pytest.raises(GraphFormatError) as err:
        parse_graph("curve e1 w=0")
    assert "weight" in str(err.value)
    assert err.value.line == 1


def test_parse_error_reports_line():
    with pytest.raises(GraphFormatError) as err:
        parse_graph("curve e1 w=2\nedge e1 missing")
    assert "missing" in str(err.value)


def test_parse_rejects_duplicate_id():
    with pytest.raises(GraphFormatError):
        parse_graph("curve e1 w=2\ncurve e1 w=3")


def test_parse_rejects_self_loop():
    with pytest.raises(GraphFormatError):
        parse_graph("curve e1 w=2\nedge e1 e1")


def test_parse_rejects_bad_boundary_coeff():
    with pytest.raises(GraphFormatError):
        parse_graph("curve e1 w=2\nboundary c b=3/2\nedge c e1")


def test_parse_aggregates_repeated_edges():
    g = parse_graph("curve a w=2\ncurve b w=2\nedge a b\nedge b a")
    assert g.multiplicity("a", "b") == 2


def test_comments_and_blank_lines():
    g = parse_graph("# heading\n\ncurve e1 w=2  # trailing\n")
    assert g.exceptional_ids == ("e1",)


def test_roundtrip_with_boundary():
    text = "curve e1 w=3\ncurve e2 w=4\nboundary c1 b=2/3\nedge e1 e2\nedge c1 e1\n"
    g = parse_graph(text)
    assert parse_graph(serialize_graph(g)) == g
    assert "b=2/3" in serialize_graph(g)


@st.composite
def random_graph(draw):
    n = draw(st.integers(1, 6))
    ids = [f"n{i}" for i in range(n)]
    nodes = [CurveNode(id=i, weight=draw(st.integers(1, 9))) for i in ids]
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            m = draw(st.integers(0, 2))
            if m:
                edges.append((ids[i], ids[j], m))
    n_boundary = draw(st.integers(0, 2))
    for b in range(n_boundary):
        coeff = Fraction(draw(st.integers(0, 6)), 6)
        nodes.append(CurveNode(id=f"c{b}", boundary_coeff=coeff))
        edges.append((f"c{b}", ids[draw(st.integers(0, n - 1))], 1))
    return DualGraph.build(nodes, edges)


@given(random_graph())
@settings(max_examples=150, deadline=None)
def test_serialize_parse_roundtrip(graph):
    assert parse_graph(serialize_graph(graph)) == graph


def test_classify_chain_all_two():
    assert str(classify(generate_chain([2, 2, 2]))) == "A(3)"


def test_classify_fork():
    cls = classify(generate_dr([3, 2, 2, 2]))
    assert (cls.tag, cls.r) == ("D", 4)


def test_classify_fork_needs_weight_two_leaves():
    g = generate_dr([2, 2])
    # one leaf reweighted: that leaf becomes the chain arm, still a fork
    one = DualGraph.build(
        [CurveNode(id=n.id, weight=3 if n.id == "f1" else n.weight) for n in g.nodes],
        g.edges,
    )
    assert classify(one).tag == "D"
    # both leaves reweighted to 3: the weight-2 arm is now the pendant of a star
    two = DualGraph.build(
        [
            CurveNode(id=n.id, weight=3 if n.id in ("f1", "f2") else n.weight)
            for n in g.nodes
        ],
        g.edges,
    )
    cls = classify(two)
    assert (cls.tag, cls.family) == ("E", 1)
    # all three arms weight 3: no weight-2 pendant anywhere
    three = DualGraph.build(
        [
            CurveNode(id=n.id, weight=3 if n.id != "e1" else n.weight)
            for n in g.nodes
        ],
        g.edges,
    )
    assert classify(three).tag == "Other"


def test_classify_star_family_one():
    cls = classify(generate_e_type(1, 2))
    assert (cls.tag, cls.family, cls.p) == ("E", 1, 2)


def test_classify_all_families():
    for family in range(1, 16):
        for p in range(2, 9):
            cls = classify(generate_e_type(family, p))
            assert (cls.tag, cls.family, cls.p) == ("E", family, p), (family, p)


def test_classify_rejects_multiplicity():
    g = parse_graph("curve a w=2\ncurve b w=2\nedge a b m=2")
    assert classify(g).tag == "Other"


def test_classify_rejects_cycle():
    g = parse_graph(
        "curve a w=2\ncurve b w=2\ncurve c w=2\nedge a b\nedge b c\nedge a c"
    )
    assert classify(g).tag == "Other"


def test_classify_disconnected_raises():
    g = parse_graph("curve a w=2\ncurve b w=2")
    with pytest.raises(GraphStructureError):
        classify(g)


def test_classify_ignores_boundary():
    g = parse_graph("curve a w=2\ncurve b w=2\nboundary c b=1/2\nedge a b\nedge c a")
    assert str(classify(g)) == "A(2)"


def test_generate_chain_rejects_empty():
    with pytest.raises(ValueError):
        generate_chain([])


def test_generate_e_type_rejects_out_of_range():
    with pytest.raises(ValueError):
        generate_e_type(16, 2)


def test_generate_e_type_15_is_longest():
    g = generate_e_type(15, 3)
    assert len(g.exceptional_ids) == 8
    assert g.node_map["c"].weight == 3


def test_intersection_matrix_chain34(chain34):
    assert intersection_matrix(chain34) == [[-3, 1], [1, -4]]


def test_intersection_matrix_single():
    assert intersection_matrix(generate_chain([2])) == [[-2]]


def test_intersection_matrix_fork_all_two():
    m = intersection_matrix(generate_dr([2, 2]))
    assert len(m) == 4
    assert all(m[i][i] == -2 for i in range(4))
    flat = sum(m[i][j] for i in range(4) for j in range(4) if i != j)
    assert flat == 6  # three edges, each counted twice


def test_contractible_chain_22():
    assert is_contractible(generate_chain([2, 2]))


def test_not_contractible_chain_11():
    g = generate_chain([1, 1])
    assert negative_definite_oracle(intersection_matrix(g)) is False
    assert is_contractible(g) is False


def test_not_contractible_star_with_unit_center():
    g = generate_e_type(1, 1)
    assert negative_definite_oracle(intersection_matrix(g)) is False
    assert is_contractible(g) is False


@given(st.lists(st.integers(2, 5), min_size=1, max_size=7))
@settings(max_examples=200, deadline=None)
def test_chains_weights_two_plus_contractible(ws):
    g = generate_chain(ws)
    assert is_contractible(g)
    assert negative_definite_oracle(intersection_matrix(g))


@given(st.lists(st.integers(1, 4), min_size=1, max_size=5))
@settings(max_examples=200, deadline=None)
def test_contractibility_matches_minor_oracle(ws):
    g = generate_chain(ws)
    assert is_contractible(g) == negative_definite_oracle(intersection_matrix(g))
