from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orientlab.graph import (GraphFormatError, GraphValidationError, Orientation, UndirectedGraph,
                             VertexMeasure, edge_measure, format_edge_list, format_weights,
                             load_graph, oriented_ball, parse_weights)
from orientlab.generators import gen_cycle, gen_star

from conftest import measures, oriented_graphs, small_graphs


def test_load_triangle():
    g = load_graph("3 3\n0 1\n1 2\n2 0")
    assert g.vertex_count == 3
    assert g.edges == ((0, 1), (0, 2), (1, 2))
    assert g.degree_bound == 2


def test_load_k4():
    text = "4 6\n" + "\n".join(f"{u} {v}" for u in range(4) for v in range(u + 1, 4))
    g = load_graph(text)
    assert g.edge_count == 6 and g.degree_bound == 3


def test_load_rejects_self_loop():
    with pytest.raises(GraphValidationError, match="self-loop"):
        load_graph("2 1\n0 0")


@pytest.mark.parametrize("text, line", [
    ("3 1\n0 x", 2),
    ("3\n0 1", 1),
    ("3 2\n0 1", 2),
    ("3 1\n0 1 2", 2),
])
def test_parse_errors_carry_line(text, line):
    with pytest.raises(GraphFormatError) as exc:
        load_graph(text)
    assert exc.value.line == line


def test_rejects_duplicate_and_range():
    with pytest.raises(GraphValidationError, match="duplicate"):
        load_graph("3 2\n0 1\n1 0")
    with pytest.raises(GraphValidationError, match="out of range"):
        load_graph("3 1\n0 3")


@given(small_graphs())
def test_edge_list_roundtrip(g):
    assert load_graph(format_edge_list(g)) == g


@given(small_graphs())
def test_adjacency_symmetric(g):
    for x in range(g.vertex_count):
        for y in g.adjacency[x]:
            assert x in g.adjacency[y]
        assert list(g.adjacency[x]) == sorted(g.adjacency[x])
    assert g.degree_bound == max(len(a) for a in g.adjacency)


def test_weights_roundtrip():
    mu = VertexMeasure.from_weights([Fraction(1, 3), Fraction(1, 6), 1])
    assert sum(mu.weight(x) for x in range(3)) == 1
    again = parse_weights(format_weights(mu), 3)
    assert again == mu
    with pytest.raises(GraphFormatError):
        parse_weights("0 1 1\n", 2)
    with pytest.raises(GraphFormatError):
        parse_weights("0 0 1\n1 1 1\n", 2)


def test_measure_rejects_nonpositive():
    with pytest.raises(ValueError):
        VertexMeasure.from_weights([1, 0])


def test_cocycle_bound():
    g = UndirectedGraph.from_edges(3, [(0, 1), (1, 2)])
    mu = VertexMeasure.from_weights([1, 3, 2])
    assert mu.cocycle_bound(g) == 3
    assert VertexMeasure.uniform(3).cocycle_bound(g) == 1


class TestEdgeMeasure:
    def test_triangle_all_pairs(self, triangle):
        mu = VertexMeasure.uniform(3)
        arcs = [(x, y) for x in range(3) for y in triangle.adjacency[x]]
        assert edge_measure(triangle, mu, arcs) == 2

    def test_empty(self, triangle):
        assert edge_measure(triangle, VertexMeasure.uniform(3), []) == 0

    def test_weighted_edge(self):
        g = UndirectedGraph.from_edges(2, [(0, 1)])
        mu = VertexMeasure.from_weights([Fraction(1, 4), Fraction(3, 4)])
        assert edge_measure(g, mu, [(0, 1)]) == Fraction(1, 4)

    def test_non_edge(self, triangle):
        g = UndirectedGraph.from_edges(3, [(0, 1)])
        with pytest.raises(KeyError):
            edge_measure(g, VertexMeasure.uniform(3), [(0, 2)])


class TestDegrees:
    def test_directed_cycle(self):
        g = gen_cycle(5)
        o = Orientation.from_arcs(g, [(i, (i + 1) % 5) for i in range(5)])
        assert all(o.out_degree(x) == 1 and o.in_degree(x) == 1 for x in range(5))

    def test_star_center(self):
        g = gen_star(3)
        o = Orientation.from_arcs(g, [(0, i) for i in (1, 2, 3)])
        assert o.out_degree(0) == 3

    @given(oriented_graphs())
    def test_reversal_swaps(self, o):
        r = o.reversed()
        for x in range(o.graph.vertex_count):
            assert r.out_degree(x) == o.in_degree(x)
            assert r.in_degree(x) == o.out_degree(x)

    @given(oriented_graphs())
    def test_out_plus_in_is_degree(self, o):
        g = o.graph
        assert all(o.out_degree(x) + o.in_degree(x) == g.degree(x) for x in range(g.vertex_count))
        assert sum(o.out) == g.edge_count

    def test_from_arcs_requires_every_edge(self, triangle):
        with pytest.raises(ValueError, match="no direction"):
            Orientation.from_arcs(triangle, [(0, 1), (1, 2)])
        with pytest.raises(ValueError, match="twice"):
            Orientation.from_arcs(triangle, [(0, 1), (1, 0), (1, 2), (2, 0)])


class TestOrientedBall:
    def test_radius_zero(self, k4):
        o = Orientation(k4)
        assert oriented_ball(o, {1, 2}, 0) == {1, 2}

    def test_directed_cycle_depth_two(self):
        g = gen_cycle(6)
        o = Orientation.from_arcs(g, [(i, (i + 1) % 6) for i in range(6)])
        assert oriented_ball(o, {4}, 2, +1) == {4, 5, 0}
        assert oriented_ball(o, {4}, 2, -1) == {4, 3, 2}

    @given(oriented_graphs())
    def test_full_set_is_closed(self, o):
        everything = set(range(o.graph.vertex_count))
        assert oriented_ball(o, everything, 3) == everything

    @given(oriented_graphs(), st.integers(0, 3), st.integers(0, 3), st.data())
    def test_composition_and_monotonicity(self, o, n, m, data):
        verts = range(o.graph.vertex_count)
        a = data.draw(st.sets(st.sampled_from(verts)))
        for sign in (+1, -1):
            composed = oriented_ball(o, oriented_ball(o, a, m, sign), n, sign)
            assert oriented_ball(o, a, n + m, sign) == composed
            assert oriented_ball(o, a, n, sign) <= oriented_ball(o, a, n + 1, sign)
            bigger = set(a) | {0}
            assert oriented_ball(o, a, n, sign) <= oriented_ball(o, bigger, n, sign)


@settings(max_examples=200)
@given(oriented_graphs(), st.data())
def test_in_out_integral_inequality(o, data):
    # sum w*in <= rho * sum w*out, with equality for uniform weights
    g = o.graph
    mu = data.draw(measures(g.vertex_count))
    rho = mu.cocycle_bound(g)
    w = [mu.weight(x) for x in range(g.vertex_count)]
    ins = sum(w[x] * o.in_degree(x) for x in range(g.vertex_count))
    outs = sum(w[x] * o.out_degree(x) for x in range(g.vertex_count))
    assert ins <= rho * outs
    uni = VertexMeasure.uniform(g.vertex_count)
    assert sum(uni.weight(x) * o.in_degree(x) for x in range(g.vertex_count)) == \
        sum(uni.weight(x) * o.out_degree(x) for x in range(g.vertex_count))
