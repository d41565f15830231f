"""This module provides tests for "graph.py"."""

import json
import math
import os
import sys

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

sys.path.append(os.getcwd())

import oracles
from strategies import PROPERTY_SETTINGS, vertex_functions, graphs, reals
from curvgraph import graph
from curvgraph.exceptions import ArgumentError, GraphParseError, GraphValidationError

EDGE_DOCUMENT = '{"vertices": [{"id": "v0", "m": 1}, {"id": "v1", "m": 1}], "edges": [{"u": "v0", "v": "v1", "w": 1}]}'


class TestParseGraph:
    """Test "parse_graph" function."""

    def test_smallest_document(self):
        """Test that two vertices and one edge give a 2-vertex graph with one edge."""
        parsed = graph.parse_graph(EDGE_DOCUMENT, "edge")
        assert parsed.vertices == ("v0", "v1")
        assert parsed.edges() == [("v0", "v1", 1.0)]
        assert parsed.name == "edge"

    def test_edge_listed_once_is_symmetric(self):
        """Test that an edge listed once carries its weight in both directions."""
        parsed = graph.parse_graph(EDGE_DOCUMENT)
        assert parsed.weight("v0", "v1") == parsed.weight("v1", "v0") == 1.0

    def test_repeated_equal_edge(self):
        """Test that listing the same pair again with an equal weight is accepted."""
        document = json.loads(EDGE_DOCUMENT)
        document["edges"].append({"u": "v1", "v": "v0", "w": 1})
        assert len(graph.parse_graph(json.dumps(document)).edges()) == 1

    @pytest.mark.parametrize("document, message", [
        pytest.param(
            '{"vertices": [{"id": "v0", "m": 1}], "edges": [{"u": "v0", "v": "v0", "w": 1}]}',
            "self-loop",
            id="self_loop",
        ),
        pytest.param(
            '{"vertices": [{"id": "v0", "m": 1}, {"id": "v0", "m": 1}], "edges": []}',
            "duplicate vertex id",
            id="duplicate_id",
        ),
        pytest.param(
            '{"vertices": [{"id": "v0", "m": 0}], "edges": []}',
            "nonpositive measure",
            id="zero_measure",
        ),
        pytest.param(
            '{"vertices": [{"id": "v0", "m": 1}, {"id": "v1", "m": 1}], "edges": [{"u": "v0", "v": "v1", "w": -1}]}',
            "negative",
            id="negative_weight",
        ),
        pytest.param(
            '{"vertices": [{"id": "v0", "m": 1}], "edges": [{"u": "v0", "v": "v9", "w": 1}]}',
            "unknown vertex 'v9'",
            id="unknown_endpoint",
        ),
        pytest.param(
            '{"vertices": [{"id": "v0", "m": 1}, {"id": "v1", "m": 1}], '
            '"edges": [{"u": "v0", "v": "v1", "w": 1}, {"u": "v1", "v": "v0", "w": 2}]}',
            "asymmetric",
            id="asymmetric",
        ),
        pytest.param(
            '{"vertices": [], "edges": []}',
            "no vertices",
            id="empty",
        ),
    ])
    def test_invalid_graph(self, document, message):
        """Test that documents breaking a graph invariant raise "GraphValidationError".

        Args:
            document: graph document
            message: expected part of the error message
        """
        with pytest.raises(GraphValidationError, match=message):
            graph.parse_graph(document)

    @pytest.mark.parametrize("document", [
        pytest.param("{", id="truncated"),
        pytest.param("[]", id="not_object"),
        pytest.param('{"edges": []}', id="no_vertices"),
        pytest.param('{"vertices": [{"m": 1}]}', id="no_id"),
        pytest.param('{"vertices": [{"id": 3, "m": 1}]}', id="numeric_id"),
        pytest.param('{"vertices": [{"id": "v0", "m": "1"}]}', id="string_measure"),
        pytest.param('{"vertices": [{"id": "v0", "m": true}]}', id="bool_measure"),
        pytest.param('{"vertices": [{"id": "v0", "m": 1}], "edges": {}}', id="edges_not_list"),
    ])
    def test_malformed_document(self, document):
        """Test that malformed documents raise "GraphParseError" with an "error: " message.

        Args:
            document: graph document
        """
        with pytest.raises(GraphParseError, match="^error: "):
            graph.parse_graph(document)


def test_dump_graph_is_canonical(cube):
    """Test that a dumped graph parses back to the same triple and dumps to the same text.

    Args:
        cube: Q_3
    """
    text = graph.dump_graph(cube)
    parsed = graph.parse_graph(text, cube.name)
    assert parsed.vertices == cube.vertices
    np.testing.assert_array_equal(parsed.measure, cube.measure)
    np.testing.assert_array_equal(parsed.weights, cube.weights)
    assert graph.dump_graph(parsed) == text


def test_dump_graph_without_edges(single_vertex):
    """Test that a graph without edges dumps to a valid document.

    Args:
        single_vertex: one isolated vertex
    """
    document = json.loads(graph.dump_graph(single_vertex))
    assert document == {"vertices": [{"id": "a", "m": 1}], "edges": []}


class TestGenerate:
    """Test "generate" function."""

    @pytest.mark.parametrize("family, size, vertices, edges, degree", [
        pytest.param("hypercube", 3, 8, 12, 3, id="hypercube_3"),
        pytest.param("complete", 4, 4, 6, 3, id="complete_4"),
        pytest.param("cycle", 6, 6, 6, 2, id="cycle_6"),
        pytest.param("hypercube", 1, 2, 1, 1, id="hypercube_1"),
    ])
    def test_regular_families(self, family, size, vertices, edges, degree):
        """Test vertex count, edge count and degrees of regular families.

        Args:
            family: family name
            size: family size
            vertices: expected vertex count
            edges: expected edge count
            degree: expected Deg(x) at every vertex
        """
        generated = graph.generate(family, size)
        assert len(generated) == vertices
        assert len(generated.edges()) == edges
        np.testing.assert_array_equal(generated.degrees, degree)

    def test_hypercube_1_is_single_edge(self, edge):
        """Test that Q_1 and the 2-vertex path have the same weights and measure.

        Args:
            edge: single edge
        """
        cube = graph.generate("hypercube", 1)
        np.testing.assert_array_equal(cube.weights, edge.weights)
        np.testing.assert_array_equal(cube.measure, edge.measure)

    def test_star_degrees(self):
        """Test that the center of star(n) has Deg = n and every leaf Deg = 1."""
        star = graph.generate("star", 5)
        assert graph.degree(star, "v0") == 5
        assert all(graph.degree(star, leaf) == 1 for leaf in star.vertices[1:])

    def test_degree_convention(self):
        """Test that the degree convention gives m(x) = sum of weights and Deg(x) = 1."""
        cube = graph.generate("hypercube", 2, "degree")
        np.testing.assert_array_equal(cube.measure, 2.0)
        np.testing.assert_array_equal(cube.degrees, 1.0)
        assert cube.measure_convention == "degree"

    @pytest.mark.parametrize("family, size, convention", [
        pytest.param("torus", 3, "unit", id="unknown_family"),
        pytest.param("cycle", 0, "unit", id="zero_size"),
        pytest.param("cycle", 2.5, "unit", id="float_size"),
        pytest.param("cycle", 4, "uniform", id="unknown_convention"),
    ])
    def test_bad_arguments(self, family, size, convention):
        """Test that bad generator arguments raise "ArgumentError".

        Args:
            family: family name
            size: family size
            convention: measure convention
        """
        with pytest.raises(ArgumentError):
            graph.generate(family, size, convention)


class TestCartesianProduct:
    """Test "cartesian_product" function."""

    def test_square_is_hypercube_2(self, edge):
        """Test that K_2 x K_2 is isomorphic to Q_2.

        Args:
            edge: single edge
        """
        square = graph.cartesian_product(edge, edge)
        assert oracles.isomorphic(square, graph.generate("hypercube", 2))

    def test_single_vertex_is_identity(self, path3, single_vertex):
        """Test that G x (single vertex) is isomorphic to G.

        Args:
            path3: path on three vertices
            single_vertex: one isolated vertex
        """
        assert oracles.isomorphic(graph.cartesian_product(path3, single_vertex), path3)

    def test_paths_give_cycle(self, edge):
        """Test that path(2) x path(2) is isomorphic to the 4-cycle by brute force.

        Args:
            edge: single edge
        """
        assert oracles.isomorphic(graph.cartesian_product(edge, edge), graph.generate("cycle", 4))

    def test_labels_and_measure(self, edge, path3):
        """Test the product labels, g major, and the product measure.

        Args:
            edge: single edge
            path3: path on three vertices
        """
        product = graph.cartesian_product(edge, graph.with_measure(path3, "degree"))
        assert product.vertices[:3] == ("v0,v0", "v0,v1", "v0,v2")
        np.testing.assert_array_equal(product.measure, [1, 2, 1, 1, 2, 1])
        assert product.measure_convention == "custom"

    def test_labels_with_separator_stay_distinct(self):
        """Test that factor labels containing the separator don't produce the same product label."""
        first = graph.WeightedGraph.from_edges(["a", "a,b"], [1.0, 1.0], [("a", "a,b", 1.0)], name="first")
        second = graph.WeightedGraph.from_edges(["c", "b,c"], [1.0, 1.0], [("c", "b,c", 1.0)], name="second")
        product = graph.cartesian_product(first, second)
        assert len(set(product.vertices)) == 4
        assert product.vertices[0] == '["a", "c"]'
        assert product.vertices[1] == '["a", "b,c"]'
        assert product.vertices[2] == '["a,b", "c"]'
        assert oracles.isomorphic(product, graph.generate("cycle", 4))


class TestLaplacian:
    """Test "laplacian_apply" and the degree functions."""

    def test_constant_is_harmonic(self, cube):
        """Test that the Laplacian of a constant vanishes.

        Args:
            cube: Q_3
        """
        np.testing.assert_allclose(graph.laplacian_apply(cube, np.full(len(cube), 3.5)), 0.0, atol=1e-12)

    def test_edge_indicator(self, edge):
        """Test that Delta of the indicator of y is 1 at x and -1 at y.

        Args:
            edge: single edge
        """
        np.testing.assert_array_equal(graph.laplacian_apply(edge, {"v0": 0.0, "v1": 1.0}), [1.0, -1.0])

    @pytest.mark.parametrize("factor", [0.5, 3.0])
    def test_measure_scaling(self, small_graph, rng, factor):
        """Test that m -> c m turns Delta into Delta / c and Deg into Deg / c.

        Args:
            small_graph: corpus graph
            rng: seeded random generator
            factor: measure factor c
        """
        function = rng.uniform(-1, 1, len(small_graph))
        scaled = graph.scaled(small_graph, measure_factor=factor)
        np.testing.assert_allclose(
            graph.laplacian_apply(scaled, function), graph.laplacian_apply(small_graph, function) / factor, rtol=1e-12,
        )
        np.testing.assert_allclose(scaled.degrees, small_graph.degrees / factor, rtol=1e-12)

    @pytest.mark.parametrize("dimension", [2, 3, 4])
    def test_hypercube_max_degree(self, dimension):
        """Test that Q_d has D = d.

        Args:
            dimension: d
        """
        assert graph.max_degree(graph.generate("hypercube", dimension)) == dimension

    def test_isolated_vertex_degree(self, single_vertex):
        """Test that an isolated vertex has Deg = 0.

        Args:
            single_vertex: one isolated vertex
        """
        assert graph.degree(single_vertex, "a") == 0

    def test_missing_function_value(self, edge):
        """Test that a function mapping without a vertex raises "ArgumentError".

        Args:
            edge: single edge
        """
        with pytest.raises(ArgumentError, match="v1"):
            graph.laplacian_apply(edge, {"v0": 1.0})


class TestDistances:
    """Test combinatorial distances, balls and spheres."""

    @pytest.mark.parametrize("dimension", [1, 2, 3, 4])
    def test_hypercube_diameter(self, dimension):
        """Test that Q_d has diameter d.

        Args:
            dimension: d
        """
        assert graph.combinatorial_diameter(graph.generate("hypercube", dimension)) == dimension

    def test_complete_diameter(self):
        """Test that complete graphs have diameter 1."""
        assert graph.combinatorial_diameter(graph.generate("complete", 6)) == 1

    def test_disconnected_diameter(self, two_edges):
        """Test that two disjoint edges are UNREACHABLE from each other.

        Args:
            two_edges: disjoint union of two edges
        """
        table = graph.combinatorial_distances(two_edges)
        assert table.diameter() == graph.UNREACHABLE
        assert table.distance("a:v0", "b:v1") == graph.UNREACHABLE
        assert table.distance("a:v0", "a:v1") == 1

    def test_hypercube_spheres(self, cube):
        """Test that the spheres of Q_3 have 1, 3, 3 and 1 vertices.

        Args:
            cube: Q_3
        """
        assert [len(graph.sphere(cube, "000", radius)) for radius in range(5)] == [1, 3, 3, 1, 0]
        assert graph.sphere(cube, "000", 1) == ("001", "010", "100")
        assert len(graph.ball(cube, "000", 2)) == 7

    def test_negative_radius(self, cube):
        """Test that a negative radius raises "ArgumentError".

        Args:
            cube: Q_3
        """
        with pytest.raises(ArgumentError):
            graph.ball(cube, "000", -1)

    def test_components(self, two_edges, cube):
        """Test the connected components and the connectivity flag.

        Args:
            two_edges: disjoint union of two edges
            cube: Q_3
        """
        assert graph.connected_components(two_edges) == [("a:v0", "a:v1"), ("b:v0", "b:v1")]
        assert graph.is_connected(two_edges) is False
        assert graph.is_connected(cube) is True


@pytest.mark.parametrize("family, size, expected", [
    pytest.param("hypercube", 3, True, id="hypercube_3"),
    pytest.param("cycle", 4, True, id="cycle_4"),
    pytest.param("path", 2, True, id="path_2"),
    pytest.param("cycle", 6, False, id="cycle_6"),
    pytest.param("complete", 4, False, id="complete_4"),
    pytest.param("star", 3, False, id="star_3"),
])
def test_is_hypercube(family, size, expected):
    """Test hypercube recognition on generated families.

    Args:
        family: family name
        size: family size
        expected: expected answer
    """
    assert graph.is_hypercube(graph.generate(family, size)) is expected


def test_is_hypercube_scaled(cube, single_vertex):
    """Test that constant rescaling keeps a hypercube and a single vertex is Q_0.

    Args:
        cube: Q_3
        single_vertex: one isolated vertex
    """
    assert graph.is_hypercube(graph.scaled(cube, measure_factor=2.0, weight_factor=3.0)) is True
    assert graph.is_hypercube(single_vertex) is True


def test_with_measure_isolated_vertex(single_vertex):
    """Test that an isolated vertex keeps m = 1 under the degree convention.

    Args:
        single_vertex: one isolated vertex
    """
    np.testing.assert_array_equal(graph.with_measure(single_vertex, "degree").measure, [1.0])


def test_arrays_are_read_only(cube):
    """Test that the arrays exposed by a graph can't be modified.

    Args:
        cube: Q_3
    """
    with pytest.raises(ValueError):
        cube.weights[0, 1] = 5.0
    with pytest.raises(ValueError):
        cube.measure[0] = 5.0


def test_unknown_vertex(cube):
    """Test that an unknown vertex raises "ArgumentError" naming it.

    Args:
        cube: Q_3
    """
    with pytest.raises(ArgumentError, match="'xyz'"):
        cube.index("xyz")


def test_format_real():
    """Test the 17-digit real formatting and the infinity spelling."""
    assert graph.format_real(0.1) == "0.10000000000000001"
    assert graph.format_real(math.inf) == "inf"
    assert graph.format_real(-math.inf) == "-inf"


@PROPERTY_SETTINGS
@given(data=st.data(), first_factor=reals, second_factor=reals)
def test_laplacian_is_linear(data, first_factor, second_factor):
    """Test Delta(a f + b g) = a Delta f + b Delta g on random graphs.

    Args:
        data: hypothesis data object
        first_factor: a
        second_factor: b
    """
    random_graph = data.draw(graphs())
    first = data.draw(vertex_functions(random_graph))
    second = data.draw(vertex_functions(random_graph))
    combined = graph.laplacian_apply(random_graph, first_factor * first + second_factor * second)
    expected = first_factor * graph.laplacian_apply(random_graph, first)
    expected += second_factor * graph.laplacian_apply(random_graph, second)
    np.testing.assert_allclose(combined, expected, rtol=1e-9, atol=1e-8)


@PROPERTY_SETTINGS
@given(random_graph=graphs(max_size=9))
def test_distances_are_a_metric(random_graph):
    """Test that hop distances vanish on the diagonal only, are symmetric and satisfy the triangle inequality.

    Args:
        random_graph: connected graph
    """
    matrix = graph.combinatorial_distances(random_graph).matrix
    np.testing.assert_array_equal(np.diag(matrix), 0)
    np.testing.assert_array_equal(matrix, matrix.T)
    off_diagonal = matrix[~np.eye(len(random_graph), dtype=bool)]
    assert np.all(off_diagonal >= 1)
    np.testing.assert_array_equal(matrix == 1, random_graph.weights > 0)
    assert np.all(matrix[:, None, :] <= matrix[:, :, None] + matrix[None, :, :])
