"""This module provides the finite weighted graph (V, w, m) and its combinatorial structure.

Classes:
    WeightedGraph: an immutable, validated graph with dense weight matrix and vertex measure.
    DistanceTable: all-pairs hop distances.

Functions build graphs (parser, family generators, products), evaluate the graph Laplacian
and vertex degrees, and compute combinatorial distances, balls and spheres.

Graph file format (UTF-8, JSON syntax):

{"vertices": [{"id": "v0", "m": 1.0}, ...], "edges": [{"u": "v0", "v": "v1", "w": 1.0}, ...]}
"""

import json
import math
from collections.abc import Mapping

import networkx as nx
import numpy as np

from curvgraph.exceptions import ArgumentError, GraphParseError, GraphValidationError
from curvgraph.graph_checkers import GraphChecker, VertexIdChecker
from curvgraph.logger import LOGGER

UNREACHABLE = math.inf

MEASURE_CONVENTIONS = ("unit", "degree")
FAMILIES = ("hypercube", "cycle", "complete", "path", "star")


class WeightedGraph:
    """A finite graph G = (V, w, m).

    The vertex order is the construction order and is part of every deterministic output.
    Arrays exposed by the instance are read-only.
    """

    def __init__(
            self,
            vertices,
            measure,
            weights,
            name: str = "graph",
            measure_convention: str = "custom",
    ):
        """Validate and store the graph.

        Args:
            vertices: vertex identifiers in graph order
            measure: positive vertex measure in graph order
            weights: symmetric nonnegative square weight matrix with zero diagonal
            name (str): label used in reports
            measure_convention (str): "unit", "degree" or "custom"

        Raises:
            GraphValidationError: if any invariant of the triple fails
        """
        self._vertices = tuple(vertices)
        self._measure = np.array(measure, dtype=float)
        self._weights = np.array(weights, dtype=float)
        GraphChecker(vertices=self._vertices, measure=self._measure, weights=self._weights).check()

        self.name = name
        self.measure_convention = measure_convention
        self._index = {vertex: position for position, vertex in enumerate(self._vertices)}

        self._weighted_degrees = self._weights.sum(axis=1)
        self._laplacian = (self._weights - np.diag(self._weighted_degrees)) / self._measure[:, None]
        self._degrees = self._weighted_degrees / self._measure
        for array in (self._measure, self._weights, self._weighted_degrees, self._laplacian, self._degrees):
            array.setflags(write=False)

    @classmethod
    def from_edges(
            cls,
            vertices,
            measure,
            edges,
            name: str = "graph",
            measure_convention: str = "custom",
    ):
        """Build a graph from an edge listing.

        Each unordered edge should be listed once; the weight is applied to both directions.
        Listing the same pair again with an equal weight is accepted, with a different one it is
        an asymmetry. Zero-weight edges are dropped.

        Args:
            vertices: vertex identifiers in graph order
            measure: measure values in graph order
            edges: iterable of (u, v, w) triples
            name (str): label used in reports
            measure_convention (str): "unit", "degree" or "custom"

        Raises:
            GraphValidationError: on unknown endpoints, self-loops, negative or asymmetric weights

        Returns:
            a validated WeightedGraph
        """
        vertices = tuple(vertices)
        VertexIdChecker(vertices=vertices).check()
        index = {vertex: position for position, vertex in enumerate(vertices)}
        weights = np.zeros((len(vertices), len(vertices)))
        for u_vertex, v_vertex, weight in edges:
            for endpoint in (u_vertex, v_vertex):
                if endpoint not in index:
                    raise GraphValidationError(f"error: edge ({u_vertex}, {v_vertex}) uses unknown vertex '{endpoint}'")
            if u_vertex == v_vertex:
                raise GraphValidationError(f"error: self-loop at vertex '{u_vertex}'")
            if not math.isfinite(weight) or weight < 0:
                raise GraphValidationError(f"error: negative or non-finite weight w({u_vertex}, {v_vertex}) = {weight}")
            row, col = index[u_vertex], index[v_vertex]
            if weights[row, col] not in (0, weight):
                raise GraphValidationError(
                    f"error: asymmetric weight between '{u_vertex}' and '{v_vertex}': "
                    f"{weights[row, col]} != {weight}",
                )
            weights[row, col] = weights[col, row] = weight
        return cls(vertices, measure, weights, name=name, measure_convention=measure_convention)

    @property
    def vertices(self) -> tuple:
        """Vertex identifiers in graph order."""
        return self._vertices

    @property
    def measure(self) -> np.ndarray:
        """Vertex measure m in graph order."""
        return self._measure

    @property
    def weights(self) -> np.ndarray:
        """Weight matrix w in graph order."""
        return self._weights

    @property
    def laplacian_matrix(self) -> np.ndarray:
        """Matrix of the graph Laplacian in graph order."""
        return self._laplacian

    @property
    def degrees(self) -> np.ndarray:
        """Deg(x) for every vertex in graph order."""
        return self._degrees

    def __len__(self) -> int:
        return len(self._vertices)

    def __repr__(self) -> str:
        return f"WeightedGraph(name={self.name!r}, vertices={len(self)}, edges={len(self.edges())})"

    def index(self, vertex: str) -> int:
        """Return the position of a vertex.

        Args:
            vertex (str): vertex identifier

        Raises:
            ArgumentError: if the vertex doesn't belong to the graph

        Returns:
            position in graph order
        """
        try:
            return self._index[vertex]
        except KeyError as error:
            raise ArgumentError(f"error: unknown vertex '{vertex}'") from error

    def weight(self, u_vertex: str, v_vertex: str) -> float:
        """Return w(u, v)."""
        return float(self._weights[self.index(u_vertex), self.index(v_vertex)])

    def neighbors(self, vertex: str) -> tuple:
        """Return the neighbors of a vertex in graph order."""
        row = self._weights[self.index(vertex)]
        return tuple(self._vertices[position] for position in np.flatnonzero(row))

    def edges(self) -> list:
        """Return the stored edges as (u, v, w) sorted by index pair, u before v."""
        rows, cols = np.nonzero(np.triu(self._weights, 1))
        return [
            (self._vertices[row], self._vertices[col], float(self._weights[row, col]))
            for row, col in zip(rows, cols)
        ]


class DistanceTable:
    """All-pairs combinatorial distances, UNREACHABLE across components."""

    def __init__(self, vertices: tuple, matrix: np.ndarray):
        """Store the distance matrix.

        Args:
            vertices (tuple): vertex identifiers in graph order
            matrix (np.ndarray): hop counts, inf for unreachable pairs
        """
        self.vertices = vertices
        self.matrix = matrix
        self.matrix.setflags(write=False)
        self._index = {vertex: position for position, vertex in enumerate(vertices)}

    def distance(self, x_vertex: str, y_vertex: str):
        """Return d(x, y) as an integer or UNREACHABLE."""
        value = self.matrix[self._index[x_vertex], self._index[y_vertex]]
        return int(value) if math.isfinite(value) else UNREACHABLE

    def diameter(self):
        """Return the largest entry, UNREACHABLE if any pair is disconnected."""
        if not np.all(np.isfinite(self.matrix)):
            return UNREACHABLE
        return int(self.matrix.max())


def as_function(graph: WeightedGraph, values) -> np.ndarray:
    """Convert a function on the vertices to an array in graph order.

    Mappings are read vertex by vertex; array-like input must have one row per vertex
    and may carry several functions as columns.

    Args:
        graph (WeightedGraph): the graph
        values: mapping vertex -> real, or an array-like of shape (|V|,) or (|V|, k)

    Raises:
        ArgumentError: if a vertex value is missing

    Returns:
        float array in graph order
    """
    if isinstance(values, Mapping):
        missing = [vertex for vertex in graph.vertices if vertex not in values]
        if missing:
            raise ArgumentError(f"error: function has no value for vertex '{missing[0]}'")
        return np.array([values[vertex] for vertex in graph.vertices], dtype=float)
    array = np.asarray(values, dtype=float)
    if array.ndim == 0 or array.shape[0] != len(graph):
        raise ArgumentError(f"error: function has shape {array.shape}, expected {len(graph)} vertex values")
    return array


def parse_graph(text: str, name: str = "graph") -> WeightedGraph:
    """Parse a graph document.

    Args:
        text (str): UTF-8 JSON document in the graph file format
        name (str): label used in reports

    Raises:
        GraphParseError: if the document is malformed
        GraphValidationError: if the described graph breaks an invariant

    Returns:
        a validated WeightedGraph
    """
    LOGGER.info("parsing graph document...")
    try:
        document = json.loads(text)
    except json.JSONDecodeError as error:
        raise GraphParseError(
            f"error: malformed graph document: {error.msg} at line {error.lineno} column {error.colno}",
        ) from error
    if not isinstance(document, dict):
        raise GraphParseError("error: graph document must be a JSON object")
    vertex_items = document.get("vertices")
    edge_items = document.get("edges", [])
    if not isinstance(vertex_items, list):
        raise GraphParseError("error: graph document needs a 'vertices' list")
    if not isinstance(edge_items, list):
        raise GraphParseError("error: 'edges' must be a list")

    vertices, measure = [], []
    for position, item in enumerate(vertex_items):
        where = f"vertices[{position}]"
        vertices.append(_read_field(item, "id", str, where))
        measure.append(_read_real(_read_field(item, "m", object, where), f"{where}.m"))
    edges = []
    for position, item in enumerate(edge_items):
        where = f"edges[{position}]"
        edges.append((
            _read_field(item, "u", str, where),
            _read_field(item, "v", str, where),
            _read_real(_read_field(item, "w", object, where), f"{where}.w"),
        ))
    return WeightedGraph.from_edges(vertices, measure, edges, name=name)


def dump_graph(graph: WeightedGraph) -> str:
    """Serialize a graph in canonical order.

    Vertices keep the graph order, edges are sorted by index pair, reals use 17 significant digits.

    Args:
        graph (WeightedGraph): the graph to serialize

    Returns:
        the graph document, ending with a newline
    """
    vertex_lines = [
        f'    {{"id": {json.dumps(vertex)}, "m": {format_real(mass)}}}'
        for vertex, mass in zip(graph.vertices, graph.measure)
    ]
    edge_lines = [
        f'    {{"u": {json.dumps(u_vertex)}, "v": {json.dumps(v_vertex)}, "w": {format_real(weight)}}}'
        for u_vertex, v_vertex, weight in graph.edges()
    ]
    return "".join((
        '{\n  "vertices": [\n',
        ",\n".join(vertex_lines),
        '\n  ],\n  "edges": [\n' if edge_lines else '\n  ],\n  "edges": [',
        ",\n".join(edge_lines),
        "\n  ]\n}\n" if edge_lines else "]\n}\n",
    ))


def format_real(number: float) -> str:
    """Format a real with 17 significant digits, "inf" for infinities."""
    if math.isinf(number):
        return "inf" if number > 0 else "-inf"
    return format(float(number), ".17g")


def generate(family: str, size: int, measure_convention: str = "unit") -> WeightedGraph:
    """Generate a standard family member with unit edge weights.

    Hypercube vertices are bit strings ordered by binary value; other families use "v0", "v1", ...
    and "star(n)" has its center "v0" followed by n leaves.

    Args:
        family (str): one of "hypercube", "cycle", "complete", "path", "star"
        size (int): dimension for hypercubes, vertex count for cycles, complete graphs and paths,
            leaf count for stars
        measure_convention (str): "unit" (m = 1) or "degree" (m(x) = sum of weights at x)

    Raises:
        ArgumentError: on unknown family or convention, or size below 1

    Returns:
        the generated graph
    """
    if family not in FAMILIES:
        raise ArgumentError(f"error: unknown family '{family}', expected one of {', '.join(FAMILIES)}")
    if isinstance(size, bool) or not isinstance(size, (int, np.integer)) or size < 1:
        raise ArgumentError(f"error: size of {family} must be an integer >= 1, got {size!r}")
    _check_convention(measure_convention)
    LOGGER.info("generating %s(%s)...", family, size)
    vertices, edges = _FAMILY_BUILDERS[family](int(size))
    graph = WeightedGraph.from_edges(
        vertices,
        np.ones(len(vertices)),
        [(u_vertex, v_vertex, 1.0) for u_vertex, v_vertex in edges],
        name=f"{family}({size})",
        measure_convention="unit",
    )
    return with_measure(graph, measure_convention)


def with_measure(graph: WeightedGraph, measure_convention: str) -> WeightedGraph:
    """Return the same weighted graph under another measure convention.

    Isolated vertices keep m = 1 under the "degree" convention, their weighted degree being 0.

    Args:
        graph (WeightedGraph): source graph
        measure_convention (str): "unit" or "degree"

    Returns:
        a new WeightedGraph
    """
    _check_convention(measure_convention)
    if measure_convention == "unit":
        measure = np.ones(len(graph))
    else:
        weighted_degrees = graph.weights.sum(axis=1)
        measure = np.where(weighted_degrees > 0, weighted_degrees, 1.0)
    return WeightedGraph(
        graph.vertices, measure, graph.weights, name=graph.name, measure_convention=measure_convention,
    )


def scaled(graph: WeightedGraph, measure_factor: float = 1.0, weight_factor: float = 1.0) -> WeightedGraph:
    """Return the graph with measure and weights multiplied by positive factors.

    Raises:
        ArgumentError: if a factor is not positive

    Returns:
        a new WeightedGraph with "custom" convention
    """
    if measure_factor <= 0 or weight_factor <= 0:
        raise ArgumentError("error: scaling factors must be positive")
    return WeightedGraph(
        graph.vertices,
        graph.measure * measure_factor,
        graph.weights * weight_factor,
        name=graph.name,
        measure_convention="custom",
    )


def cartesian_product(first: WeightedGraph, second: WeightedGraph, separator: str = ",") -> WeightedGraph:
    """Return the Cartesian product of two graphs.

    Vertices are pairs (g, h) ordered with g major, labeled "g<separator>h". If a factor label
    contains the separator, every pair is labeled by its JSON array '["g", "h"]' instead, so that
    distinct pairs never share a label.
    w((g, h), (g', h')) is w(g, g') when h = h', w(h, h') when g = g', else 0; m((g, h)) = m(g) m(h).

    Args:
        first (WeightedGraph): the G factor
        second (WeightedGraph): the H factor
        separator (str): string put between the factor labels

    Returns:
        the product graph
    """
    pairs = [(g_vertex, h_vertex) for g_vertex in first.vertices for h_vertex in second.vertices]
    if any(separator in vertex for vertex in first.vertices + second.vertices):
        LOGGER.info("factor labels contain %r, labeling the product vertices as JSON pairs", separator)
        vertices = [json.dumps(pair) for pair in pairs]
    else:
        vertices = [f"{g_vertex}{separator}{h_vertex}" for g_vertex, h_vertex in pairs]
    weights = np.kron(first.weights, np.eye(len(second))) + np.kron(np.eye(len(first)), second.weights)
    both_unit = first.measure_convention == second.measure_convention == "unit"
    return WeightedGraph(
        vertices,
        np.kron(first.measure, second.measure),
        weights,
        name=f"{first.name} x {second.name}",
        measure_convention="unit" if both_unit else "custom",
    )


def disjoint_union(first: WeightedGraph, second: WeightedGraph, prefixes: tuple = ("a:", "b:")) -> WeightedGraph:
    """Return the disjoint union, vertex labels prefixed to keep them unique."""
    size = len(first)
    weights = np.zeros((size + len(second), size + len(second)))
    weights[:size, :size] = first.weights
    weights[size:, size:] = second.weights
    vertices = [prefixes[0] + vertex for vertex in first.vertices]
    vertices += [prefixes[1] + vertex for vertex in second.vertices]
    same_convention = first.measure_convention == second.measure_convention
    return WeightedGraph(
        vertices,
        np.concatenate((first.measure, second.measure)),
        weights,
        name=f"{first.name} + {second.name}",
        measure_convention=first.measure_convention if same_convention else "custom",
    )


def laplacian_apply(graph: WeightedGraph, values) -> np.ndarray:
    """Return the graph Laplacian of a function.

    Delta f(x) = 1/m(x) * sum_y w(x, y) (f(y) - f(x)).

    Args:
        graph (WeightedGraph): the graph
        values: function on the vertices (see "as_function")

    Returns:
        Delta f in graph order
    """
    return graph.laplacian_matrix @ as_function(graph, values)


def degree(graph: WeightedGraph, vertex: str) -> float:
    """Return Deg(x) = sum_y w(x, y) / m(x)."""
    return float(graph.degrees[graph.index(vertex)])


def max_degree(graph: WeightedGraph) -> float:
    """Return the maximal vertex degree."""
    return float(graph.degrees.max())


def to_networkx(graph: WeightedGraph) -> nx.Graph:
    """Return the positive-weight edge structure as a networkx graph with "weight" attributes."""
    nx_graph = nx.Graph()
    nx_graph.add_nodes_from(graph.vertices)
    nx_graph.add_weighted_edges_from(graph.edges())
    return nx_graph


def combinatorial_distances(graph: WeightedGraph) -> DistanceTable:
    """Return all-pairs hop distances by breadth-first search from every vertex.

    Args:
        graph (WeightedGraph): the graph

    Returns:
        the DistanceTable, UNREACHABLE entries across components
    """
    LOGGER.info("computing combinatorial distances of %s...", graph.name)
    matrix = np.full((len(graph), len(graph)), math.inf)
    for source, lengths in nx.all_pairs_shortest_path_length(to_networkx(graph)):
        row = graph.index(source)
        for target, length in lengths.items():
            matrix[row, graph.index(target)] = length
    return DistanceTable(graph.vertices, matrix)


def combinatorial_diameter(graph: WeightedGraph):
    """Return diam_d(G) as an integer, UNREACHABLE if the graph is disconnected."""
    return combinatorial_distances(graph).diameter()


def ball(graph: WeightedGraph, vertex: str, radius: int) -> tuple:
    """Return the vertices at hop distance at most radius, in graph order.

    Raises:
        ArgumentError: if the radius is negative
    """
    if radius < 0:
        raise ArgumentError(f"error: radius must be nonnegative, got {radius}")
    graph.index(vertex)
    lengths = nx.single_source_shortest_path_length(to_networkx(graph), vertex, cutoff=radius)
    return tuple(candidate for candidate in graph.vertices if candidate in lengths)


def sphere(graph: WeightedGraph, vertex: str, radius: int) -> tuple:
    """Return the vertices at hop distance exactly radius, in graph order."""
    inner = set(ball(graph, vertex, radius - 1)) if radius > 0 else set()
    return tuple(candidate for candidate in ball(graph, vertex, radius) if candidate not in inner)


def connected_components(graph: WeightedGraph) -> list:
    """Return the connected components as vertex tuples, ordered by their first vertex."""
    components = [
        tuple(vertex for vertex in graph.vertices if vertex in component)
        for component in nx.connected_components(to_networkx(graph))
    ]
    return sorted(components, key=lambda component: graph.index(component[0]))


def is_connected(graph: WeightedGraph) -> bool:
    """Return True if the graph has exactly one connected component."""
    return nx.is_connected(to_networkx(graph))


def is_hypercube(graph: WeightedGraph) -> bool:
    """Return True if the graph is a hypercube with constant weight and constant measure.

    Such graphs differ from the unit d-cube by a scaling only, so they share its bound sharpness.

    Args:
        graph (WeightedGraph): the graph to recognise

    Returns:
        bool
    """
    dimension = len(graph).bit_length() - 1
    if len(graph) != 2 ** dimension:
        return False
    edge_weights = {weight for _u_vertex, _v_vertex, weight in graph.edges()}
    if len(edge_weights) > 1 or not np.all(graph.measure == graph.measure[0]):
        return False
    nx_graph = to_networkx(graph)
    if any(node_degree != dimension for _node, node_degree in nx_graph.degree()):
        return False
    if dimension == 0:
        return True
    return nx.is_isomorphic(nx_graph, nx.hypercube_graph(dimension))


def _check_convention(measure_convention: str):
    if measure_convention not in MEASURE_CONVENTIONS:
        raise ArgumentError(
            f"error: unknown measure convention '{measure_convention}', expected one of "
            f"{', '.join(MEASURE_CONVENTIONS)}",
        )


def _read_field(item, field: str, field_type, where: str):
    if not isinstance(item, dict):
        raise GraphParseError(f"error: {where} must be a JSON object")
    if field not in item:
        raise GraphParseError(f"error: {where} has no '{field}' field")
    value = item[field]
    if field_type is str and not isinstance(value, str):
        raise GraphParseError(f"error: {where}.{field} must be a string")
    return value


def _read_real(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise GraphParseError(f"error: {where} must be a number, got {value!r}")
    return float(value)


def _hypercube(dimension: int):
    vertices = [format(label, f"0{dimension}b") for label in range(2 ** dimension)]
    edges = [
        (vertices[label], vertices[label ^ (1 << bit)])
        for label in range(2 ** dimension)
        for bit in range(dimension)
        if label < label ^ (1 << bit)
    ]
    return vertices, edges


def _cycle(size: int):
    vertices = [f"v{position}" for position in range(size)]
    if size < 3:
        return _path(size)
    return vertices, [(vertices[position], vertices[(position + 1) % size]) for position in range(size)]


def _complete(size: int):
    vertices = [f"v{position}" for position in range(size)]
    return vertices, [(vertices[row], vertices[col]) for row in range(size) for col in range(row + 1, size)]


def _path(size: int):
    vertices = [f"v{position}" for position in range(size)]
    return vertices, [(vertices[position], vertices[position + 1]) for position in range(size - 1)]


def _star(leaves: int):
    vertices = [f"v{position}" for position in range(leaves + 1)]
    return vertices, [(vertices[0], leaf) for leaf in vertices[1:]]


_FAMILY_BUILDERS = {
    "hypercube": _hypercube,
    "cycle": _cycle,
    "complete": _complete,
    "path": _path,
    "star": _star,
}
