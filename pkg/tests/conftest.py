"""Shared graphs for the tests."""

import os
import sys

import numpy as np
import pytest

sys.path.append(os.getcwd())
sys.path.append(os.path.dirname(os.path.abspath(__file__)))

import oracles
from curvgraph.graph import WeightedGraph, disjoint_union, generate

SMALL_FAMILIES = [
    ("path", 2),
    ("path", 3),
    ("path", 4),
    ("path", 5),
    ("cycle", 3),
    ("cycle", 4),
    ("cycle", 5),
    ("cycle", 6),
    ("star", 3),
    ("star", 4),
    ("complete", 4),
    ("complete", 5),
    ("hypercube", 2),
    ("hypercube", 3),
]

TREE_SEEDS = [(6, 1), (7, 2), (8, 3)]

WEIGHTED_SEEDS = [(4, 11), (5, 12), (6, 13), (7, 14), (8, 15)]

DEGREE_FAMILIES = [("path", 4), ("cycle", 5), ("star", 3), ("complete", 4)]


def small_graphs() -> list:
    """Return the corpus of graphs with at most 8 vertices."""
    graphs = [generate(family, size) for family, size in SMALL_FAMILIES]
    graphs += [oracles.random_tree(size, seed) for size, seed in TREE_SEEDS]
    return graphs


def weighted_graphs() -> list:
    """Return graphs with random weights and measures, and graphs under the degree convention."""
    graphs = [oracles.random_weighted_graph(size, seed) for size, seed in WEIGHTED_SEEDS]
    graphs += [oracles.random_weighted_graph(size, seed + 100, "degree") for size, seed in WEIGHTED_SEEDS[:3]]
    graphs += [generate(family, size, "degree") for family, size in DEGREE_FAMILIES]
    return graphs


@pytest.fixture(params=small_graphs(), ids=lambda graph: graph.name)
def small_graph(request):
    """Graph of the small corpus.

    Args:
        request: fixture parameter, "request.param" is the graph

    Returns:
        WeightedGraph
    """
    return request.param


@pytest.fixture(params=weighted_graphs(), ids=lambda graph: f"{graph.name}-{graph.measure_convention}")
def weighted_graph(request):
    """Graph with nonuniform weights or measure.

    Args:
        request: fixture parameter, "request.param" is the graph

    Returns:
        WeightedGraph
    """
    return request.param


@pytest.fixture
def edge():
    """Single edge, w = 1, m = 1."""
    return generate("path", 2)


@pytest.fixture
def path3():
    """Path on three vertices v0 - v1 - v2."""
    return generate("path", 3)


@pytest.fixture
def cube():
    """Hypercube Q_3, unit convention."""
    return generate("hypercube", 3)


@pytest.fixture
def two_edges():
    """Disjoint union of two single edges."""
    return disjoint_union(generate("path", 2), generate("path", 2))


@pytest.fixture
def single_vertex():
    """One isolated vertex with m = 1."""
    return WeightedGraph.from_edges(["a"], [1.0], [], name="point", measure_convention="unit")


@pytest.fixture
def rng():
    """Seeded random generator."""
    return np.random.default_rng(2021)
