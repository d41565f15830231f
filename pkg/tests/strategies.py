"""Hypothesis strategies for random graphs and functions on them."""

import numpy as np
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

import oracles

PROPERTY_SETTINGS = settings(max_examples=200, deadline=None, suppress_health_check=[HealthCheck.too_slow])

reals = st.floats(min_value=-10, max_value=10, allow_nan=False, allow_infinity=False)
times = st.floats(min_value=0, max_value=20, allow_nan=False, allow_infinity=False)


@st.composite
def graphs(draw, min_size: int = 2, max_size: int = 7):
    """Draw a connected graph with random weights under a random measure convention.

    Args:
        draw: hypothesis draw function
        min_size (int): smallest vertex count
        max_size (int): largest vertex count

    Returns:
        WeightedGraph
    """
    size = draw(st.integers(min_value=min_size, max_value=max_size))
    seed = draw(st.integers(min_value=0, max_value=2 ** 32 - 1))
    convention = draw(st.sampled_from(["custom", "degree", "unit"]))
    return oracles.random_weighted_graph(size, seed, convention)


def vertex_functions(graph, elements=reals):
    """Return a strategy of real functions on the vertices of a graph, in graph order."""
    return st.lists(elements, min_size=len(graph), max_size=len(graph)).map(np.array)
