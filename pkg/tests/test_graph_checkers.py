"""This module provides tests for "graph_checkers.py"."""

import os
import sys

import numpy as np
import pytest

sys.path.append(os.getcwd())

from curvgraph.exceptions import GraphValidationError
from curvgraph.graph_checkers import (
    GraphChecker,
    MeasureChecker,
    SelfLoopChecker,
    SymmetryChecker,
    VertexIdChecker,
    WeightChecker,
)

VERTICES = ("x", "y", "z")
PATH_WEIGHTS = np.array([[0.0, 1.0, 0.0], [1.0, 0.0, 2.0], [0.0, 2.0, 0.0]])


@pytest.mark.parametrize("vertices, message", [
    pytest.param((), "no vertices", id="empty"),
    pytest.param(("x", ""), "invalid vertex id", id="empty_string"),
    pytest.param(("x", 7), "invalid vertex id", id="not_string"),
    pytest.param(("x", "y", "x"), "duplicate vertex id 'x'", id="duplicate"),
])
def test_vertex_id_checker_fails(vertices, message):
    """Test that "VertexIdChecker" rejects bad identifier tuples.

    Args:
        vertices: vertex identifiers
        message: expected part of the error message
    """
    with pytest.raises(GraphValidationError, match=message):
        VertexIdChecker(vertices=vertices).check()


def test_vertex_id_checker_passes():
    """Test that "VertexIdChecker" accepts unique nonempty strings."""
    assert VertexIdChecker(vertices=VERTICES).check()


@pytest.mark.parametrize("measure", [
    pytest.param([1.0, 0.0, 1.0], id="zero"),
    pytest.param([1.0, -2.0, 1.0], id="negative"),
    pytest.param([1.0, np.inf, 1.0], id="infinite"),
    pytest.param([1.0, np.nan, 1.0], id="nan"),
])
def test_measure_checker_fails(measure):
    """Test that "MeasureChecker" names the vertex with a bad measure.

    Args:
        measure: measure values
    """
    with pytest.raises(GraphValidationError, match=r"m\(y\)"):
        MeasureChecker(vertices=VERTICES, measure=np.array(measure)).check()


def test_measure_checker_length():
    """Test that "MeasureChecker" rejects a measure of the wrong length."""
    with pytest.raises(GraphValidationError, match="2 measure values for 3 vertices"):
        MeasureChecker(vertices=VERTICES, measure=np.ones(2)).check()


def test_weight_checker_fails():
    """Test that "WeightChecker" rejects negative and non-finite weights and bad shapes."""
    negative = PATH_WEIGHTS.copy()
    negative[0, 2] = negative[2, 0] = -1.0
    with pytest.raises(GraphValidationError, match=r"w\(x, z\) = -1.0"):
        WeightChecker(vertices=VERTICES, weights=negative).check()
    with pytest.raises(GraphValidationError, match="shape"):
        WeightChecker(vertices=VERTICES, weights=np.zeros((2, 2))).check()


def test_self_loop_checker_fails():
    """Test that "SelfLoopChecker" reports the vertex carrying a loop."""
    looped = PATH_WEIGHTS.copy()
    looped[2, 2] = 1.0
    with pytest.raises(GraphValidationError, match="self-loop at vertex 'z'"):
        SelfLoopChecker(vertices=VERTICES, weights=looped).check()


def test_symmetry_checker_fails():
    """Test that "SymmetryChecker" reports the first asymmetric pair."""
    skewed = PATH_WEIGHTS.copy()
    skewed[1, 2] = 3.0
    with pytest.raises(GraphValidationError, match="asymmetric weight between 'y' and 'z'"):
        SymmetryChecker(vertices=VERTICES, weights=skewed).check()


def test_graph_checker_passes():
    """Test that "GraphChecker" accepts a valid triple."""
    assert GraphChecker(vertices=VERTICES, measure=np.ones(3), weights=PATH_WEIGHTS).check()


def test_graph_checker_order():
    """Test that "GraphChecker" reports the measure before the weights."""
    skewed = PATH_WEIGHTS.copy()
    skewed[1, 2] = 3.0
    with pytest.raises(GraphValidationError, match="nonpositive measure"):
        GraphChecker(vertices=VERTICES, measure=np.array([1.0, 0.0, 1.0]), weights=skewed).check()
