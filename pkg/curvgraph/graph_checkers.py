"""This module provides checkers for the WeightedGraph invariants.

"GraphChecker" calls the next classes:
    VertexIdChecker: checks there is at least one vertex and identifiers are nonempty and unique
    MeasureChecker: checks every vertex measure is finite and positive
    WeightChecker: checks every edge weight is finite and nonnegative
    SelfLoopChecker: checks the weight matrix has a zero diagonal
    SymmetryChecker: checks w(x, y) == w(y, x) by full enumeration
"""

import math
from abc import ABC, abstractmethod

import numpy as np

from curvgraph.exceptions import GraphValidationError
from curvgraph.logger import LOGGER


class Checker(ABC):
    """Abstract class for checkers.

    Inherited classes must redefine the "check" method.
    """

    @abstractmethod
    def check(self):
        """Provide the "check" method as a required interface."""


class VertexIdChecker(Checker):
    """Check vertex identifiers for emptiness and duplicates."""

    def __init__(self, vertices: tuple):
        """Expect vertex identifiers in the "tuple" format.

        Args:
            vertices (tuple): vertex identifiers in graph order
        """
        self.vertices = vertices

    def check(self) -> bool:
        """Check every identifier is a nonempty string and appears once.

        Raises:
            GraphValidationError: on the first bad or repeated identifier

        Returns:
            True if check is passed
        """
        if not self.vertices:
            raise GraphValidationError("error: the graph has no vertices")
        seen = set()
        for vertex in self.vertices:
            if not isinstance(vertex, str) or not vertex:
                raise GraphValidationError(f"error: invalid vertex id {vertex!r}: ids must be nonempty strings")
            if vertex in seen:
                raise GraphValidationError(f"error: duplicate vertex id '{vertex}'")
            seen.add(vertex)
        return True


class MeasureChecker(Checker):
    """Check vertex measures for positivity."""

    def __init__(self, vertices: tuple, measure: np.ndarray):
        """Expect one measure value per vertex.

        Args:
            vertices (tuple): vertex identifiers in graph order
            measure (np.ndarray): measure values in graph order
        """
        self.vertices = vertices
        self.measure = measure

    def check(self) -> bool:
        """Check every measure value is finite and strictly positive.

        Raises:
            GraphValidationError: if a value is nonpositive or not finite

        Returns:
            True if check is passed
        """
        if len(self.measure) != len(self.vertices):
            raise GraphValidationError(
                f"error: got {len(self.measure)} measure values for {len(self.vertices)} vertices",
            )
        for vertex, mass in zip(self.vertices, self.measure):
            if not math.isfinite(mass) or mass <= 0:
                raise GraphValidationError(f"error: nonpositive measure m({vertex}) = {mass}")
        return True


class WeightChecker(Checker):
    """Check edge weights for finiteness and sign."""

    def __init__(self, vertices: tuple, weights: np.ndarray):
        """Expect a square weight matrix in graph order.

        Args:
            vertices (tuple): vertex identifiers in graph order
            weights (np.ndarray): weight matrix
        """
        self.vertices = vertices
        self.weights = weights

    def check(self) -> bool:
        """Check the matrix shape and that every weight is finite and nonnegative.

        Raises:
            GraphValidationError: on the first negative or infinite weight

        Returns:
            True if check is passed
        """
        size = len(self.vertices)
        if self.weights.shape != (size, size):
            raise GraphValidationError(f"error: weight matrix shape {self.weights.shape} doesn't match {size} vertices")
        bad = np.argwhere(~np.isfinite(self.weights) | (self.weights < 0))
        if bad.size:
            row, col = bad[0]
            raise GraphValidationError(
                f"error: negative or non-finite weight w({self.vertices[row]}, {self.vertices[col]}) = "
                f"{self.weights[row, col]}",
            )
        return True


class SelfLoopChecker(Checker):
    """Check the weight matrix for self-loops."""

    def __init__(self, vertices: tuple, weights: np.ndarray):
        """Expect a square weight matrix in graph order.

        Args:
            vertices (tuple): vertex identifiers in graph order
            weights (np.ndarray): weight matrix
        """
        self.vertices = vertices
        self.weights = weights

    def check(self) -> bool:
        """Check w(x, x) == 0 for every vertex.

        Raises:
            GraphValidationError: on the first self-loop

        Returns:
            True if check is passed
        """
        for index in np.flatnonzero(np.diag(self.weights)):
            vertex = self.vertices[index]
            raise GraphValidationError(f"error: self-loop at vertex '{vertex}' (w({vertex}, {vertex}) != 0)")
        return True


class SymmetryChecker(Checker):
    """Check the weight matrix for symmetry."""

    def __init__(self, vertices: tuple, weights: np.ndarray):
        """Expect a square weight matrix in graph order.

        Args:
            vertices (tuple): vertex identifiers in graph order
            weights (np.ndarray): weight matrix
        """
        self.vertices = vertices
        self.weights = weights

    def check(self) -> bool:
        """Check w(x, y) == w(y, x) over all ordered pairs.

        Raises:
            GraphValidationError: on the first asymmetric pair

        Returns:
            True if check is passed
        """
        bad = np.argwhere(self.weights != self.weights.T)
        if bad.size:
            row, col = bad[0]
            raise GraphValidationError(
                f"error: asymmetric weight between '{self.vertices[row]}' and '{self.vertices[col]}': "
                f"{self.weights[row, col]} != {self.weights[col, row]}",
            )
        return True


class GraphChecker:
    """Check a graph candidate against every WeightedGraph invariant.

    If any of the checks fail, "GraphValidationError" with specific message is raised.
    """

    def __init__(self, vertices: tuple, measure: np.ndarray, weights: np.ndarray):
        """Initialize list with checkers instances.

        Args:
            vertices (tuple): vertex identifiers in graph order
            measure (np.ndarray): measure values in graph order
            weights (np.ndarray): weight matrix in graph order
        """
        self._instances_to_check = [
            VertexIdChecker(vertices=vertices),
            MeasureChecker(vertices=vertices, measure=measure),
            WeightChecker(vertices=vertices, weights=weights),
            SelfLoopChecker(vertices=vertices, weights=weights),
            SymmetryChecker(vertices=vertices, weights=weights),
        ]

    def check(self) -> bool:
        """Run checking process.

        All checkers' classes in "self._instances_to_check" must contain the "check" method without parameters
        and raise exceptions if checks fail.

        Returns:
            True if all checks are passed
        """
        LOGGER.debug("checking graph invariants...")
        for checker in self._instances_to_check:
            checker.check()
        return True
