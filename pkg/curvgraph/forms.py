"""This module provides the Bakry-Emery operators and their local quadratic forms.

2 Gamma(f, g) = Delta(f g) - f Delta g - g Delta f
2 Gamma_2(f, g) = Delta Gamma(f, g) - Gamma(f, Delta g) - Gamma(g, Delta f)

Operators accept one function (shape (|V|,)) or several stacked as columns (shape (|V|, k));
columns broadcast against each other, which is how the local forms are assembled.
"""

from dataclasses import dataclass

import numpy as np

from curvgraph import config
from curvgraph.exceptions import FormsError
from curvgraph.graph import WeightedGraph, as_function, sphere
from curvgraph.logger import LOGGER


@dataclass(frozen=True)
class LocalForms:
    """Gamma_2, Gamma and Delta at a center, on the punctured 2-ball.

    Coordinates list S1(center) then S2(center), each in graph order; the gauge f(center) = 0
    removes the center itself.
    """

    center: str
    coords: tuple
    s1_size: int
    q2: np.ndarray
    g1: np.ndarray
    lap: np.ndarray

    @property
    def s2_size(self) -> int:
        """Number of vertices at distance two."""
        return len(self.coords) - self.s1_size

    def to_dict(self) -> dict:
        """Return a JSON-ready representation."""
        return {
            "center": self.center,
            "coords": list(self.coords),
            "s1": self.s1_size,
            "s2": self.s2_size,
            "q2": self.q2.tolist(),
            "g1": self.g1.tolist(),
            "lap": self.lap.tolist(),
        }


def gamma(graph: WeightedGraph, values, other_values=None) -> np.ndarray:
    """Return Gamma(f, g) pointwise, Gamma(f) when g is omitted.

    Args:
        graph (WeightedGraph): the graph
        values: the function f
        other_values: the function g, defaults to f

    Returns:
        Gamma(f, g) in graph order
    """
    first = as_function(graph, values)
    second = first if other_values is None else as_function(graph, other_values)
    return _gamma(graph.laplacian_matrix, first, second)


def gamma2(graph: WeightedGraph, values, other_values=None) -> np.ndarray:
    """Return Gamma_2(f, g) pointwise, Gamma_2(f) when g is omitted.

    Args:
        graph (WeightedGraph): the graph
        values: the function f
        other_values: the function g, defaults to f

    Returns:
        Gamma_2(f, g) in graph order
    """
    first = as_function(graph, values)
    second = first if other_values is None else as_function(graph, other_values)
    return _gamma2(graph.laplacian_matrix, first, second)


def gamma_from_differences(graph: WeightedGraph, values) -> np.ndarray:
    """Return Gamma(f)(x) = 1/(2 m(x)) * sum_y w(x, y) (f(y) - f(x))^2 for a single function."""
    function = as_function(graph, values)
    differences = function[None, :] - function[:, None]
    return 0.5 * (graph.weights * differences ** 2).sum(axis=1) / graph.measure


def full_local_forms(graph: WeightedGraph, center: str):
    """Return the un-gauged forms on B2(center).

    Coordinates are the center, then S1, then S2. Entry (u, v) of each form is the operator
    applied to the indicator functions of u and v, evaluated at the center.

    Args:
        graph (WeightedGraph): the graph
        center (str): the vertex x

    Returns:
        tuple (points, s1_size, q2, g1, lap)
    """
    first_sphere = sphere(graph, center, 1)
    second_sphere = sphere(graph, center, 2)
    points = (center,) + first_sphere + second_sphere
    size = len(points)
    row = graph.index(center)

    indicators = np.zeros((len(graph), size))
    indicators[[graph.index(point) for point in points], np.arange(size)] = 1.0

    laplacian = graph.laplacian_matrix
    q2 = np.zeros((size, size))
    g1 = np.zeros((size, size))
    for position in range(size):
        column = indicators[:, [position]]
        rest = indicators[:, position:]
        q2[position, position:] = _gamma2(laplacian, column, rest)[row]
        g1[position, position:] = _gamma(laplacian, column, rest)[row]
    q2 = np.triu(q2) + np.triu(q2, 1).T
    g1 = np.triu(g1) + np.triu(g1, 1).T
    lap = (laplacian @ indicators)[row]
    return points, len(first_sphere), q2, g1, lap


def local_forms(graph: WeightedGraph, center: str) -> LocalForms:
    """Return the gauged local forms at a vertex.

    Args:
        graph (WeightedGraph): the graph
        center (str): the vertex x

    Raises:
        FormsError: if the S2 block of Gamma_2 has an eigenvalue below -1e-9 times its largest diagonal entry

    Returns:
        LocalForms on S1(x) followed by S2(x)
    """
    LOGGER.debug("building local forms at vertex %s...", center)
    points, s1_size, q2, g1, lap = full_local_forms(graph, center)
    forms = LocalForms(
        center=center,
        coords=points[1:],
        s1_size=s1_size,
        q2=q2[1:, 1:],
        g1=g1[1:, 1:],
        lap=lap[1:],
    )
    for array in (forms.q2, forms.g1, forms.lap):
        array.setflags(write=False)
    _check_second_block(forms)
    return forms


def _check_second_block(forms: LocalForms):
    block = forms.q2[forms.s1_size:, forms.s1_size:]
    if not block.size:
        return
    scale = max(float(np.max(np.diag(forms.q2))), 0.0) or 1.0
    lowest = float(np.linalg.eigvalsh(block)[0])
    if lowest < -config.PSD_GUARD * scale:
        raise FormsError(
            f"error: Gamma_2 restricted to S2({forms.center}) is not positive semidefinite "
            f"(smallest eigenvalue {lowest:.3e})",
        )


def _gamma(laplacian: np.ndarray, first: np.ndarray, second: np.ndarray) -> np.ndarray:
    return 0.5 * (laplacian @ (first * second) - first * (laplacian @ second) - second * (laplacian @ first))


def _gamma2(laplacian: np.ndarray, first: np.ndarray, second: np.ndarray) -> np.ndarray:
    return 0.5 * (
        laplacian @ _gamma(laplacian, first, second)
        - _gamma(laplacian, first, laplacian @ second)
        - _gamma(laplacian, second, laplacian @ first)
    )
