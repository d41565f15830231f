"""This module computes Bakry-Emery curvature K_x(n), the best constant of CD(K, n) at a vertex.

K_x(n) = min { Gamma_2(f)(x) - (Delta f(x))^2 / n : f(x) = 0, Gamma(f)(x) = 1 }.

The S2 coordinates of the local forms are eliminated by a Schur complement, which leaves a
symmetric eigenproblem on S1 where the Gamma form is a positive diagonal.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy import linalg

from curvgraph import config
from curvgraph.exceptions import ArgumentError, SolverError
from curvgraph.forms import gamma, local_forms
from curvgraph.graph import WeightedGraph, as_function
from curvgraph.logger import LOGGER


@dataclass(frozen=True)
class CurvatureDiagnostics:
    """Solver details of a curvature computation."""

    s1_size: int
    s2_size: int
    cutoff: float
    coords: tuple
    witness: tuple


@dataclass(frozen=True)
class CurvatureResult:
    """K_x(n) at a vertex, +inf at isolated vertices."""

    vertex: str
    n: float
    value: float
    diagnostics: CurvatureDiagnostics

    def to_row(self) -> dict:
        """Return the JSON row {vertex, n, value, s1, s2}, "inf" encoding infinity."""
        return {
            "vertex": self.vertex,
            "n": format_dimension(self.n),
            "value": "inf" if math.isinf(self.value) else self.value,
            "s1": self.diagnostics.s1_size,
            "s2": self.diagnostics.s2_size,
        }


@dataclass(frozen=True)
class CDVerdict:
    """Outcome of a CD(K, n) check."""

    holds: bool
    margin: float


def format_dimension(dimension: float):
    """Return the dimension parameter for serialization, "inf" for infinity."""
    return "inf" if math.isinf(dimension) else dimension


def check_dimension(dimension: float) -> float:
    """Validate a dimension parameter n in (0, inf].

    Raises:
        ArgumentError: if n is not a positive number

    Returns:
        n as float
    """
    try:
        dimension = float(dimension)
    except (TypeError, ValueError) as error:
        raise ArgumentError(f"error: dimension n must be a number, got {dimension!r}") from error
    if math.isnan(dimension) or dimension <= 0:
        raise ArgumentError(f"error: dimension n must be in (0, inf], got {dimension}")
    return dimension


def vertex_curvature(graph: WeightedGraph, vertex: str, dimension: float = math.inf) -> CurvatureResult:
    """Return K_x(n).

    Args:
        graph (WeightedGraph): the graph
        vertex (str): the vertex x
        dimension (float): n in (0, inf]

    Raises:
        ArgumentError: if n <= 0
        FormsError: if the S2 block of Gamma_2 fails the PSD guard
        SolverError: if the S1/S2 coupling leaves the range of the S2 block

    Returns:
        CurvatureResult with the minimizing witness
    """
    dimension = check_dimension(dimension)
    forms = local_forms(graph, vertex)
    s1_size = forms.s1_size
    if not s1_size:
        LOGGER.info("vertex %s is isolated, curvature is +inf...", vertex)
        diagnostics = CurvatureDiagnostics(0, 0, 0.0, (), ())
        return CurvatureResult(vertex, dimension, math.inf, diagnostics)

    quadratic = np.array(forms.q2)
    if math.isfinite(dimension):
        quadratic -= np.outer(forms.lap, forms.lap) / dimension
    top_left = quadratic[:s1_size, :s1_size]
    coupling = quadratic[s1_size:, :s1_size]
    bottom_right = quadratic[s1_size:, s1_size:]

    elimination, cutoff = _eliminate_second_sphere(bottom_right, coupling, vertex)
    effective = top_left + coupling.T @ elimination

    scaling = 1 / np.sqrt(np.diag(forms.g1)[:s1_size])
    normalized = scaling[:, None] * effective * scaling[None, :]
    normalized = 0.5 * (normalized + normalized.T)
    eigenvalues, eigenvectors = linalg.eigh(normalized)

    first_part = scaling * eigenvectors[:, 0]
    witness = np.concatenate((first_part, elimination @ first_part))
    diagnostics = CurvatureDiagnostics(
        s1_size=s1_size,
        s2_size=forms.s2_size,
        cutoff=cutoff,
        coords=forms.coords,
        witness=tuple(witness.tolist()),
    )
    return CurvatureResult(vertex, dimension, float(eigenvalues[0]), diagnostics)


def graph_curvature(graph: WeightedGraph, dimension: float = math.inf):
    """Return the graph curvature min_x K_x(n) with its first minimizing vertex.

    Vertices are evaluated concurrently; the reduction follows vertex order.

    Args:
        graph (WeightedGraph): the graph
        dimension (float): n in (0, inf]

    Returns:
        tuple (value, argmin vertex)
    """
    results = vertex_curvatures(graph, dimension)
    best = results[0]
    for result in results[1:]:
        if result.value < best.value:
            best = result
    return best.value, best.vertex


def vertex_curvatures(graph: WeightedGraph, dimension: float = math.inf) -> list:
    """Return K_x(n) for every vertex, in graph order.

    Args:
        graph (WeightedGraph): the graph
        dimension (float): n in (0, inf]

    Returns:
        a list of CurvatureResult
    """
    dimension = check_dimension(dimension)
    LOGGER.info("computing curvature of %s at n=%s...", graph.name, format_dimension(dimension))
    with ThreadPoolExecutor(max_workers=config.worker_count()) as executor:
        executor_pool = [
            executor.submit(vertex_curvature, graph, vertex, dimension) for vertex in graph.vertices
        ]
        return [executor_result.result() for executor_result in executor_pool]


def verify_cd(graph: WeightedGraph, lower_bound: float, dimension: float = math.inf) -> CDVerdict:
    """Decide whether the graph satisfies CD(K, n).

    Args:
        graph (WeightedGraph): the graph
        lower_bound (float): the curvature bound K
        dimension (float): n in (0, inf]

    Returns:
        CDVerdict, holds if the graph curvature is at least K - 1e-9
    """
    value, _vertex = graph_curvature(graph, dimension)
    return CDVerdict(holds=value >= lower_bound - config.CD_TOL, margin=value - lower_bound)


def curvature_profile(graph: WeightedGraph, vertex: str, dimensions) -> list:
    """Tabulate K_x(n) over a grid of dimension parameters.

    Args:
        graph (WeightedGraph): the graph
        vertex (str): the vertex x
        dimensions: iterable of n values in (0, inf]

    Returns:
        a list of (n, K_x(n)) sorted by n
    """
    grid = sorted(check_dimension(dimension) for dimension in dimensions)
    return [(dimension, vertex_curvature(graph, vertex, dimension).value) for dimension in grid]


def degree_bound_check(graph: WeightedGraph, values) -> float:
    """Return max_x of (Delta g(x))^2 - 2 Deg(x) Gamma(g)(x), nonpositive by Cauchy-Schwarz.

    Args:
        graph (WeightedGraph): the graph
        values: the function g

    Returns:
        the maximal signed violation
    """
    function = as_function(graph, values)
    laplacian = graph.laplacian_matrix @ function
    return float(np.max(laplacian ** 2 - 2 * graph.degrees * gamma(graph, function)))


def _eliminate_second_sphere(bottom_right: np.ndarray, coupling: np.ndarray, vertex: str):
    """Return (-Q22^+ Q21, cutoff) with a range check of the coupling block."""
    if not bottom_right.size:
        return np.zeros((0, coupling.shape[1])), 0.0
    eigenvalues, eigenvectors = linalg.eigh(bottom_right)
    cutoff = config.PINV_CUTOFF * max(float(eigenvalues[-1]), 0.0)
    kept = eigenvalues > cutoff
    basis = eigenvectors[:, kept]

    coupling_norm = np.linalg.norm(coupling)
    if coupling_norm > 0:
        residual = np.linalg.norm(coupling - basis @ (basis.T @ coupling))
        if residual > config.RANGE_TOL * coupling_norm:
            raise SolverError(
                f"error: curvature at vertex '{vertex}' is unbounded below: S1/S2 coupling leaves the range of "
                f"the S2 block (relative residual {residual / coupling_norm:.3e})",
            )
    pseudo_inverse = (basis / eigenvalues[kept]) @ basis.T
    return -pseudo_inverse @ coupling, cutoff
