"""This module provides the exact heat semigroup P_t = exp(t Delta) and the semigroup inequalities.

The generator is symmetrized by conjugation with sqrt(m), diagonalized once, and every P_t is then
evaluated spectrally, without time-stepping error.

Checks:
    check_cd_infty_envelope: Gamma(P_t f) <= exp(-2Kt) P_t Gamma(f)
    check_cd_n_envelope: Gamma(P_t f) <= exp(-2Kt) P_t Gamma(f) - (1 - exp(-2Kt)) / (Kn) (Delta P_t f)^2
    derivative_bound_report: |Delta P_t f| against sqrt(2 Deg) exp(-Kt) and sqrt(Kn) / sqrt(exp(2Kt) - 1)
    displacement_bound_report: |P_t f - f| against sqrt(2 Deg) / K and (pi / 2) sqrt(n / K)
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, linalg

from curvgraph import config
from curvgraph.exceptions import ArgumentError, InvariantFailure, SolverError
from curvgraph.forms import gamma
from curvgraph.graph import WeightedGraph, as_function, connected_components
from curvgraph.logger import LOGGER
from curvgraph.metrics import rescale_to_feasible

SPECTRAL_TOL = 1e-10


class HeatPropagator:
    """Spectral factorization of the graph Laplacian."""

    def __init__(self, graph: WeightedGraph, eigenvalues: np.ndarray, eigenvectors: np.ndarray):
        """Store the factorization of sqrt(m) Delta / sqrt(m).

        Args:
            graph (WeightedGraph): the graph
            eigenvalues (np.ndarray): nonpositive eigenvalues in ascending order
            eigenvectors (np.ndarray): orthonormal eigenvectors as columns
        """
        self.graph = graph
        self.eigenvalues = eigenvalues
        self.eigenvectors = eigenvectors
        self.sqrt_measure = np.sqrt(graph.measure)
        for array in (self.eigenvalues, self.eigenvectors, self.sqrt_measure):
            array.setflags(write=False)

    def apply(self, time: float, values) -> np.ndarray:
        """Return P_t f.

        Args:
            time (float): t >= 0
            values: function, or functions stacked as columns

        Raises:
            ArgumentError: if t < 0

        Returns:
            P_t f in graph order
        """
        return self._spectral(time, values, np.exp(time * self.eigenvalues) if time >= 0 else None)

    def derivative(self, time: float, values) -> np.ndarray:
        """Return d/dt P_t f = Delta P_t f."""
        if time < 0:
            return self._spectral(time, values, None)
        return self._spectral(time, values, self.eigenvalues * np.exp(time * self.eigenvalues))

    def zero_modes(self) -> int:
        """Return the number of eigenvalues within tolerance of zero."""
        return int(np.sum(np.abs(self.eigenvalues) <= SPECTRAL_TOL * self._scale()))

    def _scale(self) -> float:
        return max(1.0, float(np.max(np.abs(self.eigenvalues))))

    def _spectral(self, time: float, values, multipliers) -> np.ndarray:
        if multipliers is None:
            raise ArgumentError(f"error: semigroup time must be nonnegative, got t={time}")
        function = as_function(self.graph, values)
        conjugated = function * (self.sqrt_measure if function.ndim == 1 else self.sqrt_measure[:, None])
        coefficients = self.eigenvectors.T @ conjugated
        coefficients *= multipliers if function.ndim == 1 else multipliers[:, None]
        result = self.eigenvectors @ coefficients
        return result / (self.sqrt_measure if function.ndim == 1 else self.sqrt_measure[:, None])


@dataclass(frozen=True)
class EnvelopeRow:
    """One (t, x) evaluation of a semigroup inequality lhs <= rhs."""

    t: float
    x: str
    lhs: float
    rhs: float
    violation: float
    scale: float


@dataclass(frozen=True)
class EnvelopeCheck:
    """All evaluations of a semigroup inequality for one function."""

    rows: tuple

    @property
    def max_violation(self) -> float:
        """Largest lhs - rhs."""
        return max(row.violation for row in self.rows)

    @property
    def max_scaled_violation(self) -> float:
        """Largest (lhs - rhs) / max(1, |P_t Gamma f|_inf)."""
        return max(row.violation / row.scale for row in self.rows)

    @property
    def holds(self) -> bool:
        """True if every violation is within 1e-9 times its scale."""
        return self.max_scaled_violation <= config.ENVELOPE_TOL


@dataclass(frozen=True)
class DerivativeRow:
    """|Delta P_t f(x)| against its curvature bounds."""

    t: float
    x: str
    derivative: float
    bound_infinity: float
    bound_dimension: float
    exceeded: bool


@dataclass(frozen=True)
class DisplacementRow:
    """|P_t f(x) - f(x)| against its integrated curvature bounds."""

    t: float
    x: str
    displacement: float
    bound_infinity: float
    bound_dimension: float
    exceeded: bool


def build_propagator(graph: WeightedGraph) -> HeatPropagator:
    """Diagonalize the symmetrized generator of a graph.

    Args:
        graph (WeightedGraph): the graph

    Raises:
        SolverError: if the eigendecomposition fails
        InvariantFailure: if the spectrum is positive somewhere, its kernel doesn't match the
            component count, or P_0 is not the identity

    Returns:
        HeatPropagator
    """
    LOGGER.info("diagonalizing the generator of %s...", graph.name)
    sqrt_measure = np.sqrt(graph.measure)
    generator = (graph.weights - np.diag(graph.weights.sum(axis=1))) / np.outer(sqrt_measure, sqrt_measure)
    try:
        eigenvalues, eigenvectors = linalg.eigh(generator)
    except linalg.LinAlgError as error:
        raise SolverError(f"error: eigendecomposition of the generator of '{graph.name}' failed: {error}") from error

    propagator = HeatPropagator(graph, eigenvalues, eigenvectors)
    scale = propagator._scale()
    if eigenvalues[-1] > SPECTRAL_TOL * scale:
        raise InvariantFailure(f"error: generator of '{graph.name}' has positive eigenvalue {eigenvalues[-1]:.3e}")
    components = len(connected_components(graph))
    if propagator.zero_modes() != components:
        raise InvariantFailure(
            f"error: generator of '{graph.name}' has {propagator.zero_modes()} zero eigenvalues "
            f"for {components} components",
        )
    reconstruction = np.max(np.abs(eigenvectors @ eigenvectors.T - np.eye(len(graph))))
    if reconstruction > SPECTRAL_TOL:
        raise InvariantFailure(f"error: P_0 of '{graph.name}' differs from identity by {reconstruction:.3e}")
    return propagator


def apply(propagator: HeatPropagator, time: float, values) -> np.ndarray:
    """Return P_t f, see "HeatPropagator.apply"."""
    return propagator.apply(time, values)


def default_t_grid(curvature: float) -> list:
    """Return t = 0 plus 64 geometric points on [1e-3, 10 / K].

    Args:
        curvature (float): K, falls back to K = 1 when not finite and positive

    Returns:
        a list of times
    """
    end = 10 / curvature if math.isfinite(curvature) and curvature > 0 else 10.0
    end = max(end, 10 * config.T_GRID_START)
    return [0.0] + np.geomspace(config.T_GRID_START, end, config.T_GRID_POINTS).tolist()


def random_functions(graph: WeightedGraph, count: int, seed: int) -> np.ndarray:
    """Return count functions with independent uniform values in [-1, 1], as columns."""
    return np.random.default_rng(seed).uniform(-1.0, 1.0, size=(len(graph), count))


def check_cd_infty_envelope(
        graph: WeightedGraph,
        curvature: float,
        values,
        t_grid=None,
        propagator: HeatPropagator = None,
) -> EnvelopeCheck:
    """Evaluate Gamma(P_t f) <= exp(-2Kt) P_t Gamma(f) on a time grid.

    The inequality is expected when the graph satisfies CD(K, inf).

    Args:
        graph (WeightedGraph): the graph
        curvature (float): K
        values: the function f
        t_grid: times, "default_t_grid(K)" when omitted
        propagator (HeatPropagator): prebuilt propagator, optional

    Returns:
        EnvelopeCheck
    """
    propagator = propagator or build_propagator(graph)
    function = as_function(graph, values)
    gradient = gamma(graph, function)

    def envelope(time):
        evolved = propagator.apply(time, function)
        smoothed = propagator.apply(time, gradient)
        return gamma(graph, evolved), _decay(curvature, time) * smoothed, smoothed

    return _evaluate(graph, envelope, _grid(t_grid, curvature))


def check_cd_n_envelope(
        graph: WeightedGraph,
        curvature: float,
        dimension: float,
        values,
        t_grid=None,
        propagator: HeatPropagator = None,
) -> EnvelopeCheck:
    """Evaluate Gamma(P_t f) <= exp(-2Kt) P_t Gamma(f) - (1 - exp(-2Kt)) / (Kn) (Delta P_t f)^2.

    The inequality is expected when the graph satisfies CD(K, n).

    Args:
        graph (WeightedGraph): the graph
        curvature (float): K > 0
        dimension (float): finite n > 0
        values: the function f
        t_grid: times, "default_t_grid(K)" when omitted
        propagator (HeatPropagator): prebuilt propagator, optional

    Raises:
        ArgumentError: if K <= 0 or n is not finite

    Returns:
        EnvelopeCheck
    """
    if not (math.isfinite(curvature) and curvature > 0):
        raise ArgumentError(f"error: the CD(K, n) envelope needs a finite K > 0, got K={curvature}")
    if not (math.isfinite(dimension) and dimension > 0):
        raise ArgumentError(f"error: the CD(K, n) envelope needs a finite n > 0, got n={dimension}")
    propagator = propagator or build_propagator(graph)
    function = as_function(graph, values)
    gradient = gamma(graph, function)

    def envelope(time):
        evolved = propagator.apply(time, function)
        smoothed = propagator.apply(time, gradient)
        decay = _decay(curvature, time)
        correction = (1 - decay) / (curvature * dimension) * (graph.laplacian_matrix @ evolved) ** 2
        return gamma(graph, evolved), decay * smoothed - correction, smoothed

    return _evaluate(graph, envelope, _grid(t_grid, curvature))


def derivative_bound_report(
        graph: WeightedGraph,
        curvature: float,
        dimension: float,
        values,
        t_grid=None,
        propagator: HeatPropagator = None,
) -> list:
    """Compare |Delta P_t f(x)| with sqrt(2 Deg(x)) exp(-Kt) and, for finite n, sqrt(Kn / (exp(2Kt) - 1)).

    f is first rescaled so that |Gamma f|_inf <= 1.

    Args:
        graph (WeightedGraph): the graph
        curvature (float): K
        dimension (float): n in (0, inf]
        values: the function f
        t_grid: times, "default_t_grid(K)" when omitted
        propagator (HeatPropagator): prebuilt propagator, optional

    Returns:
        a list of DerivativeRow, bound_dimension is nan where it doesn't apply
    """
    propagator = propagator or build_propagator(graph)
    function = rescale_to_feasible(graph, as_function(graph, values))
    rows = []
    for time in _grid(t_grid, curvature):
        derivative = np.abs(propagator.derivative(time, function))
        bound_infinity = np.sqrt(2 * graph.degrees) * math.sqrt(_decay(curvature, time))
        bound_dimension = _dimension_rate(curvature, dimension, time)
        for position, vertex in enumerate(graph.vertices):
            exceeded = derivative[position] > bound_infinity[position] + config.ENVELOPE_TOL
            exceeded = exceeded or derivative[position] > bound_dimension + config.ENVELOPE_TOL
            rows.append(DerivativeRow(
                t=time,
                x=vertex,
                derivative=float(derivative[position]),
                bound_infinity=float(bound_infinity[position]),
                bound_dimension=bound_dimension,
                exceeded=bool(exceeded),
            ))
    return rows


def displacement_bound_report(
        graph: WeightedGraph,
        curvature: float,
        dimension: float,
        values,
        t_grid=None,
        propagator: HeatPropagator = None,
) -> list:
    """Compare |P_t f(x) - f(x)| with sqrt(2 Deg(x)) / K and, for finite n, (pi / 2) sqrt(n / K).

    These are the time integrals of the derivative bounds; f is rescaled to |Gamma f|_inf <= 1.

    Args:
        graph (WeightedGraph): the graph
        curvature (float): K > 0
        dimension (float): n in (0, inf]
        values: the function f
        t_grid: times, "default_t_grid(K)" when omitted
        propagator (HeatPropagator): prebuilt propagator, optional

    Raises:
        ArgumentError: if K <= 0

    Returns:
        a list of DisplacementRow, bound_dimension is nan for n = inf
    """
    if not curvature > 0:
        raise ArgumentError(f"error: displacement bounds need K > 0, got K={curvature}")
    propagator = propagator or build_propagator(graph)
    function = rescale_to_feasible(graph, as_function(graph, values))
    bound_infinity = np.sqrt(2 * graph.degrees) / curvature
    bound_dimension = math.pi / 2 * math.sqrt(dimension / curvature) if math.isfinite(dimension) else math.nan
    rows = []
    for time in _grid(t_grid, curvature):
        displacement = np.abs(propagator.apply(time, function) - function)
        for position, vertex in enumerate(graph.vertices):
            exceeded = displacement[position] > bound_infinity[position] + config.ENVELOPE_TOL
            exceeded = exceeded or displacement[position] > bound_dimension + config.ENVELOPE_TOL
            rows.append(DisplacementRow(
                t=time,
                x=vertex,
                displacement=float(displacement[position]),
                bound_infinity=float(bound_infinity[position]),
                bound_dimension=bound_dimension,
                exceeded=bool(exceeded),
            ))
    return rows


def resistance_integral(curvature: float, dimension: float) -> float:
    """Return the quadrature of sqrt(Kn) / sqrt(exp(2Kt) - 1) over [0, inf).

    The substitution t = s^2 removes the endpoint singularity.

    Args:
        curvature (float): K > 0
        dimension (float): finite n > 0

    Raises:
        ArgumentError: if K or n is not finite and positive

    Returns:
        the integral, (pi / 2) sqrt(n / K) in closed form
    """
    for label, number in (("K", curvature), ("n", dimension)):
        if not (math.isfinite(number) and number > 0):
            raise ArgumentError(f"error: the integral needs finite {label} > 0, got {number}")
    factor = math.sqrt(curvature * dimension)

    def integrand(root_time):
        if root_time == 0:
            return math.sqrt(2 * dimension)
        with np.errstate(over="ignore"):
            return 2 * root_time * factor / math.sqrt(np.expm1(2 * curvature * root_time ** 2))

    value, _error = integrate.quad(integrand, 0, math.inf, epsabs=0, epsrel=1e-12, limit=200)
    return value


def arctan_antiderivative(curvature: float, dimension: float, time: float) -> float:
    """Return sqrt(Kn) arctan(sqrt(exp(2Kt) - 1)) / K, an antiderivative of the integrand above."""
    with np.errstate(over="ignore"):
        growth = float(np.expm1(2 * curvature * time))
    return math.sqrt(curvature * dimension) * math.atan(math.sqrt(growth)) / curvature


def _decay(curvature: float, time: float) -> float:
    if time == 0:
        return 1.0
    return math.exp(-2 * curvature * time)


def _dimension_rate(curvature: float, dimension: float, time: float) -> float:
    if not (math.isfinite(dimension) and math.isfinite(curvature) and curvature > 0 and time > 0):
        return math.nan
    with np.errstate(over="ignore"):
        growth = float(np.expm1(2 * curvature * time))
    return math.sqrt(curvature * dimension / growth)


def _grid(t_grid, curvature: float) -> list:
    grid = default_t_grid(curvature) if t_grid is None else [float(time) for time in t_grid]
    if not grid:
        raise ArgumentError("error: semigroup time grid is empty")
    for time in grid:
        if time < 0:
            raise ArgumentError(f"error: semigroup time must be nonnegative, got t={time}")
    return grid


def _evaluate(graph: WeightedGraph, envelope, grid: list) -> EnvelopeCheck:
    rows = []
    for time in grid:
        lhs, rhs, smoothed = envelope(time)
        scale = max(1.0, float(np.max(np.abs(smoothed))))
        rows.extend(
            EnvelopeRow(
                t=time,
                x=vertex,
                lhs=float(lhs[position]),
                rhs=float(rhs[position]),
                violation=float(lhs[position] - rhs[position]),
                scale=scale,
            )
            for position, vertex in enumerate(graph.vertices)
        )
    return EnvelopeCheck(rows=tuple(rows))
