"""This module computes the resistance metric and checks it against the combinatorial metric.

rho(x, y) = sup { f(y) - f(x) : Gamma(f) <= 1 everywhere }.

The supremum is approached from below: every returned value is attained by a feasible witness,
so it is a certified lower bound on rho.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from curvgraph import config
from curvgraph.exceptions import ArgumentError, DisconnectedError, InvariantFailure
from curvgraph.forms import gamma_from_differences
from curvgraph.graph import WeightedGraph, combinatorial_distances, is_connected, max_degree
from curvgraph.logger import LOGGER

ALL_PAIRS = "all"


@dataclass(frozen=True)
class ResistanceResult:
    """A lower estimate of rho(x, y) with its feasible witness."""

    pair: tuple
    value: float
    witness: tuple
    iterations: int
    converged: bool
    history: tuple = ()

    def to_row(self, with_witness: bool = False) -> dict:
        """Return the JSON row {x, y, value, converged, iterations}, optionally with the witness."""
        row = {
            "x": self.pair[0],
            "y": self.pair[1],
            "value": self.value,
            "converged": self.converged,
            "iterations": self.iterations,
        }
        if with_witness:
            row["witness"] = list(self.witness)
        return row


@dataclass(frozen=True)
class SandwichRow:
    """d(x, y) and rho(x, y) with both sides of the combinatorial/resistance comparison."""

    x: str
    y: str
    distance: int
    rho: float
    upper: float
    lower: float
    tight: bool

    def to_row(self) -> dict:
        """Return a JSON-ready row."""
        return {
            "x": self.x,
            "y": self.y,
            "d": self.distance,
            "rho": self.rho,
            "sqrt_half_degree_rho": self.upper,
            "d_sqrt_two_over_degree": self.lower,
            "tight": self.tight,
        }


def resistance_distance(
        graph: WeightedGraph,
        x_vertex: str,
        y_vertex: str,
        tol: float = config.RHO_TOL,
        max_iter: int = config.RHO_MAX_ITER,
        distances=None,
) -> ResistanceResult:
    """Maximize f(y) over {f : f(x) = 0, Gamma(f) <= 1}.

    The ascent starts from f0 = d(., x) sqrt(2 / D), steps along e_y minus the nonnegative
    combination of active constraint gradients closest to it, with step 1 / sqrt(k), and rescales
    f radially back into the feasible set. It stops when the best value gains less than tol over
    50 consecutive iterations. The best iterate is then polished with SLSQP.

    Args:
        graph (WeightedGraph): the graph
        x_vertex (str): the vertex x
        y_vertex (str): the vertex y
        tol (float): stall threshold on the best value
        max_iter (int): ascent iteration cap
        distances: precomputed DistanceTable, optional

    Raises:
        ArgumentError: if tol or max_iter is not positive
        DisconnectedError: if x and y lie in different components

    Returns:
        ResistanceResult
    """
    if tol <= 0 or max_iter < 1:
        raise ArgumentError(f"error: rho solver needs tol > 0 and max_iter >= 1, got {tol} and {max_iter}")
    x_index, y_index = graph.index(x_vertex), graph.index(y_vertex)
    if x_index == y_index:
        return ResistanceResult((x_vertex, y_vertex), 0.0, (0.0,) * len(graph), 0, True, (0.0,))
    distances = distances or combinatorial_distances(graph)
    if math.isinf(distances.matrix[x_index, y_index]):
        raise DisconnectedError(f"error: infinite resistance distance between '{x_vertex}' and '{y_vertex}'")

    LOGGER.debug("solving rho(%s, %s)...", x_vertex, y_vertex)
    solver = _ResistanceSolver(graph, x_index, y_index, distances.matrix[x_index])
    witness, history, iterations, converged = solver.ascend(tol=tol, max_iter=max_iter)
    polished, polish_iterations, polish_success = solver.polish(witness)
    if polished[y_index] > witness[y_index]:
        witness = polished
        history.append(float(witness[y_index]))
    converged = converged or polish_success
    if not converged:
        LOGGER.warning("rho(%s, %s) didn't converge within %s iterations", x_vertex, y_vertex, max_iter)
    return ResistanceResult(
        pair=(x_vertex, y_vertex),
        value=float(witness[y_index] - witness[x_index]),
        witness=tuple(witness.tolist()),
        iterations=iterations + polish_iterations,
        converged=converged,
        history=tuple(history),
    )


def resistance_table(
        graph: WeightedGraph,
        tol: float = config.RHO_TOL,
        max_iter: int = config.RHO_MAX_ITER,
        pair_budget=None,
) -> list:
    """Solve rho over unordered pairs of a connected graph, concurrently.

    Args:
        graph (WeightedGraph): the graph
        tol (float): rho solver tolerance
        max_iter (int): rho solver iteration cap
        pair_budget: "all", a positive pair count, or None for "all" below 40 vertices and 64 pairs above

    Raises:
        DisconnectedError: if the graph is disconnected

    Returns:
        a list of ResistanceResult, pairs in index order
    """
    if not is_connected(graph):
        raise DisconnectedError(f"error: graph '{graph.name}' is disconnected, its resistance diameter is infinite")
    distances = combinatorial_distances(graph)
    pairs = select_pairs(graph, distances, pair_budget)
    LOGGER.info("solving rho for %s pairs of %s...", len(pairs), graph.name)
    with ThreadPoolExecutor(max_workers=config.worker_count()) as executor:
        executor_pool = [
            executor.submit(resistance_distance, graph, x_vertex, y_vertex, tol, max_iter, distances)
            for x_vertex, y_vertex in pairs
        ]
        return [executor_result.result() for executor_result in executor_pool]


def select_pairs(graph: WeightedGraph, distances, pair_budget=None) -> list:
    """Return the unordered pairs to evaluate, in index order.

    A numeric budget keeps the pairs of largest combinatorial distance.

    Raises:
        ArgumentError: if the budget is neither "all" nor a positive integer

    Returns:
        a list of (x, y) vertex pairs
    """
    size = len(graph)
    pairs = [(row, col) for row in range(size) for col in range(row + 1, size)]
    if pair_budget is None:
        pair_budget = ALL_PAIRS if size < config.PAIR_BUDGET_THRESHOLD else config.DEFAULT_PAIR_BUDGET
    if pair_budget != ALL_PAIRS:
        if isinstance(pair_budget, bool) or not isinstance(pair_budget, int) or pair_budget < 1:
            raise ArgumentError(f"error: pair budget must be 'all' or a positive integer, got {pair_budget!r}")
        ranked = sorted(pairs, key=lambda pair: (-distances.matrix[pair], pair))
        pairs = sorted(ranked[:pair_budget])
    return [(graph.vertices[row], graph.vertices[col]) for row, col in pairs]


def resistance_diameter(
        graph: WeightedGraph,
        tol: float = config.RHO_TOL,
        max_iter: int = config.RHO_MAX_ITER,
        pair_budget=None,
        table=None,
):
    """Return diam_rho(G) and the first pair attaining it.

    Args:
        graph (WeightedGraph): a connected graph
        tol (float): rho solver tolerance
        max_iter (int): rho solver iteration cap
        pair_budget: see "resistance_table"
        table: precomputed "resistance_table" result, optional

    Returns:
        tuple (value, (x, y))
    """
    table = table if table is not None else resistance_table(graph, tol, max_iter, pair_budget)
    if not table:
        return 0.0, (graph.vertices[0], graph.vertices[0])
    best = table[0]
    for result in table[1:]:
        if result.value > best.value:
            best = result
    return best.value, best.pair


def metric_sandwich_report(
        graph: WeightedGraph,
        tol: float = config.RHO_TOL,
        max_iter: int = config.RHO_MAX_ITER,
        pair_budget=None,
        table=None,
) -> list:
    """Check d(x, y) <= sqrt(D / 2) rho(x, y) and rho(x, y) >= d(x, y) sqrt(2 / D) on evaluated pairs.

    Args:
        graph (WeightedGraph): a connected graph
        tol (float): rho solver tolerance, the check allows 1e-6 + 2 tol
        max_iter (int): rho solver iteration cap
        pair_budget: see "resistance_table"
        table: precomputed "resistance_table" result, optional

    Raises:
        InvariantFailure: naming the first pair that breaks either inequality

    Returns:
        a list of SandwichRow
    """
    table = table if table is not None else resistance_table(graph, tol, max_iter, pair_budget)
    distances = combinatorial_distances(graph)
    top_degree = max_degree(graph)
    allowance = config.BOUND_TOL + 2 * tol
    rows = []
    for result in table:
        x_vertex, y_vertex = result.pair
        distance = distances.distance(x_vertex, y_vertex)
        upper = math.sqrt(top_degree / 2) * result.value
        lower = distance * math.sqrt(2 / top_degree)
        if distance > upper + allowance or result.value < lower - allowance:
            raise InvariantFailure(
                f"error: combinatorial/resistance comparison fails for pair ({x_vertex}, {y_vertex}): "
                f"d={distance}, rho={result.value}",
            )
        rows.append(SandwichRow(
            x=x_vertex,
            y=y_vertex,
            distance=distance,
            rho=result.value,
            upper=upper,
            lower=lower,
            tight=abs(upper - distance) <= allowance,
        ))
    return rows


def gamma_jacobian(graph: WeightedGraph, function: np.ndarray) -> np.ndarray:
    """Return the matrix whose row v is the gradient of f -> Gamma(f)(v)."""
    differences = function[None, :] - function[:, None]
    jacobian = graph.weights * differences / graph.measure[:, None]
    np.fill_diagonal(jacobian, -jacobian.sum(axis=1))
    return jacobian


def rescale_to_feasible(graph: WeightedGraph, function: np.ndarray) -> np.ndarray:
    """Return f / max(1, sqrt(max Gamma(f))), feasible since Gamma is quadratic."""
    peak = float(np.max(gamma_from_differences(graph, function)))
    return function / math.sqrt(peak) if peak > 1 else function


class _ResistanceSolver:
    """Ascent and polish steps for one (x, y) pair, restricted to the component of x."""

    def __init__(self, graph: WeightedGraph, x_index: int, y_index: int, distances_from_x: np.ndarray):
        self._graph = graph
        self._x_index = x_index
        self._y_index = y_index
        self._component = np.isfinite(distances_from_x)
        self._free = np.flatnonzero(self._component & (np.arange(len(graph)) != x_index))
        self._start = np.where(self._component, distances_from_x, 0.0) * math.sqrt(2 / max_degree(graph))
        self._target = np.zeros(len(graph))
        self._target[y_index] = 1.0

    def ascend(self, tol: float, max_iter: int):
        """Run the radial-rescaling ascent, return (best f, best history, iterations, converged)."""
        function = self._start.copy()
        best_function = function.copy()
        best = anchor = float(function[self._y_index])
        history = [best]
        stall = 0
        converged = False
        iteration = 0
        for iteration in range(1, max_iter + 1):
            direction = self._direction(function)
            if np.linalg.norm(direction) <= 1e-12:
                converged = True
                break
            function = rescale_to_feasible(self._graph, function + config.RHO_STEP / math.sqrt(iteration) * direction)
            if function[self._y_index] > best:
                best = float(function[self._y_index])
                best_function = function.copy()
            history.append(best)
            if best - anchor >= tol:
                anchor = best
                stall = 0
            else:
                stall += 1
            if stall >= config.RHO_STALL_WINDOW:
                converged = True
                break
        return best_function, history, iteration, converged

    def polish(self, function: np.ndarray):
        """Refine a feasible f with SLSQP, return (rescaled f, iterations, success)."""
        component = np.flatnonzero(self._component)
        target_position = int(np.searchsorted(self._free, self._y_index))

        def expand(free_values):
            full = np.zeros(len(self._graph))
            full[self._free] = free_values
            return full

        def objective(free_values):
            return -free_values[target_position]

        def objective_gradient(free_values):
            gradient = np.zeros(len(free_values))
            gradient[target_position] = -1.0
            return gradient

        def slack(free_values):
            return 1 - gamma_from_differences(self._graph, expand(free_values))[component]

        def slack_jacobian(free_values):
            return -gamma_jacobian(self._graph, expand(free_values))[np.ix_(component, self._free)]

        outcome = optimize.minimize(
            objective,
            function[self._free],
            jac=objective_gradient,
            method="SLSQP",
            constraints=[{"type": "ineq", "fun": slack, "jac": slack_jacobian}],
            options={"ftol": 1e-12, "maxiter": 500},
        )
        return rescale_to_feasible(self._graph, expand(outcome.x)), int(outcome.nit), bool(outcome.success)

    def _direction(self, function: np.ndarray) -> np.ndarray:
        values = gamma_from_differences(self._graph, function)
        active = np.flatnonzero(self._component & (values > 1 - config.RHO_ACTIVE_SLACK))
        target = self._target[self._free]
        direction = np.zeros(len(self._graph))
        if not active.size:
            direction[self._free] = target
            return direction
        gradients = gamma_jacobian(self._graph, function)[np.ix_(active, self._free)]
        multipliers, _residual = optimize.nnls(gradients.T, target)
        direction[self._free] = target - gradients.T @ multipliers
        return direction
