"""This module turns curvature, degrees and diameters into verdicts on the curvature-diameter bounds.

Every bound is reported as a BoundRecord with one of the verdicts HOLDS, SHARP, VIOLATED and
NOT-APPLICABLE; the last one always names the hypothesis that fails.
"""

import math
from dataclasses import dataclass, field

from curvgraph import config
from curvgraph.curvature import format_dimension, graph_curvature
from curvgraph.exceptions import ArgumentError, InvariantFailure
from curvgraph.graph import (
    UNREACHABLE,
    WeightedGraph,
    combinatorial_diameter,
    degree,
    is_connected,
    is_hypercube,
    max_degree,
)
from curvgraph.logger import LOGGER
from curvgraph.metrics import metric_sandwich_report, resistance_diameter, resistance_table
from curvgraph.semigroup import build_propagator, check_cd_infty_envelope, check_cd_n_envelope, random_functions
from curvgraph.table_format import json_number

HOLDS = "HOLDS"
SHARP = "SHARP"
VIOLATED = "VIOLATED"
NOT_APPLICABLE = "NOT-APPLICABLE"

DISCONNECTED = "disconnected"

DEGREE_DIAMETER = "diameter_2D_over_K"
RHO_DEGREE = "rho_degree_over_K"
RHO_DIAMETER = "rho_diameter_pi_sqrt_n_over_K"
HORN = "horn_2pi_sqrt_6Dn_over_K"
IMPROVED = "improved_pi_sqrt_Dn_over_2K"
FATHI_SHU = "fathi_shu_2sqrt2_degree_over_K"
METRIC_CHAIN = "diameter_sqrt_half_D_rho"
CD_INFINITY_ENVELOPE = "cd_infinity_envelope"
CD_N_ENVELOPE = "cd_n_envelope"


@dataclass(frozen=True)
class BoundRecord:
    """A bound against the quantity it controls."""

    name: str
    bound: float
    measured: float
    verdict: str
    reason: str = ""
    pair: tuple = None
    n: float = math.inf
    ratio: float = math.nan

    @property
    def slack(self) -> float:
        """bound - measured, nan when not applicable."""
        if self.verdict == NOT_APPLICABLE:
            return math.nan
        return self.bound - self.measured

    @property
    def sharp(self) -> bool:
        """True if the bound is attained within 1e-6 * max(1, bound)."""
        return self.verdict == SHARP

    def to_row(self) -> dict:
        """Return a JSON-ready row."""
        return {
            "name": self.name,
            "n": format_dimension(self.n),
            "x": self.pair[0] if self.pair else None,
            "y": self.pair[1] if self.pair else None,
            "bound": json_number(self.bound),
            "measured": json_number(self.measured),
            "slack": json_number(self.slack),
            "ratio": json_number(self.ratio),
            "verdict": self.verdict,
            "reason": self.reason,
        }


@dataclass(frozen=True)
class LiteratureComparison:
    """Bound rows of one dimension parameter with the two formula-level improvement ratios."""

    n: float
    records: tuple
    horn_ratio: float
    fathi_shu_ratio: float


@dataclass(frozen=True)
class BoundsReport:
    """Per-graph record of curvature, diameters, bound verdicts and sharpness flags."""

    name: str
    vertex_count: int
    measure_convention: str
    max_degree: float
    connected: bool
    curvature: float
    curvature_vertex: str
    profile: tuple
    combinatorial_diameter: float
    resistance_diameter: float
    resistance_pair: tuple
    records: tuple
    sandwich: tuple
    ratios: dict
    seed: int
    hypercube: bool
    non_hypercube_sharp: bool
    rho_tol: float = config.RHO_TOL
    notes: tuple = field(default_factory=tuple)

    def violations(self) -> list:
        """Return the records with verdict VIOLATED."""
        return [record for record in self.records if record.verdict == VIOLATED]

    def to_dict(self) -> dict:
        """Return a JSON-ready representation."""
        return {
            "graph": {
                "name": self.name,
                "vertices": self.vertex_count,
                "measure": self.measure_convention,
                "max_degree": self.max_degree,
                "connected": self.connected,
                "hypercube": self.hypercube,
            },
            "curvature": {
                "value": json_number(self.curvature),
                "vertex": self.curvature_vertex,
                "profile": [
                    {"n": format_dimension(dimension), "value": json_number(value)} for dimension, value in self.profile
                ],
            },
            "diameters": {
                "combinatorial": json_number(self.combinatorial_diameter),
                "resistance": json_number(self.resistance_diameter),
                "resistance_pair": list(self.resistance_pair) if self.resistance_pair else None,
            },
            "bounds": [record.to_row() for record in self.records],
            "sandwich": [row.to_row() for row in self.sandwich],
            "ratios": {key: json_number(value) for key, value in self.ratios.items()},
            "seed": self.seed,
            "rho_tol": self.rho_tol,
            "non_hypercube_sharp": self.non_hypercube_sharp,
            "notes": list(self.notes),
        }


def degree_diameter_bound(top_degree: float, curvature: float) -> float:
    """Return 2 D / K."""
    _check_curvature(curvature)
    return 2 * top_degree / curvature


def rho_degree_bound(x_degree: float, y_degree: float, curvature: float) -> float:
    """Return (sqrt(2 Deg(x)) + sqrt(2 Deg(y))) / K."""
    _check_curvature(curvature)
    return (math.sqrt(2 * x_degree) + math.sqrt(2 * y_degree)) / curvature


def rho_diameter_bound(dimension: float, curvature: float) -> float:
    """Return pi sqrt(n / K)."""
    _check_curvature(curvature)
    return math.pi * math.sqrt(dimension / curvature)


def horn_bound(top_degree: float, dimension: float, curvature: float) -> float:
    """Return 2 pi sqrt(6 D n / K)."""
    _check_curvature(curvature)
    return 2 * math.pi * math.sqrt(6 * top_degree * dimension / curvature)


def improved_bound(top_degree: float, dimension: float, curvature: float) -> float:
    """Return pi sqrt(D n / (2 K))."""
    _check_curvature(curvature)
    return math.pi * math.sqrt(top_degree * dimension / (2 * curvature))


def fathi_shu_bound(x_degree: float, y_degree: float, curvature: float) -> float:
    """Return 2 sqrt(2) (sqrt(Deg(x)) + sqrt(Deg(y))) / K."""
    _check_curvature(curvature)
    return 2 * math.sqrt(2) * (math.sqrt(x_degree) + math.sqrt(y_degree)) / curvature


def judge(name: str, bound: float, measured: float, tolerance: float = config.BOUND_TOL, **details) -> BoundRecord:
    """Compare a bound with a measured value.

    Args:
        name (str): record name
        bound (float): the bound value
        measured (float): the quantity it controls
        tolerance (float): allowed negative slack
        details: extra BoundRecord fields

    Returns:
        BoundRecord, VIOLATED below -tolerance, SHARP within 1e-6 * max(1, bound), HOLDS otherwise
    """
    slack = bound - measured
    if slack < -tolerance:
        verdict = VIOLATED
        LOGGER.warning("bound %s is violated: bound %s, measured %s", name, bound, measured)
    elif abs(slack) <= config.SHARP_TOL * max(1.0, abs(bound)):
        verdict = SHARP
    else:
        verdict = HOLDS
    return BoundRecord(name=name, bound=float(bound), measured=float(measured), verdict=verdict, **details)


def not_applicable(name: str, reason: str, **details) -> BoundRecord:
    """Return a NOT-APPLICABLE record naming the failed hypothesis."""
    return BoundRecord(name=name, bound=math.nan, measured=math.nan, verdict=NOT_APPLICABLE, reason=reason, **details)


def bonnet_myers_infty(graph: WeightedGraph, curvature: float = None, cd_tol: float = config.CD_TOL) -> BoundRecord:
    """Check diam_d(G) <= 2 D / K_inf.

    Args:
        graph (WeightedGraph): the graph
        curvature (float): precomputed K_inf, optional
        cd_tol (float): K counts as positive above this threshold

    Returns:
        BoundRecord
    """
    if not is_connected(graph):
        return not_applicable(DEGREE_DIAMETER, DISCONNECTED)
    curvature = _curvature(graph, math.inf, curvature)
    if not curvature > cd_tol:
        return not_applicable(DEGREE_DIAMETER, _nonpositive(curvature))
    bound = degree_diameter_bound(max_degree(graph), curvature)
    return judge(DEGREE_DIAMETER, bound, combinatorial_diameter(graph))


def distance_bound_check(
        graph: WeightedGraph,
        curvature: float = None,
        table=None,
        tol: float = config.RHO_TOL,
        max_iter: int = config.RHO_MAX_ITER,
        pair_budget=None,
        cd_tol: float = config.CD_TOL,
) -> list:
    """Check rho(x, y) <= (sqrt(2 Deg(x)) + sqrt(2 Deg(y))) / K_inf on every evaluated pair.

    Args:
        graph (WeightedGraph): the graph
        curvature (float): precomputed K_inf, optional
        table: precomputed "resistance_table" result, optional
        tol (float): rho solver tolerance, the check allows 1e-6 + 2 tol
        max_iter (int): rho solver iteration cap
        pair_budget: see "resistance_table"
        cd_tol (float): K counts as positive above this threshold

    Returns:
        a list of BoundRecord, one NOT-APPLICABLE record if a hypothesis fails
    """
    resistance = (table, tol, max_iter, pair_budget)
    return _pairwise(graph, RHO_DEGREE, rho_degree_bound, curvature, resistance, cd_tol)


def bonnet_myers_n(
        graph: WeightedGraph,
        dimension: float,
        curvature: float = None,
        table=None,
        tol: float = config.RHO_TOL,
        max_iter: int = config.RHO_MAX_ITER,
        pair_budget=None,
        cd_tol: float = config.CD_TOL,
) -> BoundRecord:
    """Check diam_rho(G) <= pi sqrt(n / K_n); the record also stores bound / measured.

    Args:
        graph (WeightedGraph): the graph
        dimension (float): n
        curvature (float): precomputed K_n, optional
        table: precomputed "resistance_table" result, optional
        tol (float): rho solver tolerance
        max_iter (int): rho solver iteration cap
        pair_budget: see "resistance_table"
        cd_tol (float): K counts as positive above this threshold

    Returns:
        BoundRecord
    """
    if not math.isfinite(dimension):
        return not_applicable(RHO_DIAMETER, "n = inf", n=dimension)
    if not is_connected(graph):
        return not_applicable(RHO_DIAMETER, DISCONNECTED, n=dimension)
    curvature = _curvature(graph, dimension, curvature)
    if not curvature > cd_tol:
        return not_applicable(RHO_DIAMETER, _nonpositive(curvature), n=dimension)
    table = table if table is not None else resistance_table(graph, tol, max_iter, pair_budget)
    measured, _pair = resistance_diameter(graph, table=table)
    bound = rho_diameter_bound(dimension, curvature)
    ratio = bound / measured if measured > 0 else math.inf
    return judge(RHO_DIAMETER, bound, measured, config.BOUND_TOL + 2 * tol, n=dimension, ratio=ratio)


def literature_comparison(
        graph: WeightedGraph,
        dimension: float,
        curvature: float = None,
        curvature_infinity: float = None,
        table=None,
        tol: float = config.RHO_TOL,
        max_iter: int = config.RHO_MAX_ITER,
        pair_budget=None,
        cd_tol: float = config.CD_TOL,
) -> LiteratureComparison:
    """Compare the two diameter bounds of dimension n and the two pairwise rho bounds.

    The Horn and improved rows use K_n and control diam_d; the pairwise rows use K_inf and control rho.
    The ratios are evaluated on the graph's own D, n and K where these are positive and finite,
    on 1 otherwise; they don't depend on the inputs.

    Args:
        graph (WeightedGraph): the graph
        dimension (float): finite n
        curvature (float): precomputed K_n, optional
        curvature_infinity (float): precomputed K_inf, optional
        table: precomputed "resistance_table" result, optional
        tol (float): rho solver tolerance
        max_iter (int): rho solver iteration cap
        pair_budget: see "resistance_table"
        cd_tol (float): K counts as positive above this threshold

    Returns:
        LiteratureComparison
    """
    connected = is_connected(graph)
    if connected and table is None:
        table = resistance_table(graph, tol, max_iter, pair_budget)
    top_degree = max_degree(graph)
    if math.isfinite(dimension) and connected:
        curvature = _curvature(graph, dimension, curvature)

    records = []
    for name, formula in ((HORN, horn_bound), (IMPROVED, improved_bound)):
        if not math.isfinite(dimension):
            records.append(not_applicable(name, "n = inf", n=dimension))
        elif not connected:
            records.append(not_applicable(name, DISCONNECTED, n=dimension))
        elif not curvature > cd_tol:
            records.append(not_applicable(name, _nonpositive(curvature), n=dimension))
        else:
            bound = formula(top_degree, dimension, curvature)
            records.append(judge(name, bound, combinatorial_diameter(graph), n=dimension))

    resistance = (table, tol, max_iter, pair_budget)
    records.extend(_pairwise(graph, RHO_DEGREE, rho_degree_bound, curvature_infinity, resistance, cd_tol))
    records.extend(_pairwise(graph, FATHI_SHU, fathi_shu_bound, curvature_infinity, resistance, cd_tol))

    ratio_inputs = (
        top_degree if top_degree > 0 else 1.0,
        dimension if math.isfinite(dimension) else 1.0,
        curvature if curvature is not None and cd_tol < curvature < math.inf else 1.0,
    )
    return LiteratureComparison(
        n=dimension,
        records=tuple(records),
        horn_ratio=horn_bound(*ratio_inputs) / improved_bound(*ratio_inputs),
        fathi_shu_ratio=fathi_shu_bound(ratio_inputs[0], ratio_inputs[0], ratio_inputs[2])
        / rho_degree_bound(ratio_inputs[0], ratio_inputs[0], ratio_inputs[2]),
    )


def full_report(
        graph: WeightedGraph,
        n_grid=None,
        seed: int = config.DEFAULT_SEED,
        tol: float = config.RHO_TOL,
        max_iter: int = config.RHO_MAX_ITER,
        pair_budget=None,
        functions: int = config.DEFAULT_RANDOM_FUNCTIONS,
        cd_tol: float = config.CD_TOL,
) -> BoundsReport:
    """Run every bound, the metric comparison and the semigroup envelopes on one graph.

    The resistance table is solved once and shared by all rho-based sections.

    Args:
        graph (WeightedGraph): the graph
        n_grid: dimension parameters, "config.default_n_grid" when omitted
        seed (int): seed of the random test functions
        tol (float): rho solver tolerance
        max_iter (int): rho solver iteration cap
        pair_budget: see "resistance_table"
        functions (int): number of random test functions per envelope
        cd_tol (float): K counts as positive above this threshold

    Returns:
        BoundsReport
    """
    LOGGER.info("assembling bounds report of %s...", graph.name)
    n_grid = sorted(set(n_grid)) if n_grid is not None else config.default_n_grid(len(graph))
    connected = is_connected(graph)
    curvature, curvature_vertex = graph_curvature(graph, math.inf)
    profile = tuple(
        (dimension, curvature if math.isinf(dimension) else graph_curvature(graph, dimension)[0])
        for dimension in n_grid
    )
    curvatures = dict(profile)
    curvatures[math.inf] = curvature

    table = resistance_table(graph, tol, max_iter, pair_budget) if connected else None
    if connected:
        rho_diameter, rho_pair = resistance_diameter(graph, table=table)
    else:
        rho_diameter, rho_pair = UNREACHABLE, None
    resistance = (table, tol, max_iter, pair_budget)

    records = [bonnet_myers_infty(graph, curvature, cd_tol)]
    records.extend(_pairwise(graph, RHO_DEGREE, rho_degree_bound, curvature, resistance, cd_tol))
    records.extend(_pairwise(graph, FATHI_SHU, fathi_shu_bound, curvature, resistance, cd_tol))
    ratios = {
        "horn_over_improved": horn_bound(1.0, 1.0, 1.0) / improved_bound(1.0, 1.0, 1.0),
        "fathi_shu_over_distance_bound": fathi_shu_bound(1.0, 1.0, 1.0) / rho_degree_bound(1.0, 1.0, 1.0),
    }
    for dimension in n_grid:
        if math.isinf(dimension):
            continue
        records.append(bonnet_myers_n(graph, dimension, curvatures[dimension], *resistance, cd_tol=cd_tol))
        comparison = literature_comparison(
            graph, dimension, curvatures[dimension], curvature, *resistance, cd_tol=cd_tol,
        )
        records.extend(comparison.records[:2])
        ratios = {
            "horn_over_improved": comparison.horn_ratio,
            "fathi_shu_over_distance_bound": comparison.fathi_shu_ratio,
        }

    sandwich = ()
    if connected:
        sandwich, chain_record = _metric_chain(graph, table, tol, rho_diameter)
        records.append(chain_record)
    records.extend(_envelopes(graph, curvatures, seed, functions, cd_tol))

    hypercube = is_hypercube(graph)
    non_hypercube_sharp = records[0].sharp and not hypercube
    notes = []
    if non_hypercube_sharp:
        LOGGER.warning("%s is not a hypercube but attains the diameter bound 2D/K", graph.name)
        notes.append(f"{graph.name} is not a hypercube but attains diam_d = 2D/K")
    if not connected:
        notes.append("the graph is disconnected, distance bounds don't apply")
    if any(record.verdict == VIOLATED for record in records):
        notes.append("at least one applicable bound is violated")

    return BoundsReport(
        name=graph.name,
        vertex_count=len(graph),
        measure_convention=graph.measure_convention,
        max_degree=max_degree(graph),
        connected=connected,
        curvature=curvature,
        curvature_vertex=curvature_vertex,
        profile=profile,
        combinatorial_diameter=combinatorial_diameter(graph),
        resistance_diameter=rho_diameter,
        resistance_pair=rho_pair,
        records=tuple(records),
        sandwich=tuple(sandwich),
        ratios=ratios,
        seed=seed,
        hypercube=hypercube,
        non_hypercube_sharp=non_hypercube_sharp,
        rho_tol=tol,
        notes=tuple(notes),
    )


def _pairwise(graph: WeightedGraph, name: str, formula, curvature, resistance: tuple, cd_tol: float) -> list:
    table, tol, max_iter, pair_budget = resistance
    if not is_connected(graph):
        return [not_applicable(name, DISCONNECTED)]
    curvature = _curvature(graph, math.inf, curvature)
    if not curvature > cd_tol:
        return [not_applicable(name, _nonpositive(curvature))]
    table = table if table is not None else resistance_table(graph, tol, max_iter, pair_budget)
    allowance = config.BOUND_TOL + 2 * tol
    return [
        judge(
            name,
            formula(degree(graph, result.pair[0]), degree(graph, result.pair[1]), curvature),
            result.value,
            allowance,
            pair=result.pair,
        )
        for result in table
    ]


def _metric_chain(graph: WeightedGraph, table, tol: float, rho_diameter: float):
    try:
        sandwich = metric_sandwich_report(graph, tol=tol, table=table)
    except InvariantFailure as error:
        return (), BoundRecord(METRIC_CHAIN, math.nan, math.nan, VIOLATED, reason=str(error))
    upper = math.sqrt(max_degree(graph) / 2) * rho_diameter
    return sandwich, judge(METRIC_CHAIN, upper, combinatorial_diameter(graph), config.BOUND_TOL + 2 * tol)


def _envelopes(graph: WeightedGraph, curvatures: dict, seed: int, count: int, cd_tol: float) -> list:
    curvature = curvatures[math.inf]
    if math.isinf(curvature):
        return [not_applicable(CD_INFINITY_ENVELOPE, "K = inf")]
    propagator = build_propagator(graph)
    samples = random_functions(graph, count, seed)
    worst = max(
        (check_cd_infty_envelope(graph, curvature, sample, propagator=propagator).max_scaled_violation
         for sample in samples.T),
        default=0.0,
    )
    records = [_envelope_record(CD_INFINITY_ENVELOPE, worst, math.inf, seed)]
    for dimension, value in sorted(curvatures.items()):
        if math.isinf(dimension):
            continue
        if not value > cd_tol:
            records.append(not_applicable(CD_N_ENVELOPE, _nonpositive(value), n=dimension))
            continue
        worst = max(
            (check_cd_n_envelope(graph, value, dimension, sample, propagator=propagator).max_scaled_violation
             for sample in samples.T),
            default=0.0,
        )
        records.append(_envelope_record(CD_N_ENVELOPE, worst, dimension, seed))
    return records


def _envelope_record(name: str, worst: float, dimension: float, seed: int) -> BoundRecord:
    verdict = VIOLATED if worst > config.ENVELOPE_TOL else HOLDS
    if verdict == VIOLATED:
        LOGGER.warning("semigroup inequality %s fails at n=%s with scaled violation %s", name, dimension, worst)
    return BoundRecord(
        name=name,
        bound=0.0,
        measured=float(worst),
        verdict=verdict,
        reason=f"seed {seed}",
        n=dimension,
    )


def _curvature(graph: WeightedGraph, dimension: float, curvature) -> float:
    if curvature is None:
        curvature, _vertex = graph_curvature(graph, dimension)
    return curvature


def _nonpositive(curvature: float) -> str:
    return f"K = {curvature:.6g} is not positive"


def _check_curvature(curvature: float):
    if not curvature > 0:
        raise ArgumentError(f"error: curvature bound K must be positive, got {curvature}")

