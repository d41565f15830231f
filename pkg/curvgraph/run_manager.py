"""This module provides the main logic of the command-line tool.

"RunManager" parses and checks the arguments, loads the graph, runs the subcommand and emits
its document. "exit_codes" turns exceptions into the process exit code:
    0: success
    1: "verify" found a violated applicable bound
    2: usage error
    3: input, validation or computation error
"""

import math
import os
import time
from functools import wraps

from curvgraph import config
from curvgraph.arg_parser import STDIO, ArgsChecker, RunConfig, init_argparse
from curvgraph.bounds import full_report
from curvgraph.curvature import format_dimension, graph_curvature, vertex_curvature, vertex_curvatures
from curvgraph.exceptions import CurvGraphError, GraphParseError, UsageError
from curvgraph.forms import local_forms
from curvgraph.graph import (
    WeightedGraph,
    combinatorial_distances,
    dump_graph,
    generate,
    is_connected,
    parse_graph,
    with_measure,
)
from curvgraph.logger import LOGGER
from curvgraph.metrics import resistance_diameter, resistance_distance, resistance_table
from curvgraph.report_handler import Document, FileConverter, Table, emit
from curvgraph.semigroup import (
    build_propagator,
    check_cd_infty_envelope,
    check_cd_n_envelope,
    derivative_bound_report,
    displacement_bound_report,
    random_functions,
)
from curvgraph.table_format import json_number

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2
EXIT_INPUT = 3

CURVATURE_COLUMNS = ("vertex", "n", "value", "s1", "s2")
ENVELOPE_COLUMNS = ("t", "x", "lhs", "rhs", "violation")
CHECK_COLUMNS = ("check", "n", "K", "functions", "seed", "max_violation", "max_scaled_violation", "holds")
BOUND_COLUMNS = ("name", "n", "x", "y", "bound", "measured", "slack", "ratio", "verdict", "reason")
SANDWICH_COLUMNS = ("x", "y", "d", "rho", "sqrt_half_degree_rho", "d_sqrt_two_over_degree", "tight")


def exit_codes(func):
    """Catch exceptions decorator.

    If an exception occurs, "_wrapped" sends an exception message to a logger and returns the exit code
    of its kind. Otherwise, it returns the result of a decorated function.

    Args:
        func: decorated function

    Returns:
        result of the "_wrapped" function
    """

    @wraps(func)
    def _wrapped(*args, **kwargs):
        try:
            res = func(*args, **kwargs)
        except UsageError as error:
            LOGGER.error(error)
            return EXIT_USAGE
        except CurvGraphError as error:
            LOGGER.error(error)
            return EXIT_INPUT
        except OSError as error:
            LOGGER.error("error: %s", error)
            return EXIT_INPUT
        return res

    return _wrapped


def load_graph(run_config: RunConfig, stdin) -> WeightedGraph:
    """Build the graph named by the run configuration.

    Args:
        run_config (RunConfig): checked settings
        stdin: text stream read for the "-" source

    Raises:
        GraphParseError: if the graph file can't be read or parsed

    Returns:
        WeightedGraph, re-measured when "--measure" is given for a document
    """
    if run_config.family is not None:
        name, size = run_config.family
        return generate(name, size, run_config.measure or "unit")
    if run_config.source == STDIO:
        LOGGER.info("reading graph from stdin...")
        text, name = stdin.read(), "stdin"
    else:
        LOGGER.info("reading graph from %s...", run_config.source)
        try:
            with open(run_config.source, encoding="utf-8") as input_file:
                text = input_file.read()
        except OSError as error:
            raise GraphParseError(f"error: can't read graph file '{run_config.source}': {error.strerror}") from error
        name = os.path.splitext(os.path.basename(run_config.source))[0]
    graph = parse_graph(text, name)
    return with_measure(graph, run_config.measure) if run_config.measure else graph


class RunManager:
    """Main class of the command-line tool."""

    def __init__(self, argv, stdin, stdout):
        """Store the arguments and the standard streams.

        Args:
            argv: arguments without the program name, None for "sys.argv[1:]"
            stdin: text stream for the "-" source
            stdout: text stream for the "-" output
        """
        self._argv = argv
        self._stdin = stdin
        self._stdout = stdout
        self.run_config = None
        self._commands = {
            "gen": self._generate,
            "curvature": self._curvature,
            "diam": self._diameters,
            "rho": self._resistance,
            "semigroup-check": self._semigroup,
            "verify": self._verify,
            "report": self._report,
        }

    @exit_codes
    def start_processing(self) -> int:
        """Parse and check the arguments, then run the subcommand.

        All exceptions of the package are caught by the "exit_codes" decorator.

        Returns:
            the exit code
        """
        start = time.perf_counter()
        args = init_argparse(self._argv)
        LOGGER.setLevel("INFO" if args.verbose else "WARNING")
        LOGGER.info("logging system is on...")
        self.run_config = ArgsChecker(args).check()
        code = self._commands[self.run_config.command]()
        LOGGER.info("program was completed in %.2f seconds.", time.perf_counter() - start)
        return code

    def _emit(self, document: Document):
        emit(
            document,
            self.run_config.output_format,
            self.run_config.output,
            self._stdout,
            colorized_mode=self.run_config.colorize,
        )

    def _load(self) -> WeightedGraph:
        return load_graph(self.run_config, self._stdin)

    def _generate(self) -> int:
        name, size = self.run_config.family
        text = dump_graph(generate(name, size, self.run_config.measure or "unit"))
        if self.run_config.output == STDIO:
            self._stdout.write(text)
        else:
            with open(self.run_config.output, "w", encoding="utf-8", newline="") as output_file:
                output_file.write(text)
        return EXIT_OK

    def _curvature(self) -> int:
        graph = self._load()
        vertex = self.run_config.vertex
        if vertex is not None:
            graph.index(vertex)
        results, minima = [], []
        for dimension in self.run_config.dimensions:
            if vertex is None:
                batch = vertex_curvatures(graph, dimension)
                best = min(batch, key=lambda result: result.value)
                minima.append({
                    "n": format_dimension(dimension),
                    "value": json_number(best.value),
                    "vertex": best.vertex,
                })
            else:
                batch = [vertex_curvature(graph, vertex, dimension)]
            results.extend(batch)

        rows = [result.to_row() for result in results]
        document = Document(
            title=f"curvature of {graph.name}",
            tables=[Table("curvature", CURVATURE_COLUMNS, rows)],
            payload={"graph": graph.name, "measure": graph.measure_convention, "curvature": rows},
        )
        if minima:
            document.tables.append(Table("graph curvature", ("n", "value", "vertex"), minima))
            document.payload["graph_curvature"] = minima
        if self.run_config.dump_forms:
            self._add_forms(document, graph, (vertex,) if vertex is not None else graph.vertices)
        self._emit(document)
        return EXIT_OK

    def _add_forms(self, document: Document, graph: WeightedGraph, centers: tuple):
        forms = [local_forms(graph, center) for center in centers]
        entries, linear = [], []
        for form in forms:
            for row, u_vertex in enumerate(form.coords):
                linear.append({"center": form.center, "u": u_vertex, "lap": float(form.lap[row])})
                entries.extend(
                    {
                        "center": form.center,
                        "u": u_vertex,
                        "v": v_vertex,
                        "q2": float(form.q2[row, col]),
                        "g1": float(form.g1[row, col]),
                    }
                    for col, v_vertex in enumerate(form.coords)
                )
        document.tables.append(Table("local forms", ("center", "u", "v", "q2", "g1"), entries))
        document.tables.append(Table("local laplacian", ("center", "u", "lap"), linear))
        document.payload["forms"] = [form.to_dict() for form in forms]

    def _diameters(self) -> int:
        graph = self._load()
        combinatorial = combinatorial_distances(graph).diameter()
        rows = [{"metric": "combinatorial", "value": json_number(combinatorial), "x": None, "y": None}]
        if is_connected(graph):
            table = resistance_table(graph, self.run_config.rho_tol, config.RHO_MAX_ITER, self.run_config.pairs)
            value, pair = resistance_diameter(graph, table=table)
            rows.append({"metric": "resistance", "value": value, "x": pair[0], "y": pair[1]})
        else:
            rows.append({"metric": "resistance", "value": json_number(math.inf), "x": None, "y": None})
        self._emit(Document(
            title=f"diameters of {graph.name}",
            tables=[Table("diameters", ("metric", "value", "x", "y"), rows)],
            payload={"graph": graph.name, "diameters": rows},
        ))
        return EXIT_OK

    def _resistance(self) -> int:
        graph = self._load()
        run_config = self.run_config
        if run_config.x_vertex is not None:
            results = [resistance_distance(graph, run_config.x_vertex, run_config.y_vertex, run_config.rho_tol)]
        else:
            results = resistance_table(graph, run_config.rho_tol, config.RHO_MAX_ITER, run_config.pairs)
        rows = [result.to_row(run_config.with_witness) for result in results]
        columns = ("x", "y", "value", "converged", "iterations") + (("witness",) if run_config.with_witness else ())
        self._emit(Document(
            title=f"resistance distances of {graph.name}",
            tables=[Table("resistance", columns, rows)],
            payload={"graph": graph.name, "rho_tol": run_config.rho_tol, "resistance": rows},
        ))
        return EXIT_OK

    def _semigroup(self) -> int:
        graph = self._load()
        run_config = self.run_config
        propagator = build_propagator(graph)
        samples = random_functions(graph, run_config.functions, run_config.seed).T
        summary, tables = [], []
        for dimension in run_config.dimensions:
            curvature, _vertex = graph_curvature(graph, dimension)
            if math.isinf(curvature):
                LOGGER.info("K = inf at n=%s, every vertex is isolated, skipping the envelope", dimension)
                continue
            if math.isinf(dimension):
                checks = [
                    check_cd_infty_envelope(graph, curvature, sample, propagator=propagator) for sample in samples
                ]
                label = "cd_infinity_envelope"
            else:
                if not curvature > config.CD_TOL:
                    LOGGER.warning("K = %s at n=%s is not positive, skipping the envelope", curvature, dimension)
                    continue
                checks = [
                    check_cd_n_envelope(graph, curvature, dimension, sample, propagator=propagator)
                    for sample in samples
                ]
                label = "cd_n_envelope"
            worst = max(checks, key=lambda check: check.max_scaled_violation)
            summary.append(
                self._check_row(label, dimension, curvature, worst.max_violation, worst.max_scaled_violation),
            )
            tables.append(Table(
                f"{label} n={format_dimension(dimension)} worst function",
                ENVELOPE_COLUMNS,
                [{column: getattr(row, column) for column in ENVELOPE_COLUMNS} for row in worst.rows],
            ))
            summary.extend(self._bound_rows(graph, propagator, samples, dimension, curvature))

        document = Document(
            title=f"semigroup checks of {graph.name}",
            tables=[Table("checks", CHECK_COLUMNS, summary)] + tables,
            payload={"graph": graph.name, "seed": run_config.seed, "checks": summary},
        )
        self._emit(document)
        return EXIT_OK

    def _bound_rows(self, graph: WeightedGraph, propagator, samples, dimension: float, curvature: float) -> list:
        derivative_excess = max(
            max(row.derivative - min(row.bound_infinity, _or_inf(row.bound_dimension)) for row in report)
            for report in (
                derivative_bound_report(graph, curvature, dimension, sample, propagator=propagator)
                for sample in samples
            )
        )
        rows = [self._check_row("derivative_bound", dimension, curvature, derivative_excess, derivative_excess)]
        if curvature > config.CD_TOL:
            displacement_excess = max(
                max(row.displacement - min(row.bound_infinity, _or_inf(row.bound_dimension)) for row in report)
                for report in (
                    displacement_bound_report(graph, curvature, dimension, sample, propagator=propagator)
                    for sample in samples
                )
            )
            rows.append(
                self._check_row("displacement_bound", dimension, curvature, displacement_excess, displacement_excess),
            )
        return rows

    def _check_row(self, label: str, dimension: float, curvature: float, violation: float, scaled: float) -> dict:
        return {
            "check": label,
            "n": format_dimension(dimension),
            "K": json_number(curvature),
            "functions": self.run_config.functions,
            "seed": self.run_config.seed,
            "max_violation": violation,
            "max_scaled_violation": scaled,
            "holds": scaled <= config.ENVELOPE_TOL,
        }

    def _full_report(self):
        graph = self._load()
        run_config = self.run_config
        return full_report(
            graph,
            n_grid=run_config.dimensions,
            seed=run_config.seed,
            tol=run_config.rho_tol,
            pair_budget=run_config.pairs,
            functions=run_config.functions,
            cd_tol=run_config.cd_tol,
        )

    def _verify(self) -> int:
        report = self._full_report()
        rows = [record.to_row() for record in report.records]
        violations = report.violations()
        self._emit(Document(
            title=f"bound verdicts of {report.name}",
            tables=[Table("bounds", BOUND_COLUMNS, rows)],
            payload={"graph": report.name, "bounds": rows, "violations": len(violations)},
        ))
        return EXIT_VIOLATION if violations else EXIT_OK

    def _report(self) -> int:
        report = self._full_report()
        payload = report.to_dict()
        summary = [
            {"key": "graph", "value": report.name},
            {"key": "vertices", "value": report.vertex_count},
            {"key": "measure", "value": report.measure_convention},
            {"key": "max_degree", "value": report.max_degree},
            {"key": "connected", "value": report.connected},
            {"key": "hypercube", "value": report.hypercube},
            {"key": "curvature", "value": json_number(report.curvature)},
            {"key": "curvature_vertex", "value": report.curvature_vertex},
            {"key": "combinatorial_diameter", "value": json_number(report.combinatorial_diameter)},
            {"key": "resistance_diameter", "value": json_number(report.resistance_diameter)},
            {"key": "seed", "value": report.seed},
            {"key": "non_hypercube_sharp", "value": report.non_hypercube_sharp},
        ]
        summary.extend({"key": key, "value": value} for key, value in report.ratios.items())
        summary.extend({"key": "note", "value": note} for note in report.notes)
        document = Document(
            title=f"bounds report of {report.name}",
            tables=[
                Table("summary", ("key", "value"), summary),
                Table("curvature profile", ("n", "value"), payload["curvature"]["profile"]),
                Table("bounds", BOUND_COLUMNS, payload["bounds"]),
                Table("metric comparison", SANDWICH_COLUMNS, payload["sandwich"]),
            ],
            payload=payload,
        )
        self._emit(document)
        if self.run_config.to_html is not None:
            FileConverter().process_document((self.run_config.to_html, document), "TO_HTML")
        return EXIT_OK


def _or_inf(value: float) -> float:
    return math.inf if math.isnan(value) else value
