"""This module provides "argparse" initialization and checkers to its parameters.

"ArgsChecker" calls the next classes:
    SourceChecker: checks exactly one graph source is given
    FamilyChecker: checks the "--family NAME:SIZE" value
    DimensionChecker: checks every "--n" value is in (0, inf]
    ToleranceChecker: checks "--rho-tol" and "--cd-tol" are finite and positive
    SeedChecker: checks the seed is a 64-bit unsigned integer
    PairsChecker: checks "--pairs" is "all" or a positive integer
    CountChecker: checks "--functions" is a positive integer
    VertexPairChecker: checks "--x" and "--y" come together
    PathsForConversionsChecker: checks the "--to-html" directory exists
and returns a "RunConfig".
"""

import argparse
import math
import os
from dataclasses import dataclass

from curvgraph import __version__, config
from curvgraph.exceptions import UsageError
from curvgraph.graph import FAMILIES, MEASURE_CONVENTIONS
from curvgraph.graph_checkers import Checker
from curvgraph.logger import LOGGER
from curvgraph.report_handler import FORMATS

COMMANDS = ("gen", "curvature", "diam", "rho", "semigroup-check", "verify", "report")
STDIO = "-"
MAX_SEED = 2 ** 64 - 1


@dataclass(frozen=True)
class RunConfig:
    """Validated settings of one command-line run."""

    command: str
    source: str = None
    family: tuple = None
    measure: str = None
    dimensions: tuple = (math.inf,)
    rho_tol: float = config.RHO_TOL
    cd_tol: float = config.CD_TOL
    seed: int = config.DEFAULT_SEED
    output_format: str = "table"
    output: str = STDIO
    with_witness: bool = False
    dump_forms: bool = False
    pairs: object = None
    vertex: str = None
    x_vertex: str = None
    y_vertex: str = None
    functions: int = config.DEFAULT_RANDOM_FUNCTIONS
    to_html: str = None
    colorize: bool = False


class SourceChecker(Checker):
    """Check that exactly one graph source is given."""

    def __init__(self, command: str, source: str, graph_path: str, family: str):
        """Expect the three mutually exclusive sources.

        Args:
            command (str): the subcommand
            source (str): positional path or "-"
            graph_path (str): the "--graph" value
            family (str): the "--family" value
        """
        self.command = command
        self.sources = {"source": source, "--graph": graph_path, "--family": family}

    def check(self) -> bool:
        """Check the number of sources.

        Raises:
            UsageError: if no source or more than one is given

        Returns:
            True if check is passed
        """
        if self.command == "gen":
            return True
        LOGGER.info("checking graph source...")
        given = [name for name, value in self.sources.items() if value is not None]
        if not given:
            raise UsageError("error: a graph source is required: a path, '-', --graph PATH or --family NAME:SIZE")
        if len(given) > 1:
            raise UsageError(f"error: exactly one graph source is allowed, got {' and '.join(given)}")
        return True


class FamilyChecker(Checker):
    """Check a family specification for correctness."""

    def __init__(self, family: str, size: str = None, flag: str = "--family"):
        """Expect "NAME:SIZE", or NAME and SIZE separately.

        Args:
            family (str): family name, optionally followed by ":SIZE"
            size (str): size when given separately
            flag (str): flag named in error messages
        """
        self.family = family
        self.size = size
        self.flag = flag
        self.value = None

    def check(self) -> bool:
        """Split and check the specification, the result is stored in "self.value".

        Raises:
            UsageError: if the family is unknown or the size is not a positive integer

        Returns:
            True if check is passed
        """
        if self.family is None:
            return True
        LOGGER.info("checking family...")
        name, size = self.family, self.size
        if size is None:
            name, separator, size = self.family.partition(":")
            if not separator:
                raise UsageError(f"error: {self.flag} expects NAME:SIZE, got '{self.family}'")
        if name not in FAMILIES:
            raise UsageError(f"error: {self.flag}: unknown family '{name}', expected one of {', '.join(FAMILIES)}")
        try:
            size = int(size)
        except ValueError as error:
            raise UsageError(f"error: {self.flag}: size must be an integer, got '{size}'") from error
        if size < 1:
            raise UsageError(f"error: {self.flag}: size must be at least 1, got {size}")
        self.value = (name, size)
        return True


class DimensionChecker(Checker):
    """Check dimension parameters."""

    def __init__(self, dimensions: list):
        """Expect the raw "--n" values, "inf" accepted.

        Args:
            dimensions (list): values to check, None when the flag is absent
        """
        self.dimensions = dimensions
        self.value = None

    def check(self) -> bool:
        """Parse every value, the sorted unique result is stored in "self.value".

        Raises:
            UsageError: if a value is not a number in (0, inf]

        Returns:
            True if check is passed
        """
        if self.dimensions is None:
            return True
        LOGGER.info("checking dimension parameters...")
        parsed = set()
        for raw_value in self.dimensions:
            try:
                dimension = float(raw_value)
            except ValueError as error:
                raise UsageError(f"error: --n must be a number or 'inf', got '{raw_value}'") from error
            if math.isnan(dimension) or dimension <= 0:
                raise UsageError(f"error: --n must be in (0, inf], got '{raw_value}'")
            parsed.add(dimension)
        self.value = tuple(sorted(parsed))
        return True


class ToleranceChecker(Checker):
    """Check a tolerance value."""

    def __init__(self, flag: str, tolerance: float):
        """Expect a tolerance with the flag that carried it.

        Args:
            flag (str): flag named in error messages
            tolerance (float): value to check
        """
        self.flag = flag
        self.tolerance = tolerance

    def check(self) -> bool:
        """Check the tolerance is finite and positive.

        Raises:
            UsageError: if it's not

        Returns:
            True if check is passed
        """
        if self.tolerance is None:
            return True
        if not (math.isfinite(self.tolerance) and self.tolerance > 0):
            raise UsageError(f"error: {self.flag} must be a finite positive number, got {self.tolerance}")
        return True


class SeedChecker(Checker):
    """Check the random seed."""

    def __init__(self, seed: int):
        self.seed = seed

    def check(self) -> bool:
        """Check the seed is in [0, 2^64 - 1].

        Raises:
            UsageError: if it's not

        Returns:
            True if check is passed
        """
        if self.seed is None:
            return True
        if not 0 <= self.seed <= MAX_SEED:
            raise UsageError(f"error: --seed must be a 64-bit unsigned integer, got {self.seed}")
        return True


class PairsChecker(Checker):
    """Check the pair budget."""

    def __init__(self, pairs: str):
        self.pairs = pairs
        self.value = None

    def check(self) -> bool:
        """Parse "all" or a positive integer, the result is stored in "self.value".

        Raises:
            UsageError: if the value is neither

        Returns:
            True if check is passed
        """
        if self.pairs is None or self.pairs == "all":
            self.value = self.pairs
            return True
        try:
            budget = int(self.pairs)
        except ValueError as error:
            raise UsageError(f"error: --pairs must be 'all' or a positive integer, got '{self.pairs}'") from error
        if budget < 1:
            raise UsageError(f"error: --pairs must be at least 1, got {budget}")
        self.value = budget
        return True


class CountChecker(Checker):
    """Check a positive count."""

    def __init__(self, flag: str, count: int):
        self.flag = flag
        self.count = count

    def check(self) -> bool:
        """Check the count is at least 1.

        Raises:
            UsageError: if it's not

        Returns:
            True if check is passed
        """
        if self.count is not None and self.count < 1:
            raise UsageError(f"error: {self.flag} must be at least 1, got {self.count}")
        return True


class VertexPairChecker(Checker):
    """Check that a vertex pair is given completely or not at all."""

    def __init__(self, x_vertex: str, y_vertex: str):
        self.x_vertex = x_vertex
        self.y_vertex = y_vertex

    def check(self) -> bool:
        """Check "--x" and "--y" are both given or both absent.

        Raises:
            UsageError: if only one of them is given

        Returns:
            True if check is passed
        """
        if (self.x_vertex is None) != (self.y_vertex is None):
            given, missing = ("--x", "--y") if self.y_vertex is None else ("--y", "--x")
            raise UsageError(f"error: {missing} is required together with {given}")
        return True


class PathsForConversionsChecker(Checker):
    """Check paths for existence."""

    def __init__(self, formats_and_paths: dict):
        """Expect formats_and_paths in the "dict" format, where key is the flag and value is a directory.

        Args:
            formats_and_paths (dict): paths to check for existence
        """
        self.formats_and_paths = formats_and_paths

    def check(self) -> bool:
        """Check paths for existence.

        Skip path if path is None.

        Raises:
            UsageError: if an input path is not an existing directory

        Returns:
            True if check is passed
        """
        for convert_flag, path in self.formats_and_paths.items():
            if path is None:
                continue
            LOGGER.info("checking '%s' path...", convert_flag)
            if not os.path.isdir(path):
                raise UsageError(f"error: the directory for {convert_flag} doesn't exist: '{path}'")
        return True


class ArgsChecker:
    """Check argparse arguments and build the RunConfig.

    If any of the checks fail, "UsageError" with a specific message is raised.
    """

    def __init__(self, args: argparse.Namespace):
        """Initialize list with checkers instances.

        Args:
            args (argparse.Namespace): parsed arguments
        """
        LOGGER.info("initiate input parameters checking system...")
        self.args = args
        command = args.command
        self._family = (
            FamilyChecker(args.family_name, args.size, flag="gen")
            if command == "gen" else FamilyChecker(_get(args, "family"))
        )
        self._dimensions = DimensionChecker(_get(args, "n"))
        self._pairs = PairsChecker(_get(args, "pairs"))
        self._instances_to_check_args = [
            SourceChecker(command, _get(args, "source"), _get(args, "graph"), _get(args, "family")),
            self._family,
            self._dimensions,
            ToleranceChecker("--rho-tol", _get(args, "rho_tol")),
            ToleranceChecker("--cd-tol", _get(args, "cd_tol")),
            SeedChecker(_get(args, "seed")),
            self._pairs,
            CountChecker("--functions", _get(args, "functions")),
            VertexPairChecker(_get(args, "x"), _get(args, "y")),
            PathsForConversionsChecker({"--to-html": _get(args, "to_html")}),
        ]

    def check(self) -> RunConfig:
        """Run checking process.

        All checkers in "self._instances_to_check_args" provide the "check" method without parameters
        and raise exceptions if checks fail.

        Returns:
            RunConfig
        """
        LOGGER.info("checking input parameters...")
        for class_name in self._instances_to_check_args:
            class_name.check()
        LOGGER.info("checking input parameters is complete, everything is OK...")
        args = self.args
        source = _get(args, "source") or _get(args, "graph")
        dimensions = self._dimensions.value
        if dimensions is None:
            dimensions = None if args.command in ("verify", "report") else (math.inf,)
        return RunConfig(
            command=args.command,
            source=source,
            family=self._family.value,
            measure=_get(args, "measure"),
            dimensions=dimensions,
            rho_tol=_get(args, "rho_tol") or config.RHO_TOL,
            cd_tol=_get(args, "cd_tol") or config.CD_TOL,
            seed=config.DEFAULT_SEED if _get(args, "seed") is None else args.seed,
            output_format=_get(args, "format") or "table",
            output=_get(args, "output") or STDIO,
            with_witness=bool(_get(args, "with_witness")),
            dump_forms=bool(_get(args, "dump_forms")),
            pairs=self._pairs.value,
            vertex=_get(args, "vertex"),
            x_vertex=_get(args, "x"),
            y_vertex=_get(args, "y"),
            functions=_get(args, "functions") or config.DEFAULT_RANDOM_FUNCTIONS,
            to_html=_get(args, "to_html"),
            colorize=bool(_get(args, "colorize")),
        )


def _get(args: argparse.Namespace, name: str):
    return getattr(args, name, None)


class _UsageParser(argparse.ArgumentParser):
    """ArgumentParser that raises UsageError instead of exiting on bad input."""

    def error(self, message):
        raise UsageError(f"error: {message}")


def init_argparse(argv=None) -> argparse.Namespace:
    """Initialize argparse arguments.

    Usage: curvgraph [-h] [--version] COMMAND [options] [source]

    Commands:
        gen FAMILY SIZE: prints a generated graph document

        curvature: prints K_x(n) for every vertex and --n value

        diam: prints the combinatorial and the resistance diameter

        rho: prints the resistance distance of one pair or of every evaluated pair

        semigroup-check: checks the semigroup curvature inequalities with random functions

        verify: prints every bound verdict, exit code 1 if an applicable bound is violated

        report: prints the full bounds report, --to-html DIR also saves it as report.html

    Args:
        argv: arguments without the program name, "sys.argv[1:]" when None

    Raises:
        UsageError: if the arguments don't match the grammar

    Returns:
        Initialized arguments
    """
    parser = _UsageParser(prog="curvgraph", description="Bakry-Emery curvature and diameter bounds of finite graphs.")
    parser.add_argument("--version", action="version", version=f"curvgraph {__version__}", help="Prints version info")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--verbose", action="store_true", help="Outputs verbose status messages")
    common.add_argument("--measure", choices=MEASURE_CONVENTIONS, help="Vertex measure convention")
    common.add_argument("-o", "--output", help="Output path, '-' for stdout")
    common.add_argument("--format", choices=FORMATS, help="Output format, 'table' by default")
    common.add_argument("--colorize", action="store_true", help="Colorizes verdicts in table output")

    sourced = argparse.ArgumentParser(add_help=False, parents=[common])
    sourced.add_argument("source", nargs="?", help="Graph document path, '-' for stdin")
    sourced.add_argument("--graph", help="Graph document path")
    sourced.add_argument("--family", help="Generated graph, NAME:SIZE")

    dimensional = argparse.ArgumentParser(add_help=False)
    dimensional.add_argument("--n", action="append", help="Dimension parameter, repeatable, 'inf' accepted")

    resistance = argparse.ArgumentParser(add_help=False)
    resistance.add_argument("--rho-tol", type=float, help="Resistance solver tolerance")
    resistance.add_argument("--pairs", help="Evaluated pairs, 'all' or a number")

    seeded = argparse.ArgumentParser(add_help=False)
    seeded.add_argument("--seed", type=int, help="Seed of the random test functions")
    seeded.add_argument("--functions", type=int, help="Number of random test functions")

    curvature_tolerance = argparse.ArgumentParser(add_help=False)
    curvature_tolerance.add_argument("--cd-tol", type=float, help="Curvature counts as positive above this value")

    commands = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_UsageParser)
    commands.required = True

    gen = commands.add_parser("gen", parents=[common], help="Generate a graph document")
    gen.add_argument("family_name", metavar="FAMILY", help=", ".join(FAMILIES))
    gen.add_argument("size", metavar="SIZE", help="Family size parameter")

    curvature = commands.add_parser("curvature", parents=[sourced, dimensional], help="Vertex curvature")
    curvature.add_argument("--vertex", help="Only this vertex")
    curvature.add_argument("--dump-forms", action="store_true", help="Adds the local forms to the output")

    commands.add_parser("diam", parents=[sourced, resistance], help="Combinatorial and resistance diameters")

    rho = commands.add_parser("rho", parents=[sourced, resistance], help="Resistance distances")
    rho.add_argument("--x", help="First vertex of the pair")
    rho.add_argument("--y", help="Second vertex of the pair")
    rho.add_argument("--with-witness", action="store_true", help="Adds the maximizing functions to the output")

    commands.add_parser(
        "semigroup-check", parents=[sourced, dimensional, seeded], help="Semigroup curvature inequalities",
    )
    commands.add_parser(
        "verify", parents=[sourced, dimensional, resistance, seeded, curvature_tolerance], help="Bound verdicts",
    )
    report = commands.add_parser(
        "report", parents=[sourced, dimensional, resistance, seeded, curvature_tolerance], help="Full bounds report",
    )
    report.add_argument("--to-html", help="Saves the report to report.html in the specified directory")
    return parser.parse_args(argv)
