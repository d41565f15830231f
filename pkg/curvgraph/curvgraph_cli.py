"""This module provides the main entrance to the command-line tool.

Usage: curvgraph [-h] [--version] COMMAND [options] [source]

Commands:
    gen FAMILY SIZE: prints a generated graph document

    curvature: prints K_x(n) for every vertex and --n value

    diam: prints the combinatorial and the resistance diameter

    rho: prints the resistance distance of one pair or of every evaluated pair

    semigroup-check: checks the semigroup curvature inequalities with random functions

    verify: prints every bound verdict, exits with 1 if an applicable bound is violated

    report: prints the full bounds report

Note:
    Exactly one graph source is required: a path, '-' for stdin, --graph PATH or --family NAME:SIZE.
    CURVGRAPH_THREADS caps the number of worker threads, 0 or unset means auto.

Example:
    $ curvgraph gen hypercube 3 | curvgraph curvature --n inf -

    $ curvgraph verify --graph edge.json

    $ curvgraph report --family hypercube:4 --n 2 --n inf --format json

    $ curvgraph semigroup-check --family cycle:6 --seed 7 --format csv
"""

import sys

from curvgraph.run_manager import EXIT_OK, RunManager


def run(argv=None, stdin=None, stdout=None) -> int:
    """Run one command and return its exit code.

    Args:
        argv: arguments without the program name, None for "sys.argv[1:]"
        stdin: text stream for the "-" source, "sys.stdin" by default
        stdout: text stream for the "-" output, "sys.stdout" by default

    Returns:
        the exit code
    """
    manager = RunManager(argv, stdin or sys.stdin, stdout or sys.stdout)
    try:
        return manager.start_processing()
    except SystemExit as exit_request:
        return exit_request.code if isinstance(exit_request.code, int) else EXIT_OK


def main():
    """Run the command line of "sys.argv" and exit with its code."""
    sys.exit(run())


if __name__ == "__main__":
    main()
