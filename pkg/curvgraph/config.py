"""This module provides default settings of the package.

Every default can be overridden from the command line, see "arg_parser.py".
The number of worker threads is read from the "CURVGRAPH_THREADS" environment variable.
"""

import math
import os

from curvgraph.exceptions import UsageError

THREADS_ENV_VAR = "CURVGRAPH_THREADS"

# resistance metric solver
RHO_TOL = 1e-5
RHO_MAX_ITER = 50000
RHO_STALL_WINDOW = 50
RHO_ACTIVE_SLACK = 1e-6
RHO_STEP = 1.0
PAIR_BUDGET_THRESHOLD = 40
DEFAULT_PAIR_BUDGET = 64

# curvature solver
CD_TOL = 1e-9
PINV_CUTOFF = 1e-10
RANGE_TOL = 1e-8
PSD_GUARD = 1e-9

# bounds and checks
SHARP_TOL = 1e-6
BOUND_TOL = 1e-6
ENVELOPE_TOL = 1e-9
DEFAULT_SEED = 0
DEFAULT_RANDOM_FUNCTIONS = 20
T_GRID_POINTS = 64
T_GRID_START = 1e-3


def default_n_grid(vertex_count: int) -> list:
    """Return the default dimension grid {1, 2, 5, 10, |V|, inf} without duplicates, sorted.

    Args:
        vertex_count (int): number of vertices of the graph

    Returns:
        a sorted list of dimension parameters
    """
    return sorted({1.0, 2.0, 5.0, 10.0, float(max(vertex_count, 1)), math.inf})


def worker_count() -> int:
    """Return the number of worker threads.

    "CURVGRAPH_THREADS" unset or 0 means auto, that is the "ThreadPoolExecutor" default.

    Raises:
        UsageError: if the variable is not a nonnegative integer

    Returns:
        the maximal number of workers, None for auto
    """
    raw_value = os.environ.get(THREADS_ENV_VAR, "").strip()
    if not raw_value:
        return None
    try:
        threads = int(raw_value)
    except ValueError as error:
        raise UsageError(f"error: {THREADS_ENV_VAR} must be an integer, got '{raw_value}'") from error
    if threads < 0:
        raise UsageError(f"error: {THREADS_ENV_VAR} must be nonnegative, got {threads}")
    return threads or None
