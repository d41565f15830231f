"""This module provide logging settings.

It uses "WARNING" level by default, the "--verbose" flag switches it to "INFO".

Messages go to stderr: stdout is reserved for the emitted documents.

Use LOGGER variable to get access to logging.
"""

import logging
import sys

LOGGER = logging.getLogger("curvgraph")
LOGGER.setLevel(logging.WARNING)

LOGGER_HANDLER = logging.StreamHandler(sys.stderr)
LOGGER_HANDLER.setLevel(logging.DEBUG)
LOGGER.addHandler(LOGGER_HANDLER)
