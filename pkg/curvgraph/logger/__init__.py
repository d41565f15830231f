"""LOGGER could be imported from logger folder directly."""

from curvgraph.logger.setup_logger import LOGGER
