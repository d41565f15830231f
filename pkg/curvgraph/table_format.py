"""This module provides cell formatting and separators for human-readable output."""

import math

from curvgraph.graph import format_real


def separate(separator_symbol: str = "-", separator_len: int = 100) -> str:
    """Return "separator_symbol" repeated "separator_len" times.

    Args:
        separator_symbol (str): "-" by default
        separator_len (int): set the number of "separator_symbol"

    Returns:
        the separator line
    """
    return separator_symbol * separator_len


def format_cell(value, digits: str = ".17g") -> str:
    """Format a table cell.

    Reals use the given format spec, infinities "inf", missing values an empty string.

    Args:
        value: the cell value
        digits (str): format spec of reals

    Returns:
        the cell text
    """
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if math.isinf(value):
            return format_real(value)
        if math.isnan(value):
            return ""
        return format(value, digits)
    if isinstance(value, (list, tuple)):
        return " ".join(format_cell(item, digits) for item in value)
    return str(value)


def json_number(value):
    """Return a JSON-safe number: "inf" and "-inf" for infinities, None for nan."""
    if isinstance(value, float):
        if math.isnan(value):
            return None
        if math.isinf(value):
            return format_real(value)
    return value
