"""This module provides report documents and their renderers.

A Document is a list of named tables plus a JSON payload. "Printer" renders it in one of the
registered formats:
    JSON: the payload, indented, keys in insertion order
    CSV: every table with a header row, LF line endings, reals with 17 significant digits
    TABLE: aligned human-readable text, optionally colorized with colorama
"""

import csv
import io
import json
from abc import ABC, abstractmethod
from dataclasses import dataclass, field

import colorama

from curvgraph import colors
from curvgraph.file_converters.html_converter import HTMLConverter
from curvgraph.logger import LOGGER
from curvgraph.table_format import format_cell, separate

FORMATS = ("json", "csv", "table")


@dataclass
class Table:
    """A named table; every row is a mapping from column name to value."""

    name: str
    columns: tuple
    rows: list = field(default_factory=list)


@dataclass
class Document:
    """Tables for CSV and TABLE output and the payload for JSON output."""

    title: str
    tables: list = field(default_factory=list)
    payload: dict = field(default_factory=dict)


def json_renderer(document_to_process: tuple) -> str:
    """Render the payload of a document as JSON.

    Args:
        document_to_process (tuple): tuple like (document: Document, colorized_mode: bool)

    Returns:
        the JSON text ending with a newline
    """
    document = document_to_process[0]
    LOGGER.info("serializing %s to JSON...", document.title)
    return json.dumps(document.payload, indent=2, allow_nan=False) + "\n"


def csv_renderer(document_to_process: tuple) -> str:
    """Render the tables of a document as CSV.

    A single table is emitted bare; several tables are each preceded by a "# name" line and
    separated by a blank line.

    Args:
        document_to_process (tuple): tuple like (document: Document, colorized_mode: bool)

    Returns:
        the CSV text
    """
    document = document_to_process[0]
    LOGGER.info("serializing %s to CSV...", document.title)
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    for number, table in enumerate(document.tables):
        if len(document.tables) > 1:
            if number:
                buffer.write("\n")
            buffer.write(f"# {table.name}\n")
        writer.writerow(table.columns)
        for row in table.rows:
            writer.writerow([format_cell(row.get(column)) for column in table.columns])
    return buffer.getvalue()


def human_readable_renderer(document_to_process: tuple) -> str:
    """Render the tables of a document as aligned text.

    Args:
        document_to_process (tuple): tuple like (document: Document, colorized_mode: bool)

    Returns:
        the text, verdict cells wrapped in colorama codes in colorized mode
    """
    document, colorized_mode = document_to_process
    LOGGER.info("formatting %s as a table...", document.title)
    lines = [document.title]
    for table in document.tables:
        cells = [[format_cell(row.get(column), ".10g") for column in table.columns] for row in table.rows]
        widths = [
            max([len(column)] + [len(line[position]) for line in cells])
            for position, column in enumerate(table.columns)
        ]
        width = sum(widths) + 2 * (len(widths) - 1)
        lines.extend(("", table.name, separate("=", width)))
        lines.append("  ".join(column.ljust(widths[position]) for position, column in enumerate(table.columns)))
        lines.append(separate("-", width))
        for row, line in zip(table.rows, cells):
            padded = [text.ljust(widths[position]) for position, text in enumerate(line)]
            if colorized_mode:
                padded = _colorize(table.columns, row, padded)
            lines.append("  ".join(padded).rstrip())
    return "\n".join(lines) + "\n"


def _colorize(columns: tuple, row: dict, padded: list) -> list:
    for position, column in enumerate(columns):
        fore = colors.VERDICT_FORE.get(row.get(column)) if column in colors.VERDICT_COLUMNS else None
        if fore is not None:
            padded[position] = getattr(colorama.Fore, fore) + padded[position] + colorama.Fore.RESET
    return padded


class ReportHandler(ABC):
    """Abstract class. Provide process document logic.

    Inherited classes must redefine the "_register_formats" method and run
    "self.register_handler_format("DATA FORMAT", FUNCTION_TO_HANDLE)".

    Example: "DATA FORMAT": "JSON", FUNCTION_TO_HANDLE: json_renderer
    """

    def __init__(self):
        """Provide "self._formats" to collect handler functions depending on the handling format."""
        self._formats = {}
        self._register_formats()

    def process_document(self, object_to_handle, data_format: str):
        """Run the handler registered for "data_format".

        Args:
            object_to_handle: the document to handle
            data_format (str): determine which handler function will process "object_to_handle"

        Raises:
            KeyError: if no handler is registered for the format

        Returns:
            the result of processing the "object_to_handle" by the handler from "self._formats"
        """
        handler_method = self._formats[data_format.upper()]
        return handler_method(object_to_handle)

    def register_handler_format(self, data_format: str, data_handler):
        """Save "data_format" and "data_handler" in "self._formats".

        Args:
            data_format (str): defines the key under which the handler function is saved
            data_handler: determine the handler function
        """
        self._formats[data_format] = data_handler

    @abstractmethod
    def _register_formats(self):
        """Provide the "_register_formats" method as a required interface."""


class Printer(ReportHandler):
    """Inheritor of the "ReportHandler" abstract class.

    Redefine the "_register_formats" method and register "JSON", "CSV" and "TABLE" renderers.
    """

    def _register_formats(self):
        self.register_handler_format("JSON", json_renderer)
        self.register_handler_format("CSV", csv_renderer)
        self.register_handler_format("TABLE", human_readable_renderer)


class FileConverter(ReportHandler):
    """Inheritor of the "ReportHandler" abstract class.

    Redefine the "_register_formats" method and register the "TO_HTML" converter.
    """

    def _register_formats(self):
        self.register_handler_format("TO_HTML", HTMLConverter)


def emit(document: Document, data_format: str, output: str, stream, colorized_mode: bool = False):
    """Render a document and write it to a file or to a stream.

    Args:
        document (Document): the document
        data_format (str): one of FORMATS
        output (str): output path, "-" or None for the stream
        stream: text stream used when no path is given
        colorized_mode (bool): colorize verdicts in TABLE format
    """
    if colorized_mode and data_format == "table":
        colorama.init()
    text = Printer().process_document((document, colorized_mode and output in (None, "-")), data_format)
    if output in (None, "-"):
        stream.write(text)
        return
    LOGGER.info("writing %s to %s...", document.title, output)
    with open(output, "w", encoding="utf-8", newline="") as output_file:
        output_file.write(text)
