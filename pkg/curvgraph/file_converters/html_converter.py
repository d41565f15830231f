"""This module provides report converting to the .html file with jinja2."""

import os

from jinja2 import Environment, FileSystemLoader, select_autoescape

from curvgraph.logger import LOGGER
from curvgraph.table_format import format_cell

REPORT_FILE_NAME = "report.html"


def format_number(value) -> str:
    """Jinja2 filter formats a cell with ten significant digits.

    Example:
    3.14159265358979 -> "3.141592654", inf -> "inf", None -> ""

    Args:
        value: the cell value

    Returns:
        the formatted cell
    """
    return format_cell(value, ".10g")


def verdict_class(verdict) -> str:
    """Jinja2 filter maps a verdict to a CSS class.

    Example:
    "NOT-APPLICABLE" -> "verdict-not-applicable"

    Args:
        verdict: a verdict string

    Returns:
        the CSS class name
    """
    if not isinstance(verdict, str):
        return ""
    return "verdict-" + verdict.lower()


class HTMLConverter:
    """Class to convert a report document to the .html file by the template."""

    def __init__(self, document_to_convert: tuple):
        """Provide initialization and launch conversion to the .html file.

        Create html template from "templates" folder.
        Register html filters and run the .html file creation.

        Args:
            document_to_convert (tuple): expect tuple like (directory path, Document)
        """
        self.path = document_to_convert[0]
        self.document = document_to_convert[1]

        current_dir = os.path.dirname(os.path.abspath(__file__))
        path_to_templates = os.path.join(current_dir, "templates")

        self.env = Environment(loader=FileSystemLoader(path_to_templates), autoescape=select_autoescape())
        self._register_filters()
        self.template = self.env.get_template("report_template.html")

        self.file_name = self.create_html_file()

    def create_html_file(self) -> str:
        """Render the .html file and save it to the directory.

        Returns:
            the path of the written file
        """
        LOGGER.info("converting %s to HTML...", self.document.title)

        html_file = self.template.render(title=self.document.title, tables=self.document.tables)

        file_name = os.path.join(self.path, REPORT_FILE_NAME)
        with open(file_name, "w", encoding="utf-8", newline="") as output_file:
            output_file.write(html_file)
        return file_name

    def _register_filters(self):
        self.env.filters["format_number"] = format_number
        self.env.filters["verdict_class"] = verdict_class
