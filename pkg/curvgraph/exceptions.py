"""This module provides the exceptions raised by the package.

All of them derive from "ValueError" so callers written against the plain "ValueError"
contract keep working. Messages start with "error: " and name the offending element.
"""


class CurvGraphError(ValueError):
    """Base class for every error raised by the package."""


class GraphParseError(CurvGraphError):
    """The graph document is not well-formed."""


class GraphValidationError(CurvGraphError):
    """The graph violates a WeightedGraph invariant."""


class ArgumentError(CurvGraphError):
    """An operation got an argument outside of its domain."""


class UsageError(CurvGraphError):
    """A command-line flag is missing, repeated or malformed."""


class FormsError(CurvGraphError):
    """The second-ball block of the local Gamma-2 form is not positive semidefinite."""


class SolverError(CurvGraphError):
    """A linear algebra routine failed or produced an inconsistent factorization."""


class DisconnectedError(CurvGraphError):
    """A distance-based quantity was requested across connected components."""


class InvariantFailure(CurvGraphError):
    """A checked mathematical inequality does not hold beyond tolerance."""
