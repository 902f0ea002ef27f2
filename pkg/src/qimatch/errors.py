"""Shared exception types, grouped here so the CLI can map them to exit codes."""


class ParseError(ValueError):
    """A structured input file (QUBO text, graph JSON, PGM) is malformed."""


class DegenerateGeometryError(ValueError):
    """Geometric relation requested for coincident points."""


class InfeasibleSolutionError(RuntimeError):
    """A solver returned an assignment that violates a conflict edge."""
