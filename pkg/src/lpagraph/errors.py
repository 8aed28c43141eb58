"""Exception hierarchy shared by the library and the CLI."""


class LpaGraphError(Exception):
    """Base class for every error raised by lpagraph."""


class StructuralError(LpaGraphError, ValueError):
    """A graph violates its structural invariants."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations) or "invalid graph")


class UnknownVertexError(LpaGraphError, KeyError):
    def __init__(self, vertex):
        self.vertex = vertex
        super().__init__(f"unknown vertex {vertex!r}")

    def __str__(self):
        return self.args[0]


class PreconditionError(LpaGraphError, ValueError):
    """An operation was called outside its stated preconditions."""


class ResourceCapError(LpaGraphError):
    """A configured cap (lattice size, cycle count, search states) was exceeded."""


class DepthLimitError(ResourceCapError):
    """A generated graph's truncation is too shallow for the requested result."""


class InvariantFailure(LpaGraphError, AssertionError):
    """Two independent computations that must agree did not."""


class DocumentError(LpaGraphError, ValueError):
    """A graph document could not be parsed."""
