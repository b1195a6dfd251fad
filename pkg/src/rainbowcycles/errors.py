"""Exception taxonomy shared across the package."""

from __future__ import annotations


class RainbowError(Exception):
    """Base class for all package-specific errors."""


# graph construction / queries
class DuplicateEdge(RainbowError):
    pass


class ImproperColoring(RainbowError):
    def __init__(self, vertex: int, edge_a, edge_b, message: str | None = None):
        self.vertex = vertex
        self.edge_a = edge_a
        self.edge_b = edge_b
        super().__init__(
            message
            or f"color repeated at vertex {vertex}: edges {edge_a} and {edge_b}"
        )


class OverlappingSets(RainbowError):
    pass


class EmptySet(RainbowError):
    pass


class GraphFormatError(RainbowError):
    """Text-format reader rejection (bad header, ordering, counts...)."""


# generators
class OddN(RainbowError):
    pass


class EvenN(RainbowError):
    pass


class NotLatin(RainbowError):
    pass


class NotSymmetric(RainbowError):
    pass


class PaletteTooSmall(RainbowError):
    pass


# path forests / swaps
class IllegalSwap(RainbowError):
    pass


class NotSpanning(RainbowError):
    pass


class NotComplete(RainbowError):
    pass


class NTooSmall(RainbowError):
    pass


# sampling
class NotSubgraph(RainbowError):
    pass


class IndivisibleSize(RainbowError):
    pass


# cycle pipeline
class DegenerateP(RainbowError):
    pass


class BelowFloor(RainbowError):
    pass


class PipelinePrecondition(RainbowError):
    pass


class NoExtensionFound(RainbowError):
    """Raised by the path-extension step when every search stage comes up empty.

    Carries a diagnostics dict so failures are inspectable in test output.
    """

    def __init__(self, message: str, diagnostics: dict | None = None):
        self.diagnostics = diagnostics or {}
        super().__init__(message)


class NoClosure(RainbowError):
    def __init__(self, message: str, diagnostics: dict | None = None):
        self.diagnostics = diagnostics or {}
        super().__init__(message)


# oracle
class InstanceTooLarge(RainbowError):
    pass


class ConditionNotVerified(RainbowError):
    pass


# harness
class InsufficientData(RainbowError):
    pass


class ConfigError(RainbowError):
    pass
