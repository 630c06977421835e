"""Exception types shared across the package."""


class CausalSheafError(Exception):
    """Base class for all package errors."""


class OrderError(CausalSheafError):
    """Malformed order data: unknown events, bad generators, non-lowersets."""


class EnumerationLimitError(CausalSheafError):
    """An enumeration would exceed its hard size cap."""


class ScenarioError(CausalSheafError):
    """Malformed causal scenario: empty alphabets, mismatched event sets."""


class ScopeError(CausalSheafError):
    """Operation asked for on a proper pre-order where only partial orders
    are supported (sheaf machinery, locality, realization)."""


class NotCausalError(CausalSheafError):
    """A table or function violates the causality requirement it must satisfy."""


class NormalizationError(CausalSheafError):
    """Weights that must sum to one do not."""


class DiagramError(CausalSheafError):
    """Invalid instrument diagram: wiring, dimensions or completeness."""


class SnapError(CausalSheafError):
    """A floating-point probability has no nearby small-denominator rational."""


class FormatError(CausalSheafError):
    """Malformed input file or command-line value."""
