"""Exception types shared across the package."""

from __future__ import annotations


class SymdenjoyError(Exception):
    """Base class for all package errors."""


class DegenerateTriple(SymdenjoyError):
    """Cyclic order queried on points that coincide at working precision."""


class PrecisionCollision(SymdenjoyError):
    """Construction points collide (or a gap vanishes) at working precision."""


class DepthExceeded(SymdenjoyError):
    """Query needs table depth beyond what was built."""


class ErrorBudgetExceeded(SymdenjoyError):
    """Accumulated error bound exceeds the caller-supplied cap."""

    def __init__(self, message: str, bound: float, cap: float):
        super().__init__(message)
        self.bound = bound
        self.cap = cap


class ConfigInvalid(SymdenjoyError):
    """Build configuration or artifact rejected; `field` names the offender."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


class NegativeRadius(SymdenjoyError):
    """Radial coordinate outside [0, inf)."""


class UnsupportedRender(SymdenjoyError):
    """Unknown render target."""
