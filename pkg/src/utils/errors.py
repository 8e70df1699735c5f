"""Exceptions raised by the rate computation library.

Library code raises these; only the command-line front end turns them into
exit codes.
"""

from typing import List, Optional


class RelayRateError(Exception):
    """Base exception for all relay-rate errors."""
    pass

class DomainError(RelayRateError, ValueError):
    """Raised when a numeric input lies outside the domain of an operation."""
    pass

class InfeasibleQuantizationError(DomainError):
    """Raised when no finite quantization distortion achieves the requested index rate."""
    pass

class ContractViolation(RelayRateError, ValueError):
    """Raised when a configuration breaks a structural contract (lengths, theta on QMF stages)."""
    pass

class SearchGuardError(RelayRateError):
    """Raised when a grid search would exceed the configured size limit."""
    pass

class DmSpecError(RelayRateError, ValueError):
    """Raised when a discrete memoryless network spec is invalid or too large."""

    def __init__(self, message: str, violations: Optional[List[object]] = None):
        super().__init__(message)
        self.violations = list(violations or [])

class NonMonotoneQuantizerError(DmSpecError):
    """Raised when a quantizer family is not decreasing in its distortion knob."""
    pass

class ConfigFileError(RelayRateError):
    """Raised when a JSON document cannot be read or fails validation."""
    pass
