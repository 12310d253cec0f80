#!/usr/bin/env python3
"""
Exception hierarchy for the averaging toolkit.
Every error carries the CLI exit code it maps to.
"""

from typing import Optional, Sequence


class AveragingError(Exception):
    """Base class for all toolkit errors."""

    kind = "averaging-error"
    exit_code = 1


class InvalidArgumentError(AveragingError, ValueError):
    """Bad argument: dimension mismatch, bad index, out-of-range parameter."""

    kind = "invalid-argument"
    exit_code = 2


class OrderViolationError(InvalidArgumentError):
    """A field has a monomial of lower order than requested."""

    kind = "order-violation"


class FormMismatchError(InvalidArgumentError):
    """A trajectory has the wrong form for the requested transform."""

    kind = "form-mismatch"


class ConfigError(AveragingError):
    """Malformed experiment config or field file."""

    kind = "config-error"
    exit_code = 2

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        """
        Initialize the error.

        Args:
            message (str): Description of the problem
            line (int, optional): 1-based line of the offending token. Defaults to None.
            column (int, optional): 1-based column of the offending token. Defaults to None.
        """
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)
        self.line = line
        self.column = column


class ResonantFrequenciesError(AveragingError):
    """The non-resonance certificate failed; carries the integer relation found."""

    kind = "resonant-frequencies"
    exit_code = 3

    def __init__(self, witness: Sequence[int]):
        self.witness = tuple(int(s) for s in witness)
        super().__init__(f"frequency vector is resonant, witness s={list(self.witness)}")


class NumericalError(AveragingError):
    """Base class for numeric failures."""

    kind = "numeric-failure"
    exit_code = 3


class QuadratureResolutionError(NumericalError):
    """Quadrature step too coarse for the fastest oscillation."""

    kind = "quadrature-resolution"


class NonConvergenceError(NumericalError):
    """Partial averages did not stabilise within the allowed horizon."""

    kind = "non-convergence"


class BlowUpError(NumericalError):
    """A trajectory left the confinement ball."""

    kind = "blow-up"
