# errors.py
"""
Exception hierarchy for the simulator.

Every exception carries the process exit code the CLI reports for it:
1 for bad input, 2 for a broken internal invariant.
"""
from typing import Optional


class SimulationError(Exception):
    """Base class for simulator failures."""
    exit_code = 2


class ValidationError(SimulationError):
    """Input rejected before or during a computation."""
    exit_code = 1


class DimensionError(ValidationError):
    """Operand shapes do not agree."""


class QubitCeilingError(ValidationError):
    """Instance exceeds the configured qubit ceiling."""


class NotHermitianError(ValidationError):
    """A Hermitian matrix was required."""


class NormalizationError(ValidationError):
    """A state or distribution does not have unit norm."""


class ArityError(ValidationError):
    """Truth table arity does not match the algorithm."""


class IndeterminatePeriodError(ValidationError):
    """Observed outcomes carry no period information."""


class DocumentError(ValidationError):
    """A serialized trace document is malformed."""


class OracleParseError(ValidationError):
    """An oracle file could not be parsed."""
    def __init__(self, message: str, line_number: Optional[int] = None):
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)


class InvariantViolation(SimulationError):
    """A post-condition of a computation did not hold."""
    exit_code = 2


class ConvergenceError(SimulationError):
    """The eigen-solver did not converge."""
    exit_code = 2
