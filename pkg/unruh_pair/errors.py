"""Error hierarchy shared by the library and the command line."""


class SimulationError(Exception):
    """Base error with a machine code and a process exit code."""

    exit_code = 1

    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code
        self.message = message

    def __str__(self):
        return f'{self.code}: {self.message}'


class UsageError(SimulationError):
    """Unknown flags, conflicting options, bad ranges."""

    exit_code = 2


class NumericError(SimulationError):
    """Non-convergence, short horizons, singular formulas."""

    exit_code = 3


class InvalidStateError(SimulationError):
    """Invalid physical parameters or density matrices."""

    exit_code = 4


class OutputError(SimulationError):
    """Failures while writing results."""

    exit_code = 1


def check_finite(name: str, *values):
    """Reject NaN (and infinite) scalar inputs."""
    for value in values:
        if value != value or value in (float('inf'), float('-inf')):
            raise InvalidStateError('nan-input', f'{name} must be finite, got {value}.')
