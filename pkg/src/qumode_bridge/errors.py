"""Exception types shared across the package.

Each class carries the process exit code used by the command line harness.
"""


class QumodeError(Exception):
    """Base class for package errors."""

    exit_code = 1


class ValidationError(QumodeError, ValueError):
    """Invalid parameters or a violated precondition."""

    exit_code = 2


class NumericalGateError(QumodeError):
    """A numerical verification gate (fidelity, leakage, mismatch) failed."""

    exit_code = 3


class SolverError(QumodeError, RuntimeError):
    """An iterative solver did not converge."""

    exit_code = 4
