"""Exception types shared across the package.

The CLI maps these onto exit codes, so every failure a user can trigger
should surface as one of them.
"""


class DyckPairError(Exception):
    """Base class for all package errors."""

    exit_code = 1


class InvalidWord(DyckPairError, ValueError):
    exit_code = 4


class ParseError(DyckPairError, ValueError):
    exit_code = 4


class InvalidRepairing(DyckPairError, ValueError):
    """A pair sequence breaks the re-pairing rules.

    ``step`` is the 0-based index of the offending pair (or None when the
    problem is global, e.g. a position never used).
    """

    exit_code = 2

    def __init__(self, reason, step=None):
        self.reason = reason
        self.step = step
        where = "" if step is None else f" at step {step}"
        super().__init__(f"{reason}{where}")


class InvariantViolation(DyckPairError):
    exit_code = 2


class CapExceeded(DyckPairError):
    exit_code = 3


class NotBinaryTree(DyckPairError, ValueError):
    exit_code = 2
