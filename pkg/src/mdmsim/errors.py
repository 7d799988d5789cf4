"""Exception types shared across the package."""


class InvalidStateError(ValueError):
    """A quantum state failed its normalization or finiteness invariants."""


class InvalidStrengthError(ValueError):
    """Measurement-strength parameters violate t^2 + r^2 = 1 or t >= r >= 0."""


class InvalidConfigError(ValueError):
    """An optical-bench configuration value is out of range."""


class PreparationMismatchError(InvalidStateError):
    """The supplied qubit is not the state the preparation waveplates produce."""


class BoundDomainError(ValueError):
    """Estimation fidelity outside [1/2, 2/3] passed to the trade-off bound."""


class EmptyRowError(ValueError):
    """A counts row sums to zero and cannot be normalized."""


class CountsParseError(ValueError):
    """A counts CSV document is malformed."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
