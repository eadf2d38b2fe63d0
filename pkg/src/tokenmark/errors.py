"""Exception types shared across the package."""


class DegenerateDistributionError(ValueError):
    """Raised when a probability vector has no token with positive mass."""


class InsufficientTokensError(ValueError):
    """Raised when a sequence is too short for the requested context width."""


class GenerationError(RuntimeError):
    """Raised when a generation loop aborts; carries the tokens produced so far."""

    def __init__(self, message: str, partial: list[int] | None = None):
        super().__init__(message)
        self.partial = list(partial) if partial is not None else []
