class DomainError(ValueError):
    """Raised when inputs are well-formed but mathematically invalid."""


class InternalError(RuntimeError):
    """An invariant that should hold by construction was violated."""
