"""Library exceptions for STaR-DRO."""


class StarDROError(Exception):
    """Base exception for all library errors."""

    pass


class InvalidInputError(StarDROError, ValueError):
    """Raised when an input vector, parameter or record is malformed."""

    pass


class NumericalFailureError(StarDROError):
    """Raised when a numerical routine cannot produce a valid result."""

    def __init__(self, message: str, residual: float) -> None:
        super().__init__(f"{message} (residual={residual:.3e})")
        self.residual = residual


class SchemaError(StarDROError):
    """Raised when records violate the label schema or attribution layout."""

    pass


class GroupLookupError(SchemaError, KeyError):
    """Raised when a group key is not part of an inventory."""

    def __str__(self) -> str:
        return str(self.args[0]) if self.args else ""


class DegenerateBatchError(StarDROError):
    """Raised when a weighted objective has a zero denominator."""

    pass


class DivergenceError(StarDROError):
    """Raised when training produces non-finite or exploding losses."""

    def __init__(self, step: int, loss: float, threshold: float) -> None:
        super().__init__(f"Training diverged at step {step}: loss={loss!r} (threshold {threshold:g})")
        self.step = step
        self.loss = loss
        self.threshold = threshold


class ReweighterRegistryError(StarDROError):
    """Raised for unknown or invalid reweighter registrations."""

    pass
