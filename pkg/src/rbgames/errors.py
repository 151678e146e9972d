"""Exception taxonomy shared across the package."""


class GameError(Exception):
    """Base class for all errors raised by this library."""


class InputError(GameError):
    """Malformed arguments, invalid profiles, or unknown identifiers."""


class SchemaError(InputError):
    """Instance or report document violates the file schema."""


class UnsupportedClassError(GameError):
    """Instance falls outside the game class a solver is proven for."""


class CapacityError(GameError):
    """Exact search would exceed the desk-scale limits."""


class InvariantViolationError(GameError):
    """An internal invariant failed; indicates a bug, never a user error."""
