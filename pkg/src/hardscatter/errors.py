"""Exception types shared across the package."""


class InputError(ValueError):
    """Malformed or invalid input (bad descriptor, zero vector, empty list)."""


class UnsupportedBodyError(InputError):
    """The operation needs a strictly convex, differentiable boundary."""


class DomainError(ValueError):
    """Arguments outside the mathematical domain of a map."""


class InvalidStateError(ValueError):
    """A dynamical state that violates non-penetration."""
