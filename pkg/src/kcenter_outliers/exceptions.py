"""Exception types raised across the package."""


class ContractViolation(ValueError):
    """An argument is outside the range an operation is defined for."""


class GuardRefusal(RuntimeError):
    """An exact computation was refused because it exceeds a size guard."""


class UnsupportedVariant(TypeError):
    """The operation does not apply to this dataset variant."""


class DegenerateGeometry(RuntimeError):
    """Random generation could not satisfy its geometric constraints."""
