"""
Exception hierarchy for spnkit.
Every failure raised by the library derives from SpnError so callers can catch one type.
"""
from typing import Optional, Sequence


class SpnError(Exception):
    """Base class for all spnkit errors."""
    pass


class ConfigurationError(SpnError):
    """Invalid configuration values or an unreadable configuration file."""
    pass


class ModelError(SpnError):
    """Anything wrong with a network: construction, structure, serialized form."""
    pass


class ConstructionError(ModelError):
    """A node was built with illegal arguments (arity, negative weights, bad scope)."""
    pass


class InvalidParamsError(ModelError):
    """Leaf parameters rejected by the family validator."""

    def __init__(self, family: str, violations: Sequence[str]):
        self.family = family
        self.violations = list(violations)
        super().__init__(f"Invalid {family} parameters: {'; '.join(self.violations)}")


class UnknownFamilyError(ModelError):
    """A leaf family name that is not registered."""

    def __init__(self, name: str):
        self.name = name
        super().__init__(f"Unknown leaf family: {name!r}")


class RegistryError(ModelError):
    """Duplicate registration or an incomplete family descriptor."""
    pass


class FinalizationError(ModelError):
    """The node graph cannot be turned into a network."""
    pass


class CycleError(FinalizationError):
    """The node graph contains a directed cycle."""
    pass


class UnreachableNodeError(FinalizationError):
    """Some nodes cannot be reached from the root."""
    pass


class EmptyNetworkError(FinalizationError):
    """No root node was given."""
    pass


class WeightNormalizationError(ModelError):
    """Sum weights do not add up to 1 within tolerance."""

    def __init__(self, total: float, message: Optional[str] = None):
        self.total = total
        super().__init__(message or f"Sum weights add up to {total!r}, expected 1 within 1e-6")


class InvalidNetworkError(ModelError):
    """A network failed validation where a valid one is required."""
    pass


class DslSyntaxError(ModelError):
    """Syntax error in DSL text, with the position and the tokens expected there."""

    def __init__(self, message: str, line: int, column: int, expected: Sequence[str] = ()):
        self.line = line
        self.column = column
        self.expected = list(expected)
        detail = f"line {line}, column {column}: {message}"
        if self.expected:
            detail += f" (expected {', '.join(self.expected)})"
        super().__init__(detail)


class SchemaError(ModelError):
    """A JSON model document violates the schema; `path` names the offending field."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")


class CodegenError(ModelError):
    """The network cannot be compiled, or the C toolchain failed."""
    pass


class DataError(SpnError):
    """Bad input data; carries the row and column when known."""

    def __init__(self, message: str, row: Optional[int] = None, column: Optional[int] = None):
        self.row = row
        self.column = column
        location = []
        if row is not None:
            location.append(f"row {row}")
        if column is not None:
            location.append(f"column {column}")
        prefix = f"{', '.join(location)}: " if location else ""
        super().__init__(prefix + message)
