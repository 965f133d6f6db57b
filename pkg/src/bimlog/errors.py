"""Exception hierarchy shared by every bimlog module."""

from __future__ import annotations


class BimLogError(Exception):
    """Base class for all errors raised by bimlog."""


class GeometryKindError(BimLogError, TypeError):
    """An operation received the wrong geometric variant (e.g. a point where a curve is needed)."""


class DomainError(BimLogError, ValueError):
    """A numeric argument lies outside the operation's domain."""


class DegeneracyError(BimLogError, ValueError):
    """Input geometry is degenerate (too few points, collinear loop, ...)."""


class ValidationError(BimLogError, ValueError):
    """A structural invariant does not hold.

    ``rule`` is a short machine-readable name of the violated rule.
    """

    def __init__(self, rule: str, message: str):
        super().__init__(f"{rule}: {message}")
        self.rule = rule
        self.message = message


class OpenLoopError(ValidationError):
    def __init__(self, message: str = "curve loop is not closed"):
        super().__init__("loop-closure", message)


class PlanarityError(ValidationError):
    def __init__(self, message: str):
        super().__init__("loop-planarity", message)


class FormatError(BimLogError, ValueError):
    """Text could not be parsed. ``offset`` is the character offset of the problem."""

    def __init__(self, message: str, offset: int | None = None):
        where = f" at offset {offset}" if offset is not None else ""
        super().__init__(f"{message}{where}")
        self.message = message
        self.offset = offset


class ElementReferenceError(BimLogError, LookupError):
    """An element id (or host id) does not name a live element."""


class SchemaError(BimLogError, ValueError):
    """A JSON document does not match the expected schema or version."""


class ScenarioError(BimLogError, ValueError):
    """An authoring scenario is infeasible or breaks tag discipline."""
