"""Exception types raised across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain where an operation is defined."""


class ScenarioParseError(ValueError):
    """A scenario file is malformed or fails its schema.

    ``path`` is the JSON path of the offending field, when known.
    """

    def __init__(self, message, path=()):
        super().__init__(message)
        self.path = tuple(path)


class ScenarioValidationError(ValueError):
    """A scenario parsed cleanly but violates a mathematical hypothesis."""

    def __init__(self, message, point_index=None, margin=None):
        super().__init__(message)
        self.point_index = point_index
        self.margin = margin
