"""Exception hierarchy.

Every error raised on purpose by the library derives from :class:`HbGraphError`
so callers (and the CLI) can tell domain failures from programming errors.
"""


class HbGraphError(Exception):
    """Base class for all domain errors."""


class EmptySupport(HbGraphError, ValueError):
    pass


class UnknownVertex(HbGraphError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class UnknownHbEdge(HbGraphError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class NonPositiveWeight(HbGraphError, ValueError):
    pass


class DuplicateId(HbGraphError, ValueError):
    pass


class IsolatedVertex(HbGraphError, ValueError):
    pass


class InvalidSubset(HbGraphError, ValueError):
    pass


class LengthMismatch(HbGraphError, ValueError):
    pass


class InfeasibleConfig(HbGraphError, ValueError):
    pass


class StepCapExceeded(HbGraphError, RuntimeError):
    pass


class ParseError(HbGraphError, ValueError):
    pass


class SchemaError(HbGraphError, ValueError):
    pass
