class GrpdError(Exception):
    """Base class for all errors raised by grpd."""


class InvalidStructure(GrpdError):
    """A table, map or path violates the laws it is supposed to satisfy."""


class BoundExceeded(GrpdError):
    """An enumeration would exceed its configured size bound."""


class ContextMismatch(GrpdError):
    pass


class LiftError(GrpdError):
    pass
