class QpeError(Exception):
    """Base class for runtime failures inside the workbench."""


class ValidationError(QpeError, ValueError):
    """Bad input: wrong shape, non-unitary gate, out-of-range parameter."""


class ResourceError(QpeError):
    """Requested register exceeds the simulator limits."""
