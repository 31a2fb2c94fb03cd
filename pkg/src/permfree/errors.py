"""Exception types shared across the package."""


class SizeLimitError(ValueError):
    """An input would exceed an enumeration or summation budget."""


class ValidationError(ValueError):
    """An input object violates its structural invariants."""


class InternalInconsistencyError(RuntimeError):
    """A computed quantity contradicts a proven identity. Should never fire."""
