"""Exception types shared by every stage of the pipeline."""


class ValidationError(ValueError):
    """Malformed input: bad permutation, unknown symbol, corrupted JSON."""


class SizeLimitError(RuntimeError):
    """A configured cap (closure, cover vertices, walls) would be exceeded."""


class PreconditionError(ValueError):
    """An operation was called outside the situation it applies to."""


class StructuralError(AssertionError):
    """An internal invariant failed. This always indicates a bug."""
