"""Exception types raised by the package."""


class DomainError(ValueError):
    """A parameter lies outside its physical domain.

    The offending field name is kept in ``field`` so callers can report it.
    """

    def __init__(self, field, value, requirement):
        self.field = field
        self.value = value
        super().__init__(f"{field}={value!r} violates {requirement}")


class SingularityError(ValueError):
    """Evaluation requested at (or too close to) an integrable singular point."""


class NonConvergenceError(ValueError):
    """A width estimate would depend on mass lying outside the sampled grid."""


class EmptySliceError(ValueError):
    """A conditional slice carries no probability mass."""


class DegenerateGridError(ValueError):
    """A sampled amplitude has (numerically) zero norm on its grid."""
