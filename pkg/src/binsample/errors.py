"""Exception types shared across the package."""


class InvalidInput(ValueError):
    pass


class InvalidInterval(InvalidInput):
    pass


class InvalidDomain(InvalidInput):
    pass


class ConditionViolation(ValueError):
    """The objective or distance function breaks its declared regularity."""


class EvaluationError(RuntimeError):
    """The objective returned a non-finite value."""

    def __init__(self, x, value):
        super().__init__(f"objective returned {value!r} at x={x!r}")
        self.x = x
        self.value = value


class Exhausted(RuntimeError):
    """The candidate queue is empty."""
