"""Exception types raised across the package."""


class DegenerateCoefficientError(ValueError):
    """A rotation angle needs a ratio whose denominator vanishes."""

    def __init__(self, p, q, message=None):
        self.p = p
        self.q = q
        super().__init__(message or f"vanishing polynomial at (p={p}, q={q}); "
                                    "too few nonzero coefficients for this pair count")


class DegenerateStateError(ValueError):
    """The requested state has zero norm."""


class UnsupportedCircuitError(ValueError):
    """The circuit cannot be executed on the fixed-weight path."""


class QasmError(ValueError):
    """Problems emitting or reading OpenQASM text."""
