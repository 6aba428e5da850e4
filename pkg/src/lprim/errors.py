"""Exception types shared across the package."""


class LprimError(Exception):
    """Base class for all package errors."""


class ParseError(LprimError):
    """Malformed DSL text.  Carries the 0-based position of the offending token."""

    def __init__(self, message, position):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class EvalDomainError(LprimError):
    """Evaluation requested at a declared singular point."""


class JetError(LprimError):
    """Jet propagation hit a non-differentiable node at its kink."""


class IntegrabilityError(LprimError):
    """Refinement diverged: the integrand has a non-integrable singularity."""


class ConvergenceError(LprimError):
    """Tail behaviour cannot be certified (decay class 'none' with nonzero tails,
    or refinement stalled before reaching tolerance)."""


class ExponentError(LprimError):
    """Exponent outside its domain, or a mismatched conjugate/order pairing."""


class SchemaError(LprimError):
    """Invalid JSON descriptor.  Carries a pointer to the offending field."""

    def __init__(self, message, pointer=""):
        super().__init__(f"{message} (field: {pointer or '<root>'})")
        self.pointer = pointer
