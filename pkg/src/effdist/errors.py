"""Exception hierarchy.

Every failure that a certified computation can report has its own class so
the CLI can map it to a distinct exit status.
"""


class EffdistError(Exception):
    """Base class for all errors raised by effdist."""

    kind = "error"


class PrecisionOverflow(EffdistError):
    """Working precision or quadrature cell count exceeded the configured budget."""

    kind = "precision-overflow"


class BudgetExhausted(EffdistError):
    """A search (tightness, doubling, refinement) hit its iteration cap."""

    kind = "budget-exhausted"


class GridBudgetExceeded(BudgetExhausted):
    kind = "grid-budget-exceeded"


class UnsupportedEnvelope(EffdistError):
    """An improper integral was requested for an integrand without a usable envelope."""

    kind = "unsupported-envelope"


class InvalidWeights(EffdistError):
    """Atom weights are negative or do not sum to one."""

    kind = "invalid-weights"


class NotNormalized(EffdistError):
    """A density does not integrate to one."""

    kind = "not-normalized"


class InvalidCharacteristic(EffdistError):
    """Evaluation revealed that a supposed characteristic function is not one."""

    kind = "invalid-phi"


class ImaginaryResidual(InvalidCharacteristic):
    kind = "imaginary-residual"


class NegativityViolation(InvalidCharacteristic):
    kind = "negativity-violation"


class BranchCut(EffdistError):
    """A complex logarithm enclosure touches the negative real axis."""

    kind = "branch-cut"


class SpecError(EffdistError, ValueError):
    """Malformed distribution / characteristic-function / test-function spec."""

    kind = "parse-error"
