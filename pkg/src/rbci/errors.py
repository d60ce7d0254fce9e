"""Exception types shared across the package."""


class RbciError(Exception):
    """Base class for all errors raised by this package."""


class InvalidDesign(RbciError):
    """An assignment vector or design parameter violates the experiment's design."""


class CapExceeded(RbciError):
    """Exhaustive enumeration would exceed the configured assignment cap.

    Callers should fall back to Monte Carlo sampling of the assignment space.
    """


class DegenerateVariance(RbciError):
    """The pooled variance is zero (or numerically indistinguishable from zero).

    The studentized statistic is undefined; the difference in means still works.
    """


class EpsilonTooLarge(RbciError):
    """A probe offset is too large for the spacing of the jump points."""


class EmptyInterval(RbciError):
    """Every candidate effect value was rejected; no confidence interval exists.

    Arises only from pathological data or very small Monte Carlo reference
    sets, so it is surfaced as an error rather than a degenerate interval.
    """


class CrossedBounds(RbciError):
    """The squeezed lower bound exceeds the squeezed upper bound."""


class InternalInconsistency(RbciError):
    """An internal invariant failed; indicates a bug, not a user error."""
