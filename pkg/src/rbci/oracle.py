"""Brute-force evaluation of randomization p-value functions.

Test scaffolding only: everything here recomputes statistics from scratch,
sharing no code with the analytic inversion path, so that agreement between
the two is meaningful evidence of correctness. Outcomes under an
alternative assignment are rebuilt unit by unit from the three-case rule
(unchanged where the arms agree, shifted up where a control unit becomes
treated, shifted down where a treated unit becomes control), and the
statistics are recomputed from those raw outcomes with ordinary two-pass
mean/variance formulas rather than the production code's coefficient
algebra.

The tie convention matches the production contract: statistic values
within a relative 1e-9 of the observed value satisfy both one-sided
indicator events.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .design import ReferenceSet, as_assignment
from .errors import DegenerateVariance, InvalidDesign
from .invert import PValueStepFunction
from .stats import Statistic

_TIE_REL = 1e-9


def _imputed_matrix(z, outcomes, assignments, theta: float) -> np.ndarray:
    """Outcomes each assignment would have produced, one row per assignment."""
    unchanged = assignments == z
    newly_treated = (assignments == 1) & (z == 0)
    return np.where(
        unchanged, outcomes, np.where(newly_treated, outcomes + theta, outcomes - theta)
    )


def _statistic_rows(statistic: Statistic, assignments, values) -> np.ndarray:
    """Statistic of each row's assignment on each row's outcome vector.

    Zero pooled variance maps to +-inf (or NaN for 0/0) so comparisons
    stay total; NaN satisfies no indicator event.
    """
    treated = assignments == 1
    n1 = int(treated[0].sum())
    n0 = assignments.shape[1] - n1
    sum_t = np.where(treated, values, 0.0).sum(axis=1)
    sum_c = values.sum(axis=1) - sum_t
    mean_t = sum_t / n1
    mean_c = sum_c / n0
    gap = mean_t - mean_c
    if statistic == Statistic.DIFFERENCE_IN_MEANS:
        return gap
    if min(n1, n0) < 2:
        raise InvalidDesign("the studentized statistic needs at least 2 units per arm")
    dev_t = np.where(treated, values - mean_t[:, None], 0.0)
    dev_c = np.where(treated, 0.0, values - mean_c[:, None])
    se2 = (dev_t**2).sum(axis=1) / (n1 - 1) / n1 + (dev_c**2).sum(axis=1) / (n0 - 1) / n0
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(se2 > 0.0, gap / np.sqrt(np.maximum(se2, 0.0)), gap / 0.0)


def _observed_statistic(statistic: Statistic, z, outcomes) -> float:
    value = float(_statistic_rows(statistic, z[None, :], outcomes[None, :])[0])
    if statistic == Statistic.STUDENTIZED_T and not math.isfinite(value):
        raise DegenerateVariance("observed pooled variance is zero")
    return value


@dataclass(frozen=True)
class ProbeGrid:
    """Sorted effect values at which to evaluate the p-value function."""

    thetas: tuple[float, ...]
    provenance: str = "user"

    def __post_init__(self) -> None:
        if not self.thetas:
            raise InvalidDesign("probe grid must be nonempty")
        if not all(math.isfinite(t) for t in self.thetas):
            raise InvalidDesign("probe locations must be finite")
        if any(b <= a for a, b in zip(self.thetas, self.thetas[1:])):
            raise InvalidDesign("probe locations must be strictly increasing")

    def __len__(self) -> int:
        return len(self.thetas)

    @classmethod
    def midpoints_of(cls, pfun: PValueStepFunction) -> "ProbeGrid":
        """One probe inside every interval of a recovered step function."""
        return cls(tuple(pfun.interval_probes()), provenance="midpoints")

    @classmethod
    def jump_points_of(cls, pfun: PValueStepFunction) -> "ProbeGrid":
        """The jump locations themselves."""
        return cls(pfun.jump_thetas, provenance="jump-points")

    @classmethod
    def uniform(cls, lo: float, hi: float, count: int) -> "ProbeGrid":
        """Evenly spaced probes, the exhaustive-search comparator."""
        if count < 1 or not lo < hi:
            raise InvalidDesign("need count >= 1 and lo < hi")
        return cls(tuple(np.linspace(lo, hi, count)), provenance="uniform")


def oracle_p(z, outcomes, refset: ReferenceSet, statistic, theta: float, side: str) -> Fraction:
    """Directly counted one-sided p-value at a single effect value."""
    if side not in ("greater", "less"):
        raise InvalidDesign("side must be 'greater' or 'less'")
    statistic = Statistic(statistic)
    z = as_assignment(z)
    y = np.asarray(outcomes, dtype=np.float64)
    observed = _observed_statistic(statistic, z, y)
    tol = _TIE_REL * max(1.0, abs(observed))
    imputed = _imputed_matrix(z, y, refset.assignments, theta)
    values = _statistic_rows(statistic, refset.assignments, imputed)
    if side == "greater":
        count = int((values >= observed - tol).sum())
    else:
        count = int((values <= observed + tol).sum())
    return Fraction(count, refset.cardinality)


def oracle_sweep(z, outcomes, refset: ReferenceSet, statistic, grid: ProbeGrid, side: str) -> list[Fraction]:
    """:func:`oracle_p` at every probe of the grid, in grid order."""
    return [oracle_p(z, outcomes, refset, statistic, t, side) for t in grid.thetas]
