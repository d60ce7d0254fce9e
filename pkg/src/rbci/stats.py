"""Test statistics and their exact behavior under imputed outcomes.

Under a constant-effect null, the outcome vector a hypothetical assignment
``z_alt`` would have produced is ``Y + delta * theta`` with
``delta = z_alt - z``. Both supported statistics then have closed forms in
``theta``: the difference in means is affine, and the studentized t is a
ratio ``(a0 + a1*theta) / sqrt(b0 + 2*b1*theta + b2*theta**2)`` whose five
coefficients :func:`t_decomposition` computes exactly.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .design import as_assignment
from .errors import DegenerateVariance, InternalInconsistency, InvalidDesign

#: Pooled variances at or below this (in squared outcome units) count as zero.
VARIANCE_FLOOR = 1e-30


class Statistic(str, enum.Enum):
    """Supported test statistics."""

    DIFFERENCE_IN_MEANS = "dim"
    STUDENTIZED_T = "t"


def _split_arms(z, values) -> tuple[np.ndarray, np.ndarray]:
    z = as_assignment(z)
    values = np.asarray(values, dtype=np.float64)
    if values.shape != z.shape:
        raise InvalidDesign("outcome vector length does not match the assignment")
    if not np.isfinite(values).all():
        raise InvalidDesign("outcome entries must be finite")
    mask = z == 1
    return values[mask], values[~mask]


def difference_in_means(z, values) -> float:
    """Treated-arm mean minus control-arm mean of ``values`` under ``z``."""
    treated, control = _split_arms(z, values)
    return float(treated.mean() - control.mean())


def pooled_bilinear_variance(z, a, b) -> float:
    """Pooled two-arm bilinear form; equals the pooled variance when ``a is b``.

    Computes, with ``m1``/``m0`` the arm sizes,

    ``sum_T (a - mean_T a)(b - mean_T b) / (m1 (m1-1))
      + sum_C (a - mean_C a)(b - mean_C b) / (m0 (m0-1))``

    which is the unique symmetric bilinear form whose diagonal is the
    pooled variance of the two-sample t statistic. Requires at least two
    units per arm.
    """
    ta, ca = _split_arms(z, a)
    tb, cb = _split_arms(z, b)
    m1, m0 = ta.size, ca.size
    if m1 < 2 or m0 < 2:
        raise InvalidDesign("pooled variance needs at least 2 units per arm")
    top = ((ta - ta.mean()) * (tb - tb.mean())).sum() / (m1 * (m1 - 1))
    bot = ((ca - ca.mean()) * (cb - cb.mean())).sum() / (m0 * (m0 - 1))
    return float(top + bot)


def studentized_t(z, values) -> float:
    """Two-sample studentized t statistic (unpooled, design-based variance).

    Raises
    ------
    DegenerateVariance
        If the pooled variance is zero within :data:`VARIANCE_FLOOR`; the
        statistic is undefined and the difference in means should be used.
    """
    tau = difference_in_means(z, values)
    s2 = pooled_bilinear_variance(z, values, values)
    if s2 <= VARIANCE_FLOOR:
        raise DegenerateVariance(
            "pooled variance is zero; the studentized statistic is undefined"
        )
    return tau / math.sqrt(s2)


@dataclass(frozen=True)
class TDecomposition:
    """Coefficients of the studentized t statistic under imputed outcomes.

    For every ``theta`` with positive radicand,

    ``t(z_alt, Y + delta*theta) == (a0 + a1*theta)
                                   / sqrt(b0 + 2*b1*theta + b2*theta**2)``.
    """

    a0: float
    a1: float
    b0: float
    b1: float
    b2: float

    def __post_init__(self) -> None:
        scale = max(self.b0 * self.b2, 1.0)
        if self.b0 < 0 or self.b2 < 0:
            raise InternalInconsistency("diagonal bilinear coefficients must be >= 0")
        if self.b1 * self.b1 > self.b0 * self.b2 + 1e-12 * scale:
            raise InternalInconsistency("bilinear coefficients violate Cauchy-Schwarz")

    def numerator(self, theta: float) -> float:
        return self.a0 + self.a1 * theta

    def radicand(self, theta: float) -> float:
        return self.b0 + 2.0 * self.b1 * theta + self.b2 * theta * theta

    def value(self, theta: float) -> float:
        """Statistic value at ``theta``; +-inf on a zero radicand, NaN on 0/0."""
        num = self.numerator(theta)
        rad = self.radicand(theta)
        if rad > 0.0:
            return num / math.sqrt(rad)
        if num == 0.0:
            return math.nan
        return math.copysign(math.inf, num)


def t_decomposition(z_alt, values, delta) -> TDecomposition:
    """Exact coefficients of the studentized t under outcomes ``values + delta*theta``.

    ``delta`` is the elementwise difference between the alternative and the
    observed assignment, so its entries lie in {-1, 0, 1}.
    """
    delta = np.asarray(delta, dtype=np.float64)
    if not np.isin(delta, (-1.0, 0.0, 1.0)).all():
        raise InvalidDesign("delta entries must be -1, 0, or 1")
    return TDecomposition(
        a0=difference_in_means(z_alt, values),
        a1=difference_in_means(z_alt, delta),
        b0=pooled_bilinear_variance(z_alt, values, values),
        b1=pooled_bilinear_variance(z_alt, values, delta),
        b2=pooled_bilinear_variance(z_alt, delta, delta),
    )


def evaluate_statistic(statistic: Statistic, z_alt, values) -> float:
    """Evaluate ``statistic``, mapping a degenerate variance to +-inf or NaN.

    Counting and crossing-classification code needs a total function: when
    the pooled variance vanishes the studentized t is taken as ``inf`` with
    the numerator's sign, or NaN for 0/0. NaN compares False against any
    threshold, so such evaluations never satisfy an indicator event.
    """
    if statistic == Statistic.DIFFERENCE_IN_MEANS:
        return difference_in_means(z_alt, values)
    tau = difference_in_means(z_alt, values)
    s2 = pooled_bilinear_variance(z_alt, values, values)
    if s2 > 0.0:
        return tau / math.sqrt(s2)
    if tau == 0.0:
        return math.nan
    return math.copysign(math.inf, tau)
