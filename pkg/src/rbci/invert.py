"""Analytic inversion of randomization tests into confidence intervals.

Viewed as a function of the hypothesized constant effect, the one-sided
randomization p-value is a step function: each alternative assignment
contributes a jump of height ``1/|Z|`` wherever its recomputed statistic
crosses the observed value. The statistic is affine in the effect for the
difference in means and a ratio with quadratic radicand for the
studentized t, so every crossing is a root of a linear or quadratic
equation. This module solves those roots, classifies each crossing's
direction, rebuilds the step function from the sorted jumps, and squeezes
confidence bounds so that every effect value strictly outside the returned
interval has a p-value strictly below the level. Because the recovered
function may rise and fall, the squeeze advances one jump at a time
instead of bisecting.

Counting convention: statistic values within a relative tolerance of 1e-9
of the observed value are treated as ties and satisfy both the ``>=`` and
``<=`` indicator events. This makes the directly counted p-value agree
with the recovered step function at the jump points themselves, where the
crossing assignment's statistic equals the observed one exactly in real
arithmetic but not in floating point.
"""

from __future__ import annotations

import math
from bisect import bisect_left
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np

from .design import ReferenceSet, as_assignment
from .errors import (
    CrossedBounds,
    DegenerateVariance,
    EmptyInterval,
    EpsilonTooLarge,
    InternalInconsistency,
    InvalidDesign,
)
from .stats import (
    Statistic,
    VARIANCE_FLOOR,
    difference_in_means,
    evaluate_statistic,
    studentized_t,
    t_decomposition,
)

SIDES = ("greater", "less")
ALTERNATIVES = ("greater", "less", "two-sided")

# Roots closer than this are aggregated into one jump point. Distinct
# assignments can share a root analytically; floating point makes the
# shared value merely nearly equal.
ROOT_TIE_REL = 1e-9
ROOT_TIE_ABS = 1e-12

# Relative threshold below which quadratic coefficients count as zero.
COEFF_EPS = 1e-12

# Statistic values this close (relative) to the observed value count as ties.
COUNT_TIE_REL = 1e-9

# A same-assignment root pair tighter than this (relative to the location)
# is an up-down spike below float resolution; it nets to zero and is dropped.
PAIR_FLOOR_REL = 1e-8

# Probe offset for classifying an assignment with a single crossing,
# relative to the crossing's location.
SINGLE_ROOT_PROBE_REL = 1e-3


# --------------------------------------------------------------------- #
# Result types
# --------------------------------------------------------------------- #


@dataclass(frozen=True)
class Hypothesis:
    """Constant-effect null value plus the alternative's direction."""

    theta: float
    alternative: str = "two-sided"

    def __post_init__(self) -> None:
        if not math.isfinite(self.theta):
            raise InvalidDesign("hypothesized effect must be finite")
        if self.alternative not in ALTERNATIVES:
            raise InvalidDesign(f"alternative must be one of {ALTERNATIVES}")


@dataclass(frozen=True)
class JumpPoint:
    """A location where the p-value function jumps, with its net direction.

    ``direction`` is the signed number of indicator flips aggregated over
    the assignments whose crossing lands at ``theta``; entries with a net
    direction of zero are dropped during collection, so it is never 0 here.
    """

    theta: float
    direction: int

    def __post_init__(self) -> None:
        if self.direction == 0:
            raise InternalInconsistency("aggregated jump direction cannot be 0")


@dataclass(frozen=True)
class PValueStepFunction:
    """One-sided randomization p-value as an exact step function.

    ``interval_values[k]`` is the p-value on the open interval between
    jump ``k-1`` and jump ``k`` (with the unbounded end intervals at the
    extremes), stored as exact rationals over ``denominator``. At a jump
    point itself the crossing assignment ties the observed statistic, so
    the event holds on both sides of its own jump and the value is the
    larger of the two adjacent interval values.
    """

    jumps: tuple[JumpPoint, ...]
    interval_values: tuple[Fraction, ...]
    side: str
    denominator: int
    base_probe: float = 0.0

    def __post_init__(self) -> None:
        if self.side not in SIDES:
            raise InvalidDesign(f"side must be one of {SIDES}")
        if len(self.interval_values) != len(self.jumps) + 1:
            raise InternalInconsistency("need one interval value per interval")
        for v in self.interval_values:
            if v < 0 or v > 1 or (v * self.denominator).denominator != 1:
                raise InternalInconsistency(
                    "interval values must be multiples of 1/denominator in [0, 1]"
                )
        thetas = [jp.theta for jp in self.jumps]
        if any(b <= a for a, b in zip(thetas, thetas[1:])):
            raise InternalInconsistency("jump points must be strictly increasing")

    @cached_property
    def jump_thetas(self) -> tuple[float, ...]:
        return tuple(jp.theta for jp in self.jumps)

    def evaluate(self, theta: float) -> Fraction:
        """Exact p-value at ``theta``, honoring ties at the jump points."""
        i = bisect_left(self.jump_thetas, theta)
        if i < len(self.jumps) and self.jump_thetas[i] == theta:
            return max(self.interval_values[i], self.interval_values[i + 1])
        return self.interval_values[i]

    def interval_probes(self) -> list[float]:
        """One interior point per interval: midpoints plus padded end points."""
        if not self.jumps:
            return [0.0]
        th = self.jump_thetas
        pad = _end_pad(th)
        inner = [0.5 * (a + b) for a, b in zip(th, th[1:])]
        return [th[0] - pad, *inner, th[-1] + pad]


@dataclass(frozen=True)
class IntervalDiagnostics:
    """Bookkeeping attached to a confidence interval."""

    jump_count: int
    denominator: int
    p_below_lower: Fraction | None
    p_above_upper: Fraction | None


@dataclass(frozen=True)
class ConfidenceInterval:
    """Closed confidence interval for a constant treatment effect."""

    lower: float
    upper: float
    alpha: float
    alternative: str
    diagnostics: IntervalDiagnostics

    def contains(self, theta: float) -> bool:
        return self.lower <= theta <= self.upper


# --------------------------------------------------------------------- #
# Vectorized problem setup
# --------------------------------------------------------------------- #


@dataclass
class _Problem:
    """Precomputed per-assignment coefficients for one (z, Y, refset) triple.

    For the studentized t, row ``i`` of the reference set has
    ``t_i(theta) = (a0[i] + a1[i] theta) / sqrt(b0[i] + 2 b1[i] theta
    + b2[i] theta^2)``; for the difference in means the value is affine,
    ``a0[i] + a1[i] theta``. The observed statistic is taken from the
    observed assignment's own row so that it ties itself bitwise at every
    probe.
    """

    statistic: Statistic
    m: int
    t_obs: float
    obs_index: int
    a0: np.ndarray
    a1: np.ndarray
    b0: np.ndarray | None
    b1: np.ndarray | None
    b2: np.ndarray | None

    @property
    def tie_tol(self) -> float:
        return COUNT_TIE_REL * max(1.0, abs(self.t_obs))


def _prepare(z, outcomes, refset: ReferenceSet, statistic: Statistic) -> _Problem:
    statistic = Statistic(statistic)
    z = as_assignment(z)
    y = np.asarray(outcomes, dtype=np.float64)
    if y.shape != z.shape:
        raise InvalidDesign("outcome vector length does not match the assignment")
    if not np.isfinite(y).all():
        raise InvalidDesign("outcome entries must be finite")
    if refset.n_units != z.size or refset.n_treated != int(z.sum()):
        raise InvalidDesign("assignment does not match the reference set's design")
    obs_index = refset.index_of(z)

    n = z.size
    n1 = int(z.sum())
    n0 = n - n1
    rows = refset.assignments.astype(np.float64)
    zf = z.astype(np.float64)
    # Centering leaves both statistics unchanged but avoids cancellation in
    # the one-pass sums when the outcomes have a large common offset.
    yc = y - y.mean()

    overlap = rows @ zf
    sy = rows @ yc
    ty = float(yc.sum())
    tau = sy / n1 - (ty - sy) / n0
    slope = (n1 - overlap) * (1.0 / n1 + 1.0 / n0)

    if statistic == Statistic.DIFFERENCE_IN_MEANS:
        return _Problem(
            statistic=statistic,
            m=refset.cardinality,
            t_obs=float(tau[obs_index]),
            obs_index=obs_index,
            a0=tau,
            a1=slope,
            b0=None,
            b1=None,
            b2=None,
        )

    if n1 < 2 or n0 < 2:
        raise InvalidDesign("the studentized statistic needs at least 2 units per arm")
    syy = rows @ (yc * yc)
    w = rows @ (zf * yc)
    tyy = float((yc * yc).sum())
    tzy = float((zf * yc).sum())
    d1 = n1 - overlap  # treated-arm sum of delta; the control-arm sum is -d1
    k1 = n1 * (n1 - 1)
    k0 = n0 * (n0 - 1)
    b0 = (syy - sy * sy / n1) / k1 + ((tyy - syy) - (ty - sy) ** 2 / n0) / k0
    b1 = ((sy - w) - sy * d1 / n1) / k1 + ((w - tzy) + (ty - sy) * d1 / n0) / k0
    b2 = (d1 - d1 * d1 / n1) / k1 + (d1 - d1 * d1 / n0) / k0
    if b0[obs_index] <= VARIANCE_FLOOR:
        raise DegenerateVariance(
            "observed pooled variance is zero; the studentized statistic is undefined"
        )
    t_obs = float(tau[obs_index] / math.sqrt(b0[obs_index]))
    return _Problem(
        statistic=statistic,
        m=refset.cardinality,
        t_obs=t_obs,
        obs_index=obs_index,
        a0=tau,
        a1=slope,
        b0=b0,
        b1=b1,
        b2=b2,
    )


def _values_at(problem: _Problem, theta, rows=None) -> np.ndarray:
    """Statistic values at ``theta`` for the requested rows (all by default).

    A vanishing radicand maps to +-inf (or NaN for 0/0), mirroring
    :func:`rbci.stats.evaluate_statistic`.
    """
    if rows is None:
        rows = slice(None)
    num = problem.a0[rows] + problem.a1[rows] * theta
    if problem.statistic == Statistic.DIFFERENCE_IN_MEANS:
        return num
    rad = problem.b0[rows] + 2.0 * problem.b1[rows] * theta + problem.b2[rows] * theta**2
    rad = np.maximum(rad, 0.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        return num / np.sqrt(rad)


def _count(problem: _Problem, theta: float, side: str) -> int:
    """Tie-tolerant indicator count across the whole reference set."""
    vals = _values_at(problem, theta)
    tol = problem.tie_tol
    if side == "greater":
        return int((vals >= problem.t_obs - tol).sum())
    return int((vals <= problem.t_obs + tol).sum())


def _single_probe_offsets(theta: np.ndarray) -> np.ndarray:
    return SINGLE_ROOT_PROBE_REL * np.maximum(1.0, np.abs(theta))


def _solve_roots(problem: _Problem) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """All crossing locations, as (theta, reference-set row, probe offset).

    The offset is the distance at which the owning assignment's statistic
    can be probed on either side of the crossing without reaching the
    assignment's other crossing: half the root spacing for two-root
    assignments, a scale-relative default otherwise. Rows identical to
    the observed assignment have exactly zero coefficients and drop out
    on their own.
    """
    a0, a1 = problem.a0, problem.a1
    if problem.statistic == Statistic.DIFFERENCE_IN_MEANS:
        # a1 is (n1 - overlap) * (1/n1 + 1/n0); exactly zero only for the
        # observed assignment itself, so the == 0 test is safe.
        mask = a1 != 0.0
        theta = (problem.t_obs - a0[mask]) / a1[mask]
        return theta, np.nonzero(mask)[0], _single_probe_offsets(theta)

    b0, b1, b2 = problem.b0, problem.b1, problem.b2
    if problem.t_obs == 0.0:
        # The defining equation reduces to a vanishing numerator; the
        # squared form would yield a double root and look like a tangency.
        mask = a1 != 0.0
        theta = -a0[mask] / a1[mask]
        rad = b0[mask] + 2.0 * b1[mask] * theta + b2[mask] * theta**2
        keep = np.isfinite(theta) & (rad > 0.0)
        return theta[keep], np.nonzero(mask)[0][keep], _single_probe_offsets(theta[keep])

    t2 = problem.t_obs * problem.t_obs
    qa = t2 * b2 - a1 * a1
    qb_half = t2 * b1 - a0 * a1
    qc = t2 * b0 - a0 * a0
    scale = np.maximum(
        np.maximum(np.abs(qa), 2.0 * np.abs(qb_half)), np.maximum(np.abs(qc), 1.0)
    )
    tol = COEFF_EPS * scale
    quad = np.abs(qa) > tol
    lin = ~quad & (2.0 * np.abs(qb_half) > tol)

    disc = qb_half * qb_half - qa * qc
    ok = quad & (disc >= 0.0)
    sq = np.sqrt(np.where(ok, disc, 0.0))
    q = -(qb_half + np.copysign(sq, qb_half))
    with np.errstate(divide="ignore", invalid="ignore"):
        r1 = np.where(ok, q / qa, np.nan)
        r2 = np.where(ok & (q != 0.0), qc / q, r1)
        r_lin = np.where(lin, -qc / (2.0 * qb_half), np.nan)

    def genuine(theta: np.ndarray, active: np.ndarray) -> np.ndarray:
        # A candidate is a true crossing only where the radicand is
        # positive and, squaring aside, the numerator matches the observed
        # statistic's sign.
        keep = active & np.isfinite(theta)
        rad = b0 + 2.0 * b1 * theta + b2 * theta**2
        keep &= rad > 0.0
        if problem.t_obs != 0.0:
            keep &= (a0 + a1 * theta) * problem.t_obs > 0.0
        return keep

    g1 = genuine(r1, ok)
    g2 = genuine(r2, ok)
    both = g1 & g2
    spacing = np.abs(r2 - r1)
    floor = PAIR_FLOOR_REL * np.maximum(
        1.0, np.maximum(np.abs(r1), np.abs(r2))
    )
    # An up-down pair tighter than float resolution nets to zero: drop it.
    wide = spacing > 2.0 * floor
    pair = both & wide
    only1 = g1 & ~both
    only2 = g2 & ~both
    g_lin = genuine(r_lin, lin)

    idx = np.arange(problem.m)
    theta = np.concatenate([r1[pair], r2[pair], r1[only1], r2[only2], r_lin[g_lin]])
    rows = np.concatenate([idx[pair], idx[pair], idx[only1], idx[only2], idx[g_lin]])
    half_spacing = spacing[pair] / 2.0
    offsets = np.concatenate(
        [
            half_spacing,
            half_spacing,
            _single_probe_offsets(r1[only1]),
            _single_probe_offsets(r2[only2]),
            _single_probe_offsets(r_lin[g_lin]),
        ]
    )
    return theta, rows, offsets


def _collect(problem: _Problem) -> tuple[list[JumpPoint], float | None]:
    theta, rows, offsets = _solve_roots(problem)
    if theta.size == 0:
        return [], None
    order = np.argsort(theta, kind="stable")
    theta = theta[order]
    rows = rows[order]
    offsets = offsets[order]

    gaps = np.diff(theta)
    tie = np.maximum(
        ROOT_TIE_ABS, ROOT_TIE_REL * np.maximum(np.abs(theta[:-1]), np.abs(theta[1:]))
    )
    starts = np.concatenate([[True], gaps > tie])
    cid = np.cumsum(starts) - 1
    k = int(cid[-1]) + 1
    counts = np.bincount(cid, minlength=k)
    centers = np.bincount(cid, weights=theta, minlength=k) / counts

    # Classify each crossing by probing its own assignment's statistic on
    # both sides of its own root; the indicator of an assignment changes
    # only at that assignment's crossings, so other assignments' nearby
    # roots do not constrain the offset.
    lo = _values_at(problem, theta - offsets, rows)
    hi = _values_at(problem, theta + offsets, rows)
    flips = (hi >= problem.t_obs).astype(np.int64) - (lo >= problem.t_obs)
    net = np.bincount(cid, weights=flips, minlength=k).astype(np.int64)

    jumps = [
        JumpPoint(float(t), int(j)) for t, j in zip(centers, net) if j != 0
    ]
    return jumps, (probe_epsilon([jp.theta for jp in jumps]) if jumps else None)


def _end_pad(thetas) -> float:
    """Offset past the extreme jumps into the unbounded end intervals.

    Any interior point of an end interval yields the same exact count, but
    a macroscopic offset keeps every non-crossing assignment's statistic
    well outside the tie-counting window, which a half-minimum-gap offset
    cannot guarantee when the jump set is dense.
    """
    return max(1.0, 0.1 * (thetas[-1] - thetas[0]))


def probe_epsilon(thetas) -> float:
    """Half the minimum spacing of the given jump locations.

    Probes within this offset of a location stay strictly between it and
    its neighbors. With a single location there is no spacing; fall back
    to a small offset scaled to the location itself.
    """
    arr = np.sort(np.asarray(thetas, dtype=np.float64))
    if arr.size == 0:
        raise ValueError("need at least one jump location")
    if arr.size == 1:
        return max(1.0, abs(float(arr[0]))) * 1e-3
    return float(np.diff(arr).min()) / 2.0


def validate_probe_epsilon(eps: float, thetas) -> None:
    """Raise EpsilonTooLarge unless probes at +-eps stay between neighbors."""
    if not eps > 0.0:
        raise EpsilonTooLarge("probe offset must be positive")
    arr = np.sort(np.asarray(thetas, dtype=np.float64))
    if arr.size >= 2 and eps > float(np.diff(arr).min()) / 2.0:
        raise EpsilonTooLarge(
            f"probe offset {eps} exceeds half the minimum jump spacing"
        )


# --------------------------------------------------------------------- #
# Public operations
# --------------------------------------------------------------------- #


def solve_jumps_dim(z, outcomes, z_alt) -> list[float]:
    """Crossing location of the difference in means under ``z_alt``.

    The recomputed statistic is affine in the effect, so there is at most
    one crossing. The slope vanishes only when ``z_alt`` equals ``z``, in
    which case the statistic never crosses (it is identically equal) and
    the list is empty.
    """
    z = as_assignment(z)
    z_alt = as_assignment(z_alt, int(z.sum()))
    y = np.asarray(outcomes, dtype=np.float64)
    delta = z_alt.astype(np.float64) - z.astype(np.float64)
    slope = difference_in_means(z_alt, delta)
    if slope == 0.0:
        return []
    observed = difference_in_means(z, y)
    base = difference_in_means(z_alt, y)
    return [(observed - base) / slope]


def solve_jumps_t(z, outcomes, z_alt) -> list[float]:
    """Crossing locations of the studentized t under ``z_alt`` (0, 1, or 2).

    Squaring the defining equation yields a quadratic whose roots include
    sign-flipped phantoms; only roots with a positive radicand and a
    numerator matching the observed statistic's sign are genuine
    crossings. Nearly zero leading coefficients are solved as linear, and
    an identically satisfied equation (``z_alt`` equal to ``z``) yields no
    jumps.
    """
    z = as_assignment(z)
    z_alt = as_assignment(z_alt, int(z.sum()))
    y = np.asarray(outcomes, dtype=np.float64)
    t_obs = studentized_t(z, y)
    delta = z_alt.astype(np.float64) - z.astype(np.float64)
    dec = t_decomposition(z_alt, y, delta)

    if t_obs == 0.0:
        if dec.a1 == 0.0:
            return []
        root = -dec.a0 / dec.a1
        return [root] if dec.radicand(root) > 0.0 else []

    t2 = t_obs * t_obs
    qa = t2 * dec.b2 - dec.a1 * dec.a1
    qb_half = t2 * dec.b1 - dec.a0 * dec.a1
    qc = t2 * dec.b0 - dec.a0 * dec.a0
    scale = max(abs(qa), 2.0 * abs(qb_half), abs(qc), 1.0)
    tol = COEFF_EPS * scale

    if abs(qa) <= tol:
        if 2.0 * abs(qb_half) <= tol:
            return []
        candidates = [-qc / (2.0 * qb_half)]
    else:
        disc = qb_half * qb_half - qa * qc
        if disc < 0.0:
            return []
        sq = math.sqrt(disc)
        q = -(qb_half + math.copysign(sq, qb_half))
        if q == 0.0:
            candidates = [0.0]
        else:
            candidates = [q / qa]
            if sq > 0.0:
                candidates.append(qc / q)

    roots = []
    for root in candidates:
        if not math.isfinite(root) or dec.radicand(root) <= 0.0:
            continue
        if dec.numerator(root) * t_obs <= 0.0:
            continue
        roots.append(float(root))
    return sorted(roots)


def classify_jump(z, outcomes, z_alt, theta_root: float, eps: float, statistic) -> int:
    """Direction of the indicator flip at ``theta_root`` for one assignment.

    Probes the statistic at ``theta_root +- eps`` against the observed
    value: +1 for a crossing from below to above, -1 for above to below,
    0 when the relationship does not change (phantom roots, tangential
    touches). ``eps`` must not reach past the neighboring jump locations;
    callers holding the full root set should check with
    :func:`validate_probe_epsilon`.
    """
    if not eps > 0.0:
        raise EpsilonTooLarge("probe offset must be positive")
    statistic = Statistic(statistic)
    z = as_assignment(z)
    z_alt = as_assignment(z_alt, int(z.sum()))
    y = np.asarray(outcomes, dtype=np.float64)
    delta = z_alt.astype(np.float64) - z.astype(np.float64)
    observed = evaluate_statistic(statistic, z, y)
    below = evaluate_statistic(statistic, z_alt, y + delta * (theta_root - eps))
    above = evaluate_statistic(statistic, z_alt, y + delta * (theta_root + eps))
    return int(above >= observed) - int(below >= observed)


def collect_jumps(z, outcomes, refset: ReferenceSet, statistic) -> tuple[list[JumpPoint], float | None]:
    """Sorted aggregated jump points across the whole reference set.

    Solves every assignment's crossings, merges roots closer than the tie
    tolerance into one location (their mean), classifies each member
    crossing by probing the owning assignment's statistic on both sides
    of its own root, sums the directions, and drops locations whose net
    direction is zero. Returns the jump list plus half the minimum
    spacing of the returned locations (None when there are no jumps),
    which bounds how far probes may stray between neighboring jumps.
    """
    return _collect(_prepare(z, outcomes, refset, Statistic(statistic)))


def _recover(
    problem: _Problem,
    side: str,
    jumps: list[JumpPoint],
) -> PValueStepFunction:
    if side not in SIDES:
        raise InvalidDesign(f"side must be one of {SIDES}")
    m = problem.m
    if not jumps:
        base = Fraction(_count(problem, 0.0, side), m)
        return PValueStepFunction(
            jumps=(), interval_values=(base,), side=side, denominator=m, base_probe=0.0
        )
    thetas = [jp.theta for jp in jumps]
    probe = thetas[0] - _end_pad(thetas)
    sign = 1 if side == "greater" else -1
    values = [Fraction(_count(problem, probe, side), m)]
    for jp in jumps:
        values.append(values[-1] + Fraction(sign * jp.direction, m))
    for v in values:
        if v < 0 or v > 1:
            raise InternalInconsistency(
                "recovered p-value left [0, 1]; jump classification is inconsistent"
            )
    return PValueStepFunction(
        jumps=tuple(jumps),
        interval_values=tuple(values),
        side=side,
        denominator=m,
        base_probe=probe,
    )


def recover_p_function(
    z,
    outcomes,
    refset: ReferenceSet,
    statistic,
    side: str,
    jumps: list[JumpPoint] | None = None,
) -> PValueStepFunction:
    """Rebuild the one-sided p-value step function from the jump points.

    The base value is counted directly at a probe below the first jump
    (recorded as ``base_probe``; the null effect 0 when there are no
    jumps); each subsequent interval value adds the jump's direction over
    the reference-set size, with the sign flipped for the ``less`` side.
    The step function is constant below the first jump, so any probe there
    yields the same count; a scale-aware offset keeps it clear of
    floating-point tie windows. Pass ``jumps`` from :func:`collect_jumps`
    to avoid recomputing them.
    """
    problem = _prepare(z, outcomes, refset, Statistic(statistic))
    if jumps is None:
        jumps, _ = _collect(problem)
    return _recover(problem, side, list(jumps))


def _squeeze_lower_index(values, alpha) -> int | None:
    """First interval index at or above alpha; None if already at the base."""
    if values[0] >= alpha:
        return None
    for k in range(1, len(values)):
        if values[k] >= alpha:
            return k
    raise EmptyInterval(
        f"every interval value is below alpha={alpha}; "
        f"max p-value {max(values)} over {len(values)} intervals"
    )


def _squeeze_upper_index(values, alpha) -> int | None:
    """Last interval index at or above alpha; None if the tail is already there."""
    if values[-1] >= alpha:
        return None
    best = None
    for k in range(len(values)):
        if values[k] >= alpha:
            best = k
    if best is None:
        raise EmptyInterval(
            f"every interval value is below alpha={alpha}; "
            f"max p-value {max(values)} over {len(values)} intervals"
        )
    return best


def _check_alpha(alpha) -> None:
    if not 0 < alpha < 1:
        raise InvalidDesign("alpha must lie strictly between 0 and 1")


def squeeze_lower(pfun: PValueStepFunction, alpha) -> float:
    """Largest jump point below which the p-value stays strictly under alpha.

    Walks the ``greater``-side step function from the left and stops at
    the first interval whose value reaches alpha; the bound is that
    interval's left edge. Returns ``-inf`` when the base interval is
    already at alpha. Stopping at ``>= alpha`` (not ``>``) keeps the
    guarantee strict even on intervals whose value equals alpha exactly.
    """
    _check_alpha(alpha)
    if pfun.side != "greater":
        raise InvalidDesign("squeeze_lower needs a greater-side step function")
    k = _squeeze_lower_index(pfun.interval_values, alpha)
    return -math.inf if k is None else pfun.jumps[k - 1].theta


def squeeze_upper(pfun: PValueStepFunction, alpha) -> float:
    """Mirror of :func:`squeeze_lower` for the ``less`` side: walks from the
    right and returns the smallest jump point above which the p-value stays
    strictly under alpha, or ``+inf`` when the last interval reaches alpha.
    """
    _check_alpha(alpha)
    if pfun.side != "less":
        raise InvalidDesign("squeeze_upper needs a less-side step function")
    k = _squeeze_upper_index(pfun.interval_values, alpha)
    return math.inf if k is None else pfun.jumps[k].theta


def confidence_interval(
    z,
    outcomes,
    refset: ReferenceSet,
    statistic,
    alpha=0.05,
    alternative: str = "two-sided",
) -> ConfidenceInterval:
    """Confidence interval for a constant effect by analytic test inversion.

    ``greater`` yields ``[lower, inf)`` at level ``1 - alpha``, ``less``
    yields ``(-inf, upper]``, and ``two-sided`` combines the two one-sided
    bounds at ``alpha / 2`` each. The jump set is shared between sides,
    so a two-sided interval costs one collection pass plus two recoveries.

    Raises
    ------
    EmptyInterval
        If a squeeze rejects every candidate effect.
    CrossedBounds
        If the two-sided bounds come out in the wrong order.
    """
    _check_alpha(alpha)
    if alternative not in ALTERNATIVES:
        raise InvalidDesign(f"alternative must be one of {ALTERNATIVES}")
    problem = _prepare(z, outcomes, refset, Statistic(statistic))
    jumps, _ = _collect(problem)

    p_below = p_above = None
    if alternative == "greater":
        pfun = _recover(problem, "greater", jumps)
        k = _squeeze_lower_index(pfun.interval_values, alpha)
        lower = -math.inf if k is None else jumps[k - 1].theta
        upper = math.inf
        if k is not None:
            p_below = pfun.interval_values[k - 1]
    elif alternative == "less":
        pfun = _recover(problem, "less", jumps)
        k = _squeeze_upper_index(pfun.interval_values, alpha)
        lower = -math.inf
        upper = math.inf if k is None else jumps[k].theta
        if k is not None:
            p_above = pfun.interval_values[k + 1]
    else:
        half = alpha / 2
        p_greater = _recover(problem, "greater", jumps)
        p_less = _recover(problem, "less", jumps)
        kl = _squeeze_lower_index(p_greater.interval_values, half)
        ku = _squeeze_upper_index(p_less.interval_values, half)
        lower = -math.inf if kl is None else jumps[kl - 1].theta
        upper = math.inf if ku is None else jumps[ku].theta
        if lower > upper:
            raise CrossedBounds(
                f"lower bound {lower} exceeds upper bound {upper}"
            )
        if kl is not None:
            p_below = p_greater.interval_values[kl - 1]
        if ku is not None:
            p_above = p_less.interval_values[ku + 1]

    return ConfidenceInterval(
        lower=float(lower),
        upper=float(upper),
        alpha=float(alpha),
        alternative=alternative,
        diagnostics=IntervalDiagnostics(
            jump_count=len(jumps),
            denominator=problem.m,
            p_below_lower=p_below,
            p_above_upper=p_above,
        ),
    )


def p_value(z, outcomes, refset: ReferenceSet, statistic, hypothesis: Hypothesis) -> Fraction:
    """Single-effect randomization p-value by direct counting (no inversion).

    One-sided alternatives count the tie-tolerant indicator across the
    reference set; the two-sided p-value is ``min(1, 2 min(p+, p-))``.
    """
    problem = _prepare(z, outcomes, refset, Statistic(statistic))
    theta = hypothesis.theta
    if hypothesis.alternative == "greater":
        return Fraction(_count(problem, theta, "greater"), problem.m)
    if hypothesis.alternative == "less":
        return Fraction(_count(problem, theta, "less"), problem.m)
    p_hi = Fraction(_count(problem, theta, "greater"), problem.m)
    p_lo = Fraction(_count(problem, theta, "less"), problem.m)
    return min(Fraction(1), 2 * min(p_hi, p_lo))
