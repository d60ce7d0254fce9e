"""Repeated-sampling studies of the interval construction.

Two study designs are supported. The exhaustive sweep iterates over every
possible observed assignment of the bundled 8-unit experiment, whose
assignment space (70 vectors) is small enough to enumerate, and reports
exact operating characteristics. The replication study redraws a science
table, an observed assignment, and a Monte Carlo reference set per
replication, and reports empirical coverage, rejection rate, and mean wall
clock for one p-value and one interval.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field

import numpy as np

from .design import enumerate_cre, sample_cre
from .errors import EmptyInterval, InvalidDesign
from .invert import Hypothesis, confidence_interval, p_value
from .stats import Statistic

DGPS = ("example1", "normal-unit-effect")

#: Control-arm potential outcomes of the bundled 8-unit demonstration
#: experiment (treated outcomes sit one unit higher).
EXAMPLE1_Y0 = (0.14, 1.12, 0.80, 1.80, 0.90, 0.44, 1.13, 0.53)


@dataclass(frozen=True)
class ScienceTable:
    """Full potential-outcome table: one control and one treated value per unit."""

    y0: np.ndarray
    y1: np.ndarray

    def __post_init__(self) -> None:
        y0 = np.asarray(self.y0, dtype=np.float64)
        y1 = np.asarray(self.y1, dtype=np.float64)
        if y0.shape != y1.shape or y0.ndim != 1:
            raise InvalidDesign("potential outcome vectors must share one length")
        if not (np.isfinite(y0).all() and np.isfinite(y1).all()):
            raise InvalidDesign("potential outcomes must be finite")
        object.__setattr__(self, "y0", y0)
        object.__setattr__(self, "y1", y1)

    @property
    def n_units(self) -> int:
        return self.y0.size

    def observed(self, z) -> np.ndarray:
        """Outcome vector revealed by assignment ``z``."""
        z = np.asarray(z)
        return np.where(z == 1, self.y1, self.y0)


def dgp_example1() -> ScienceTable:
    """The bundled 8-unit experiment with a constant unit effect."""
    y0 = np.array(EXAMPLE1_Y0)
    return ScienceTable(y0=y0, y1=y0 + 1.0)


def dgp_normal(n: int, seed) -> ScienceTable:
    """Standard-normal control outcomes with a constant unit effect.

    ``seed`` may be anything ``numpy.random.default_rng`` accepts (an
    integer or a SeedSequence); identical seeds reproduce the table.
    """
    if n < 4:
        raise InvalidDesign("need at least 4 units")
    rng = np.random.default_rng(seed)
    y0 = rng.standard_normal(n)
    return ScienceTable(y0=y0, y1=y0 + 1.0)


@dataclass(frozen=True)
class SimulationConfig:
    """Parameters of one replication study."""

    n: int
    n1: int
    dgp: str
    statistic: Statistic = Statistic.STUDENTIZED_T
    alpha: float = 0.05
    alternative: str = "two-sided"
    refset_mode: str = "monte-carlo"
    n_fisher: int = 10_000
    n_rep: int = 1_000
    seed: int = 0
    true_theta: float = 1.0

    def __post_init__(self) -> None:
        if self.dgp not in DGPS:
            raise InvalidDesign(f"dgp must be one of {DGPS}")
        if self.dgp == "example1" and (self.n, self.n1) != (8, 4):
            raise InvalidDesign("the example1 table fixes n=8 and n1=4")
        if self.true_theta != 1.0:
            raise InvalidDesign("both generators have a unit effect; true_theta must be 1")
        if not (0 < self.n1 < self.n):
            raise InvalidDesign("need 0 < n1 < n")
        if not (0 < self.alpha < 1):
            raise InvalidDesign("alpha must lie strictly between 0 and 1")
        if self.alternative not in ("greater", "less", "two-sided"):
            raise InvalidDesign("unknown alternative")
        if self.refset_mode not in ("exhaustive", "monte-carlo"):
            raise InvalidDesign("unknown reference-set mode")
        if self.n_rep < 1 or self.n_fisher < 1:
            raise InvalidDesign("n_rep and n_fisher must be positive")


@dataclass
class SimulationReport:
    """Aggregated results of a sweep or replication study.

    ``coverage`` and ``type1_error`` are multiples of ``1/n_rep``.
    ``coverage_two_sided`` is populated only by the exhaustive sweep,
    where it records the two-sided interval's coverage alongside the
    one-sided lower-bound coverage in ``coverage`` (the two differ when
    the p-value function is discrete; see :func:`exact_sweep_example1`).
    """

    coverage: float
    type1_error: float
    mean_seconds_pvalue: float
    mean_seconds_rbci: float
    n_rep: int
    empty_intervals: int = 0
    boundary_disagreements: int = 0
    coverage_two_sided: float | None = None
    per_replication: list[dict] | None = field(default=None, repr=False)

    def to_dict(self, include_details: bool = False) -> dict:
        out = {
            "coverage": self.coverage,
            "type1_error": self.type1_error,
            "mean_seconds_pvalue": self.mean_seconds_pvalue,
            "mean_seconds_rbci": self.mean_seconds_rbci,
            "n_rep": self.n_rep,
            "empty_intervals": self.empty_intervals,
            "boundary_disagreements": self.boundary_disagreements,
            "coverage_two_sided": self.coverage_two_sided,
        }
        if include_details and self.per_replication is not None:
            out["per_replication"] = self.per_replication
        return out

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(**kwargs))


REPORT_CSV_HEADER = "n,n_fisher,coverage,type1,time_pvalue_s,time_rbci_s"


def report_csv_row(report: SimulationReport, n: int, n_fisher: int) -> str:
    """One row of the summary table, matching :data:`REPORT_CSV_HEADER`."""
    return (
        f"{n},{n_fisher},{report.coverage!r},{report.type1_error!r},"
        f"{report.mean_seconds_pvalue!r},{report.mean_seconds_rbci!r}"
    )


def exact_sweep_example1(
    alpha: float = 0.05,
    alternative: str = "two-sided",
    statistic: Statistic = Statistic.STUDENTIZED_T,
) -> SimulationReport:
    """Exact operating characteristics over all 70 possible observed assignments.

    For each assignment the observed outcomes follow from the bundled
    science table; the test and interval are computed against the full
    assignment space, so every reported fraction is exact, not a Monte
    Carlo estimate.

    For the two-sided alternative, two coverage figures coexist because
    the p-value function is discrete: ``coverage`` is the fraction of
    assignments whose one-sided ``1 - alpha`` lower-bound interval covers
    the unit effect, and ``coverage_two_sided`` is the same fraction for
    the two-sided interval built from two ``alpha/2`` bounds. The
    rejection rate ``type1_error`` uses the two-sided p-value at the true
    effect. For one-sided alternatives, ``coverage`` refers to the
    requested one-sided interval and ``coverage_two_sided`` is None.
    """
    statistic = Statistic(statistic)
    table = dgp_example1()
    refset = enumerate_cre(8, 4)
    hypothesis = Hypothesis(1.0, alternative)

    covered = 0
    covered_two = 0
    rejected = 0
    disagreements = 0
    seconds_p = []
    seconds_ci = []
    for z in refset.assignments:
        y = table.observed(z)

        start = time.perf_counter()
        p = p_value(z, y, refset, statistic, hypothesis)
        seconds_p.append(time.perf_counter() - start)

        start = time.perf_counter()
        ci = confidence_interval(z, y, refset, statistic, alpha, alternative)
        seconds_ci.append(time.perf_counter() - start)

        reject = p <= alpha
        rejected += reject
        if alternative == "two-sided":
            lower_only = confidence_interval(z, y, refset, statistic, alpha, "greater")
            covered += lower_only.contains(1.0)
            covered_two += ci.contains(1.0)
            disagreements += ci.contains(1.0) == reject
        else:
            covered += ci.contains(1.0)
            disagreements += ci.contains(1.0) == reject

    m = refset.cardinality
    return SimulationReport(
        coverage=covered / m,
        type1_error=rejected / m,
        mean_seconds_pvalue=float(np.mean(seconds_p)),
        mean_seconds_rbci=float(np.mean(seconds_ci)),
        n_rep=m,
        boundary_disagreements=disagreements,
        coverage_two_sided=(covered_two / m if alternative == "two-sided" else None),
    )


def _draw_assignment(rng: np.random.Generator, n: int, n1: int) -> np.ndarray:
    z = np.zeros(n, dtype=np.int8)
    z[rng.permutation(n)[:n1]] = 1
    return z


def run_replications(config: SimulationConfig, keep_details: bool = False) -> SimulationReport:
    """Repeated-sampling study driven by a single master seed.

    Each replication draws a fresh science table (for the normal
    generator) and a fresh observed assignment, builds its own reference
    set, and records whether the interval covered the true effect and
    whether the test rejected it. Per-replication randomness comes from
    counter-based children of the master seed, so results are reproducible
    and replications are independent of execution order. Wall-clock
    figures cover reference-set construction plus the computation itself,
    excluding outcome generation; an exhaustive reference set is built
    once and reused at no per-replication cost.

    A replication whose squeeze rejects everything counts as not covered
    (and is tallied in ``empty_intervals``) rather than aborting the run.
    """
    rs = None
    if config.refset_mode == "exhaustive":
        rs = enumerate_cre(config.n, config.n1)
    fixed_table = dgp_example1() if config.dgp == "example1" else None
    hypothesis = Hypothesis(config.true_theta, config.alternative)

    covered = 0
    rejected = 0
    empties = 0
    disagreements = 0
    seconds_p = []
    seconds_ci = []
    details: list[dict] = []

    children = np.random.SeedSequence(config.seed).spawn(config.n_rep)
    for child in children:
        seq_table, seq_assign, seq_refset = child.spawn(3)
        table = fixed_table or dgp_normal(config.n, seq_table)
        z = _draw_assignment(np.random.default_rng(seq_assign), config.n, config.n1)
        y = table.observed(z)

        start = time.perf_counter()
        if rs is not None:
            refset = rs
            ref_seconds = 0.0
        else:
            refset = sample_cre(
                config.n,
                config.n1,
                config.n_fisher,
                seed=int(seq_refset.generate_state(1, np.uint64)[0]),
                observed=z,
            )
            ref_seconds = time.perf_counter() - start

        start = time.perf_counter()
        p = p_value(z, y, refset, config.statistic, hypothesis)
        seconds_p.append(ref_seconds + time.perf_counter() - start)

        start = time.perf_counter()
        try:
            ci = confidence_interval(
                z, y, refset, config.statistic, config.alpha, config.alternative
            )
            hit = ci.contains(config.true_theta)
        except EmptyInterval:
            ci = None
            hit = False
            empties += 1
        seconds_ci.append(ref_seconds + time.perf_counter() - start)

        reject = p <= config.alpha
        covered += hit
        rejected += reject
        disagreements += hit == reject
        if keep_details:
            details.append(
                {
                    "covered": bool(hit),
                    "rejected": bool(reject),
                    "p_value": float(p),
                    "lower": None if ci is None else ci.lower,
                    "upper": None if ci is None else ci.upper,
                }
            )

    return SimulationReport(
        coverage=covered / config.n_rep,
        type1_error=rejected / config.n_rep,
        mean_seconds_pvalue=float(np.mean(seconds_p)),
        mean_seconds_rbci=float(np.mean(seconds_ci)),
        n_rep=config.n_rep,
        empty_intervals=empties,
        boundary_disagreements=disagreements,
        per_replication=details if keep_details else None,
    )
