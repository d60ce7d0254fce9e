"""Assignment space of a two-arm completely randomized experiment.

An assignment vector is a length-``n`` 0/1 array with exactly ``n1`` ones.
A :class:`ReferenceSet` is the collection of assignments a randomization
test averages over: either the full space of ``C(n, n1)`` vectors or a
seeded Monte Carlo sample that always contains the observed assignment.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import chain, combinations

import numpy as np

from .errors import CapExceeded, InvalidDesign

#: Default ceiling on the number of assignments enumerate_cre will materialize.
DEFAULT_ENUMERATION_CAP = 10_000_000

_MODES = ("exhaustive", "monte-carlo")


def as_assignment(z, n_treated: int | None = None) -> np.ndarray:
    """Validate and normalize an assignment vector to an int8 array.

    Parameters
    ----------
    z : array-like
        Sequence of 0/1 treatment indicators.
    n_treated : int, optional
        If given, the required number of treated units.

    Raises
    ------
    InvalidDesign
        If entries are not binary, either arm is empty, or the treated
        count does not match ``n_treated``.
    """
    arr = np.asarray(z)
    if arr.ndim != 1 or arr.size < 2:
        raise InvalidDesign("assignment vector must be 1-D with at least 2 units")
    if not np.isin(arr, (0, 1)).all():
        raise InvalidDesign("assignment entries must be 0 or 1")
    arr = arr.astype(np.int8)
    n1 = int(arr.sum())
    if n1 == 0 or n1 == arr.size:
        raise InvalidDesign("both arms must contain at least one unit")
    if n_treated is not None and n1 != n_treated:
        raise InvalidDesign(f"expected {n_treated} treated units, found {n1}")
    return arr


@dataclass(frozen=True)
class ReferenceSet:
    """Immutable collection of assignments plus the p-value denominator.

    Attributes
    ----------
    assignments : numpy.ndarray
        Matrix of shape ``(cardinality, n)`` with one assignment per row.
        Marked read-only; a ReferenceSet can be shared across threads.
    cardinality : int
        Number of rows, used as the denominator of randomization p-values.
        In Monte Carlo mode duplicates are legal and each row counts.
    mode : str
        ``"exhaustive"`` or ``"monte-carlo"``.
    seed : int or None
        Seed used for Monte Carlo sampling, for reproducibility.
    generator : str or None
        Name of the pseudo-random generator used in Monte Carlo mode, so
        results are auditable.
    """

    assignments: np.ndarray
    cardinality: int
    mode: str
    seed: int | None = None
    generator: str | None = None

    def __post_init__(self) -> None:
        a = self.assignments
        if a.ndim != 2:
            raise InvalidDesign("assignments must be a 2-D matrix")
        if self.mode not in _MODES:
            raise InvalidDesign(f"mode must be one of {_MODES}")
        if self.cardinality != a.shape[0]:
            raise InvalidDesign("cardinality must equal the number of rows")
        if not np.isin(a, (0, 1)).all():
            raise InvalidDesign("assignment entries must be 0 or 1")
        sums = a.sum(axis=1)
        n1 = int(sums[0]) if len(sums) else 0
        if len(sums) == 0 or (sums != n1).any():
            raise InvalidDesign("every assignment must treat the same number of units")
        if n1 == 0 or n1 == a.shape[1]:
            raise InvalidDesign("both arms must contain at least one unit")
        if self.mode == "exhaustive" and self.cardinality != math.comb(a.shape[1], n1):
            raise InvalidDesign("exhaustive reference set has the wrong cardinality")
        a.setflags(write=False)

    @property
    def n_units(self) -> int:
        return self.assignments.shape[1]

    @property
    def n_treated(self) -> int:
        return int(self.assignments[0].sum())

    def index_of(self, z) -> int:
        """Row index of assignment ``z``, or raise InvalidDesign if absent."""
        z = as_assignment(z, self.n_treated)
        if z.size != self.n_units:
            raise InvalidDesign("assignment length does not match the reference set")
        hits = np.nonzero((self.assignments == z).all(axis=1))[0]
        if hits.size == 0:
            raise InvalidDesign("observed assignment is not in the reference set")
        return int(hits[0])


def enumerate_cre(n: int, n1: int, cap: int = DEFAULT_ENUMERATION_CAP) -> ReferenceSet:
    """Enumerate every assignment of a completely randomized design.

    Rows are ordered lexicographically by treated positions, so the output
    is deterministic.

    Parameters
    ----------
    n : int
        Number of units.
    n1 : int
        Number of treated units, with ``0 < n1 < n``.
    cap : int
        Refuse to materialize more than this many assignments.

    Returns
    -------
    ReferenceSet
        All ``C(n, n1)`` assignments, each exactly once.

    Raises
    ------
    InvalidDesign
        If ``n1`` is not strictly between 0 and ``n``.
    CapExceeded
        If ``C(n, n1) > cap``; the caller should sample instead.
    """
    if not (0 < n1 < n):
        raise InvalidDesign(f"need 0 < n1 < n, got n={n}, n1={n1}")
    total = math.comb(n, n1)
    if total > cap:
        raise CapExceeded(
            f"C({n}, {n1}) = {total} exceeds the enumeration cap {cap}; "
            "use Monte Carlo sampling"
        )
    rows = np.fromiter(
        chain.from_iterable(combinations(range(n), n1)),
        dtype=np.int64,
        count=total * n1,
    ).reshape(total, n1)
    out = np.zeros((total, n), dtype=np.int8)
    out[np.arange(total)[:, None], rows] = 1
    return ReferenceSet(assignments=out, cardinality=total, mode="exhaustive")


def sample_cre(n: int, n1: int, draws: int, seed: int, observed) -> ReferenceSet:
    """Monte Carlo reference set: the observed assignment plus uniform draws.

    The observed assignment is always included (as row 0) so the resulting
    p-values keep their finite-sample validity; the remaining ``draws - 1``
    rows are drawn uniformly, with replacement, from the ``C(n, n1)``
    design space using a PCG64 generator seeded with ``seed``.

    Parameters
    ----------
    n, n1 : int
        Design parameters, ``0 < n1 < n``.
    draws : int
        Total cardinality of the result, at least 1.
    seed : int
        64-bit seed; identical inputs reproduce the set byte for byte.
    observed : array-like
        The realized assignment; must satisfy the design.
    """
    if not (0 < n1 < n):
        raise InvalidDesign(f"need 0 < n1 < n, got n={n}, n1={n1}")
    if draws < 1:
        raise InvalidDesign("draws must be at least 1")
    obs = as_assignment(observed, n1)
    if obs.size != n:
        raise InvalidDesign("observed assignment has the wrong length")
    out = np.zeros((draws, n), dtype=np.int8)
    out[0] = obs
    if draws > 1:
        rng = np.random.default_rng(seed)
        u = rng.random((draws - 1, n))
        # The n1 smallest uniforms per row mark a uniformly random subset.
        picks = np.argpartition(u, n1 - 1, axis=1)[:, :n1]
        out[np.arange(1, draws)[:, None], picks] = 1
    return ReferenceSet(
        assignments=out,
        cardinality=draws,
        mode="monte-carlo",
        seed=seed,
        generator="pcg64",
    )
