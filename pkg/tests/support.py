"""Shared helpers for the test suite."""

from __future__ import annotations

import numpy as np

#: Observed assignment of the bundled 8-unit experiment.
EXAMPLE1_Z = np.array([1, 1, 0, 1, 0, 0, 1, 0], dtype=np.int8)


def random_instance(rng: np.random.Generator, n: int, n1: int) -> tuple[np.ndarray, np.ndarray]:
    """A random observed assignment plus continuous outcomes.

    Outcomes are rescaled and shifted normals, so cross-assignment
    statistic ties have probability zero and exact-equality checks
    against the brute-force oracle are meaningful.
    """
    z = np.zeros(n, dtype=np.int8)
    z[rng.permutation(n)[:n1]] = 1
    y = rng.standard_normal(n) * rng.uniform(0.5, 3.0) + rng.uniform(-2.0, 2.0)
    return z, y
