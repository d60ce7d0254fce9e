import math

import numpy as np
import pytest

from rbci import (
    CapExceeded,
    InvalidDesign,
    ReferenceSet,
    as_assignment,
    enumerate_cre,
    sample_cre,
)


class TestEnumerate:
    def test_example_design_has_70_assignments(self):
        rs = enumerate_cre(8, 4)
        assert rs.cardinality == 70
        assert rs.assignments.shape == (70, 8)
        assert rs.mode == "exhaustive"

    def test_two_unit_design(self):
        rs = enumerate_cre(2, 1)
        assert rs.assignments.tolist() == [[1, 0], [0, 1]]

    def test_lexicographic_order(self):
        rs = enumerate_cre(6, 2)
        assert rs.assignments[0].tolist() == [1, 1, 0, 0, 0, 0]
        assert rs.assignments[-1].tolist() == [0, 0, 0, 0, 1, 1]

    @pytest.mark.parametrize("n", range(2, 13))
    def test_enumerate_then_count(self, n):
        # Exactly C(n, n1) distinct rows, each treating n1 units.
        for n1 in range(1, n):
            total = math.comb(n, n1)
            if total > 10_000:
                continue
            rs = enumerate_cre(n, n1)
            assert rs.cardinality == total
            assert (rs.assignments.sum(axis=1) == n1).all()
            assert np.unique(rs.assignments, axis=0).shape[0] == total

    def test_cap_exceeded(self):
        with pytest.raises(CapExceeded):
            enumerate_cre(100, 50)
        with pytest.raises(CapExceeded):
            enumerate_cre(8, 4, cap=69)

    @pytest.mark.parametrize("n,n1", [(8, 0), (8, 8), (8, -1), (8, 9)])
    def test_invalid_design(self, n, n1):
        with pytest.raises(InvalidDesign):
            enumerate_cre(n, n1)


class TestSample:
    def test_observed_is_first_row_and_counts(self):
        z = np.array([1, 0, 1, 0, 0, 1], dtype=np.int8)
        rs = sample_cre(6, 3, draws=100, seed=42, observed=z)
        assert rs.cardinality == 100
        assert rs.mode == "monte-carlo"
        assert rs.generator == "pcg64"
        assert (rs.assignments[0] == z).all()
        assert (rs.assignments.sum(axis=1) == 3).all()

    def test_seed_determinism_byte_for_byte(self):
        z = np.array([1, 1, 0, 0], dtype=np.int8)
        a = sample_cre(4, 2, draws=64, seed=7, observed=z)
        b = sample_cre(4, 2, draws=64, seed=7, observed=z)
        assert a.assignments.tobytes() == b.assignments.tobytes()

    def test_different_seeds_differ_but_keep_observed(self):
        z = np.array([1, 1, 0, 0], dtype=np.int8)
        a = sample_cre(4, 2, draws=64, seed=1, observed=z)
        b = sample_cre(4, 2, draws=64, seed=2, observed=z)
        assert a.assignments.tobytes() != b.assignments.tobytes()
        assert (a.assignments[0] == z).all() and (b.assignments[0] == z).all()

    def test_two_unit_design_members(self):
        rs = sample_cre(2, 1, draws=2, seed=3, observed=[1, 0])
        assert rs.assignments[0].tolist() == [1, 0]
        assert rs.assignments[1].tolist() in ([1, 0], [0, 1])

    def test_single_draw_is_just_observed(self):
        z = np.array([0, 1, 1, 0], dtype=np.int8)
        rs = sample_cre(4, 2, draws=1, seed=0, observed=z)
        assert rs.cardinality == 1
        assert (rs.assignments[0] == z).all()

    def test_marginal_uniformity(self):
        # Uniform draws should hit each of the C(4,2)=6 assignments about
        # equally often; allow 3 standard errors.
        draws = 6001
        rs = sample_cre(4, 2, draws=draws, seed=11, observed=[1, 1, 0, 0])
        uniform_part = rs.assignments[1:]
        keys = uniform_part @ np.array([8, 4, 2, 1])
        _, counts = np.unique(keys, return_counts=True)
        assert counts.size == 6
        p = 1.0 / 6.0
        se = math.sqrt(p * (1 - p) / (draws - 1))
        assert np.abs(counts / (draws - 1) - p).max() <= 3 * se

    def test_invalid_inputs(self):
        with pytest.raises(InvalidDesign):
            sample_cre(4, 2, draws=0, seed=0, observed=[1, 1, 0, 0])
        with pytest.raises(InvalidDesign):
            sample_cre(4, 2, draws=5, seed=0, observed=[1, 1, 1, 0])
        with pytest.raises(InvalidDesign):
            sample_cre(4, 4, draws=5, seed=0, observed=[1, 1, 1, 1])


class TestReferenceSetValidation:
    def test_rejects_mixed_row_sums(self):
        bad = np.array([[1, 1, 0, 0], [1, 0, 0, 0]], dtype=np.int8)
        with pytest.raises(InvalidDesign):
            ReferenceSet(assignments=bad, cardinality=2, mode="monte-carlo")

    def test_rejects_wrong_cardinality(self):
        rows = np.array([[1, 0], [0, 1]], dtype=np.int8)
        with pytest.raises(InvalidDesign):
            ReferenceSet(assignments=rows, cardinality=3, mode="exhaustive")

    def test_rejects_non_binary(self):
        rows = np.array([[2, 0], [0, 1]], dtype=np.int8)
        with pytest.raises(InvalidDesign):
            ReferenceSet(assignments=rows, cardinality=2, mode="monte-carlo")

    def test_assignments_are_read_only(self):
        rs = enumerate_cre(4, 2)
        with pytest.raises(ValueError):
            rs.assignments[0, 0] = 0

    def test_index_of(self):
        rs = enumerate_cre(4, 2)
        z = np.array([0, 1, 1, 0], dtype=np.int8)
        assert (rs.assignments[rs.index_of(z)] == z).all()
        with pytest.raises(InvalidDesign):
            ReferenceSet(
                assignments=np.array([[1, 1, 0, 0]], dtype=np.int8),
                cardinality=1,
                mode="monte-carlo",
            ).index_of([0, 1, 1, 0])


class TestAsAssignment:
    def test_accepts_lists(self):
        z = as_assignment([1, 0, 1, 0])
        assert z.dtype == np.int8 and z.sum() == 2

    def test_rejects_non_binary_and_empty_arms(self):
        with pytest.raises(InvalidDesign):
            as_assignment([1, 2, 0, 0])
        with pytest.raises(InvalidDesign):
            as_assignment([1, 1, 1, 1])
        with pytest.raises(InvalidDesign):
            as_assignment([1, 0], n_treated=2)
