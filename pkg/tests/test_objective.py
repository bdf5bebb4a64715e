import numpy as np
import pytest

from dfrtok import (
    FeatureSequence,
    PhoneBoundaries,
    Scheme,
    ValidationError,
    alignment_cost,
    objective_cosine,
    objective_jh,
    objective_l2,
    precompute_costs,
    segment_cost,
)
from dfrtok.objective import cosine_cost_table, l2_cost_table

from conftest import random_features


def naive_pair_cost(frames, end, s):
    """Reference: length-normalized pairwise distance sum, float64."""
    block = np.asarray(frames, dtype=np.float64)[end - s : end]
    total = 0.0
    for a in range(s):
        for b in range(a + 1, s):
            total += np.linalg.norm(block[a] - block[b])
    return total / s


def seq(rows):
    return FeatureSequence(frames=np.asarray(rows, dtype=np.float32))


class TestSegmentCost:
    def test_single_frame_is_zero(self, small_features):
        for end in (1, 10, 50):
            assert segment_cost(small_features, end, 1) == 0.0

    def test_hand_example(self):
        # frames [[0],[2],[4]]: pairs |0-2| + |0-4| + |2-4| = 8, /3
        h = seq([[0.0], [2.0], [4.0]])
        assert segment_cost(h, 3, 3) == pytest.approx(8.0 / 3.0, rel=1e-12)

    def test_identical_frames(self):
        h = seq([[3.0, 1.0]] * 4)
        assert segment_cost(h, 4, 4) == 0.0

    def test_bounds(self, small_features):
        with pytest.raises(ValidationError):
            segment_cost(small_features, 51, 1)
        with pytest.raises(ValidationError):
            segment_cost(small_features, 2, 3)


class TestPrecomputeCosts:
    def test_matches_naive_random(self, rng):
        h = random_features(rng, 50, 8)
        table = precompute_costs(h, 4)
        for j in range(1, 51):
            for s in range(1, min(4, j) + 1):
                expect = naive_pair_cost(h.frames, j, s)
                assert table.cost(j, s) == pytest.approx(expect, rel=1e-9, abs=1e-12)

    @pytest.mark.parametrize("T,d,U", [(1, 3, 4), (7, 2, 3), (64, 4, 4), (33, 1, 2)])
    def test_matches_naive_shapes(self, rng, T, d, U):
        h = random_features(rng, T, d)
        table = precompute_costs(h, U)
        for j in range(1, T + 1):
            for s in range(1, min(U, j) + 1):
                expect = naive_pair_cost(h.frames, j, s)
                assert table.cost(j, s) == pytest.approx(expect, rel=1e-9, abs=1e-12)

    def test_u1_all_zero(self, small_features):
        table = precompute_costs(small_features, 1)
        assert np.all(table.values == 0.0)

    def test_single_frame(self, rng):
        h = random_features(rng, 1, 4)
        table = precompute_costs(h, 4)
        assert table.cost(1, 1) == 0.0


class TestObjectiveJh:
    def test_all_ones_is_zero(self, small_features):
        s = Scheme(segments=np.ones(50, dtype=np.int64), U=4, T=50)
        assert objective_jh(small_features, s) == 0.0

    def test_matched_plateaus(self):
        h = seq([[0.0], [0.0], [10.0], [10.0]])
        assert objective_jh(h, Scheme(np.array([2, 2]), U=4, T=4)) == 0.0

    def test_split_plateau(self):
        h = seq([[0.0], [0.0], [10.0], [10.0]])
        got = objective_jh(h, Scheme(np.array([1, 3]), U=4, T=4))
        assert got == pytest.approx(-20.0 / 3.0, rel=1e-12)

    def test_never_positive(self, rng):
        for _ in range(20):
            T = int(rng.integers(2, 40))
            h = random_features(rng, T, 3)
            s = _random_scheme(rng, T, 4)
            assert objective_jh(h, s) <= 0.0

    def test_reversal_invariance(self, rng):
        T = 30
        h = random_features(rng, T, 5)
        s = _random_scheme(rng, T, 4)
        h_rev = FeatureSequence(frames=h.frames[::-1])
        s_rev = Scheme(segments=s.segments[::-1], U=4, T=T)
        assert objective_jh(h, s) == pytest.approx(
            objective_jh(h_rev, s_rev), rel=1e-9, abs=1e-12
        )

    def test_scaling_by_power_of_two_is_exact(self, rng):
        T = 24
        h = random_features(rng, T, 4)
        s = _random_scheme(rng, T, 4)
        scaled = FeatureSequence(frames=h.frames * 4.0)
        assert objective_jh(scaled, s) == 4.0 * objective_jh(h, s)

    def test_length_mismatch(self, small_features):
        with pytest.raises(ValidationError):
            objective_jh(small_features, Scheme(np.array([2, 2]), U=4, T=4))


class TestObjectiveL2:
    def test_all_ones_is_zero(self, small_features):
        s = Scheme(segments=np.ones(50, dtype=np.int64), U=4, T=50)
        assert objective_l2(small_features, s) == 0.0

    def test_identical_frames_contribute_zero(self):
        h = seq([[5.0, 5.0]] * 3)
        assert objective_l2(h, Scheme(np.array([3]), U=4, T=3)) == 0.0

    def test_hand_example(self):
        # mean of [1, 3] is 2; total error |1-2| + |3-2| = 2
        h = seq([[1.0], [3.0]])
        assert objective_l2(h, Scheme(np.array([2]), U=4, T=2)) == pytest.approx(-2.0)


class TestObjectiveCosine:
    def test_all_ones_is_T(self, rng):
        T = 20
        h = FeatureSequence(frames=(rng.standard_normal((T, 4)) + 5.0).astype(np.float32))
        s = Scheme(segments=np.ones(T, dtype=np.int64), U=4, T=T)
        assert objective_cosine(h, s) == pytest.approx(float(T), rel=1e-12)

    def test_identical_frames_full_score(self):
        h = seq([[1.0, 2.0]] * 3)
        s = Scheme(np.array([3]), U=4, T=3)
        assert objective_cosine(h, s) == pytest.approx(3.0, rel=1e-12)

    def test_orthogonal_pair(self):
        # mean of the two unit axes is [0.5, 0.5]; each frame at 45 degrees
        h = seq([[1.0, 0.0], [0.0, 1.0]])
        s = Scheme(np.array([2]), U=4, T=2)
        assert objective_cosine(h, s) == pytest.approx(np.sqrt(2.0), rel=1e-12)

    def test_zero_norm_warns_and_contributes_zero(self):
        h = seq([[0.0, 0.0], [3.0, 4.0]])
        s = Scheme(np.array([1, 1]), U=4, T=2)
        with pytest.warns(UserWarning):
            got = objective_cosine(h, s)
        assert got == pytest.approx(1.0, rel=1e-12)


class TestAlignmentCost:
    def test_all_ones_never_splits(self):
        s = Scheme(segments=np.ones(6, dtype=np.int64), U=4, T=6)
        b = PhoneBoundaries(np.array([1, 2, 5]))
        assert alignment_cost(s, b) == 0

    def test_single_segment_splits(self):
        s = Scheme(np.array([4]), U=4, T=4)
        assert alignment_cost(s, PhoneBoundaries(np.array([2]))) == 1

    def test_boundary_on_edge(self):
        s = Scheme(np.array([2, 2]), U=4, T=4)
        assert alignment_cost(s, PhoneBoundaries(np.array([2]))) == 0

    def test_out_of_range(self):
        s = Scheme(np.array([2, 2]), U=4, T=4)
        with pytest.raises(ValidationError):
            alignment_cost(s, PhoneBoundaries(np.array([4])))

    def test_json_parse(self):
        b = PhoneBoundaries.from_json("[1, 3, 7]")
        assert b.boundary_frames.tolist() == [1, 3, 7]


class TestObjectiveCostTables:
    """The l2/cosine per-segment tables must decompose the objectives."""

    @pytest.mark.parametrize("objective,table", [
        (objective_l2, l2_cost_table),
        (objective_cosine, cosine_cost_table),
    ])
    def test_table_sums_match_objective(self, rng, objective, table):
        T = 30
        h = FeatureSequence(frames=(rng.standard_normal((T, 4)) + 3.0).astype(np.float32))
        s = _random_scheme(rng, T, 4)
        tab = table(h, 4)
        total = -sum(tab[end, length] for end, length in zip(s.ends(), s.segments))
        assert total == pytest.approx(objective(h, s), rel=1e-9, abs=1e-12)


def _random_scheme(rng, T, U):
    lengths = []
    left = T
    while left > 0:
        s = int(rng.integers(1, min(U, left) + 1))
        lengths.append(s)
        left -= s
    return Scheme(segments=np.asarray(lengths, dtype=np.int64), U=U, T=T)
