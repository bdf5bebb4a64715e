import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from dfrtok import (
    FeatureSequence,
    Scheme,
    ValidationError,
    downsample_compact,
    downsample_expanded,
    downsample_fast,
    scheme_from_proportions,
)

from conftest import random_features


def seq(rows):
    return FeatureSequence(frames=np.asarray(rows, dtype=np.float32))


def random_scheme(rng, T, U):
    lengths = []
    left = T
    while left > 0:
        s = int(rng.integers(1, min(U, left) + 1))
        lengths.append(s)
        left -= s
    return Scheme(segments=np.asarray(lengths, dtype=np.int64), U=U, T=T)


class TestCompact:
    def test_hand_example(self):
        h = seq([[1.0], [3.0], [5.0], [7.0]])
        out = downsample_compact(h, Scheme(np.array([2, 2]), U=4, T=4))
        assert out.tolist() == [[2.0], [6.0]]

    def test_all_ones_identity(self, rng):
        h = random_features(rng, 12, 3)
        s = Scheme(segments=np.ones(12, dtype=np.int64), U=4, T=12)
        assert np.array_equal(downsample_compact(h, s), h.frames)

    def test_single_segment_global_mean(self, rng):
        h = random_features(rng, 4, 5)
        s = Scheme(np.array([4]), U=4, T=4)
        out = downsample_compact(h, s)
        np.testing.assert_allclose(out[0], h.frames.mean(axis=0), rtol=1e-6)

    def test_length_mismatch(self, rng):
        h = random_features(rng, 10, 2)
        with pytest.raises(ValidationError):
            downsample_compact(h, Scheme(np.array([2, 2]), U=4, T=4))


class TestExpanded:
    def test_hand_example(self):
        h = seq([[1.0], [3.0], [5.0], [7.0]])
        out = downsample_expanded(h, Scheme(np.array([2, 2]), U=4, T=4))
        assert out.tolist() == [[2.0], [2.0], [6.0], [6.0]]

    def test_all_ones_identity(self, rng):
        h = random_features(rng, 9, 2)
        s = Scheme(segments=np.ones(9, dtype=np.int64), U=4, T=9)
        assert np.array_equal(downsample_expanded(h, s), h.frames)

    def test_mean_preservation(self, rng):
        for _ in range(10):
            T = int(rng.integers(2, 300))
            h = random_features(rng, T, int(rng.integers(1, 16)))
            s = random_scheme(rng, T, 4)
            out = downsample_expanded(h, s)
            np.testing.assert_allclose(
                out.mean(axis=0, dtype=np.float64),
                h.frames.mean(axis=0, dtype=np.float64),
                rtol=1e-6, atol=1e-7,
            )

    def test_expanding_compact_matches(self, rng):
        T = 37
        h = random_features(rng, T, 4)
        s = random_scheme(rng, T, 4)
        compact = downsample_compact(h, s)
        assert np.array_equal(
            np.repeat(compact, s.segments, axis=0), downsample_expanded(h, s)
        )

    def test_idempotent(self, rng):
        T = 48
        h = random_features(rng, T, 6)
        s = random_scheme(rng, T, 4)
        once = downsample_expanded(h, s)
        twice = downsample_expanded(FeatureSequence(frames=once), s)
        np.testing.assert_allclose(twice, once, rtol=1e-6)


class TestFast:
    @pytest.mark.parametrize("mode", ["compact", "expanded"])
    def test_matches_naive(self, rng, mode):
        naive_fn = downsample_compact if mode == "compact" else downsample_expanded
        for _ in range(15):
            T = int(rng.integers(1, 200))
            h = random_features(rng, T, int(rng.integers(1, 24)))
            s = random_scheme(rng, T, 4)
            fast = downsample_fast(h, s, mode=mode)
            naive = naive_fn(h, s)
            np.testing.assert_allclose(fast, naive, rtol=1e-6, atol=1e-7)

    def test_all_ones_identity(self, rng):
        h = random_features(rng, 11, 2)
        s = Scheme(segments=np.ones(11, dtype=np.int64), U=4, T=11)
        assert np.array_equal(downsample_fast(h, s, "expanded"), h.frames)

    def test_concatenated_batch_equals_per_utterance(self, rng):
        # concatenating utterances along time with concatenated schemes must
        # reproduce the independent per-utterance results
        parts = []
        for _ in range(3):
            T = int(rng.integers(5, 60))
            parts.append((random_features(rng, T, 8), random_scheme(rng, T, 4)))
        big_frames = np.vstack([h.frames for h, _ in parts])
        big_segments = np.concatenate([s.segments for _, s in parts])
        big = FeatureSequence(frames=big_frames)
        big_scheme = Scheme(segments=big_segments, U=4, T=big_frames.shape[0])
        batched = downsample_fast(big, big_scheme, mode="expanded")
        independent = np.vstack([downsample_fast(h, s, mode="expanded") for h, s in parts])
        assert np.array_equal(batched, independent)

    def test_bad_mode(self, rng):
        h = random_features(rng, 4, 2)
        s = Scheme(np.array([4]), U=4, T=4)
        with pytest.raises(ValidationError):
            downsample_fast(h, s, mode="middle")


class TestSchemeFromProportions:
    def test_all_singles(self):
        s = scheme_from_proportions([1.0, 0.0, 0.0, 0.0], 10, 4, seed=0)
        assert s.segments.tolist() == [1] * 10

    def test_all_pairs(self):
        s = scheme_from_proportions([0.0, 1.0, 0.0, 0.0], 10, 4, seed=0)
        assert sorted(s.segments.tolist()) == [2] * 5

    def test_target_mix(self):
        # mean length 2.55 -> about 100 segments for T = 255
        s = scheme_from_proportions([0.1, 0.45, 0.25, 0.2], 255, 4, seed=3)
        assert s.segments.sum() == 255
        hist = np.bincount(s.segments, minlength=5)[1:]
        np.testing.assert_array_equal(hist, [10, 45, 25, 20])

    def test_shuffle_depends_on_seed(self):
        a = scheme_from_proportions([0.5, 0.5, 0.0, 0.0], 90, 4, seed=1)
        b = scheme_from_proportions([0.5, 0.5, 0.0, 0.0], 90, 4, seed=2)
        assert sorted(a.segments.tolist()) == sorted(b.segments.tolist())
        assert a.segments.tolist() != b.segments.tolist()

    def test_deterministic(self):
        a = scheme_from_proportions([0.1, 0.45, 0.25, 0.2], 255, 4, seed=9)
        b = scheme_from_proportions([0.1, 0.45, 0.25, 0.2], 255, 4, seed=9)
        assert a.segments.tolist() == b.segments.tolist()

    def test_mass_beyond_T_falls_back(self):
        with pytest.warns(UserWarning):
            s = scheme_from_proportions([0.0, 0.0, 0.0, 1.0], 2, 4, seed=0)
        assert s.segments.tolist() == [2]

    def test_invalid_inputs(self):
        with pytest.raises(ValidationError):
            scheme_from_proportions([0.5, 0.5, 0.0, 0.0], 0, 4, seed=0)
        with pytest.raises(ValidationError):
            scheme_from_proportions([0.9, 0.0, 0.0, 0.0], 10, 4, seed=0)
        with pytest.raises(ValidationError):
            scheme_from_proportions([0.5, 0.5], 10, 4, seed=0)

    @given(
        weights=st.lists(st.floats(0.0, 1.0), min_size=4, max_size=4).filter(
            lambda w: sum(w) > 1e-3
        ),
        T=st.integers(1, 400),
        seed=st.integers(0, 2**32 - 1),
    )
    def test_always_valid(self, weights, T, seed):
        p = np.asarray(weights) / sum(weights)
        s = scheme_from_proportions(p, T, 4, seed=seed)
        assert s.segments.sum() == T
        assert s.segments.min() >= 1 and s.segments.max() <= 4
