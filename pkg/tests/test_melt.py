import numpy as np
import pytest

from dfrtok import MeltConfig, ValidationError, cool_bypass, melt_sample, melt_scheme
from dfrtok.melt import blend, concentration


@pytest.fixture
def cfg():
    return MeltConfig()


class TestMeltConfig:
    def test_defaults(self, cfg):
        assert cfg.U == 4
        assert cfg.S_p == 100_000
        assert cfg.p_tgt == (0.1, 0.45, 0.25, 0.2)
        assert cfg.c == 30.0
        assert cfg.epsilon == 1e-6
        assert cfg.rho == 0.5

    def test_json_round_trip(self, cfg):
        assert MeltConfig.from_json(cfg.to_json()) == cfg

    def test_validation(self):
        with pytest.raises(ValidationError):
            MeltConfig(p_tgt=(0.5, 0.6, 0.0, 0.0))
        with pytest.raises(ValidationError):
            MeltConfig(rho=1.5)
        with pytest.raises(ValidationError):
            MeltConfig(p_tgt=(1.0,))


class TestBlend:
    def test_start_is_no_downsampling(self, cfg):
        d = blend(0, cfg)
        assert d[0] == pytest.approx(1.0)
        assert np.all(d[1:] == cfg.epsilon)

    def test_end_is_target(self, cfg):
        d = blend(cfg.S_p, cfg)
        np.testing.assert_allclose(d, cfg.p_tgt, rtol=1e-12)

    def test_multi_frame_mass_monotone(self, cfg):
        prev = -1.0
        for g in range(0, 2 * cfg.S_p, 5000):
            mass = blend(g, cfg)[1:].sum()
            assert mass >= prev
            prev = mass

    def test_negative_step_rejected(self, cfg):
        with pytest.raises(ValidationError):
            blend(-1, cfg)


class TestConcentration:
    def test_decays_after_target_step(self, cfg):
        totals = [concentration(g, cfg).sum() for g in
                  (cfg.S_p, 2 * cfg.S_p, 4 * cfg.S_p, 8 * cfg.S_p)]
        assert all(a > b for a, b in zip(totals, totals[1:]))

    def test_constant_scale_before_target(self, cfg):
        # before S_p the decay factor is pinned at 1
        a = concentration(cfg.S_p // 2, cfg)
        np.testing.assert_allclose(a, blend(cfg.S_p // 2, cfg) * cfg.c, rtol=1e-12)


class TestMeltSample:
    def test_skip_fraction(self, cfg):
        rng = np.random.default_rng(11)
        skips = sum(melt_sample(100, cfg, rng) is None for _ in range(10_000))
        assert abs(skips / 10_000 - 0.5) < 0.02

    def test_valid_simplex_points(self, cfg):
        rng = np.random.default_rng(5)
        seen = 0
        for g in (0, 1000, cfg.S_p, 3 * cfg.S_p):
            for _ in range(200):
                p = melt_sample(g, cfg, rng)
                if p is None:
                    continue
                seen += 1
                assert p.shape == (4,)
                assert np.all(p > 0)
                assert abs(p.sum() - 1.0) < 1e-9
        assert seen > 0

    def test_early_draws_concentrate_on_singles(self, cfg):
        rng = np.random.default_rng(17)
        hits, total = 0, 0
        for _ in range(5000):
            p = melt_sample(0, cfg, rng)
            if p is None:
                continue
            total += 1
            hits += p[0] > 0.99
        assert hits / total >= 0.95

    def test_target_step_mean(self, cfg):
        rng = np.random.default_rng(23)
        draws = [p for _ in range(10_000)
                 if (p := melt_sample(cfg.S_p, cfg, rng)) is not None]
        mean = np.mean(draws, axis=0)
        np.testing.assert_allclose(mean, cfg.p_tgt, atol=0.03)

    def test_deterministic(self, cfg):
        a = [melt_sample(g, cfg, np.random.default_rng(9)) for g in (0, 50_000)]
        b = [melt_sample(g, cfg, np.random.default_rng(9)) for g in (0, 50_000)]
        for x, y in zip(a, b):
            if x is None:
                assert y is None
            else:
                assert np.array_equal(x, y)

    def test_no_skip_when_rho_zero(self):
        cfg = MeltConfig(rho=0.0)
        rng = np.random.default_rng(1)
        assert all(melt_sample(0, cfg, rng) is not None for _ in range(100))


class TestMeltScheme:
    def test_none_propagates(self):
        cfg = MeltConfig(rho=1.0)
        assert melt_scheme(0, 100, cfg, np.random.default_rng(0)) is None

    def test_early_schemes_are_singles(self, cfg):
        rng = np.random.default_rng(2)
        for _ in range(20):
            s = melt_scheme(0, 200, cfg, rng)
            if s is None:
                continue
            ones = (s.segments == 1).sum()
            assert ones >= 0.95 * len(s)

    def test_late_scheme_mean_length(self, cfg):
        rng = np.random.default_rng(4)
        lengths = []
        for _ in range(60):
            s = melt_scheme(cfg.S_p, 1000, cfg, rng)
            if s is None:
                continue
            assert s.segments.sum() == 1000
            lengths.append(1000 / len(s))
        # expected mean segment length: sum(k * p_tgt_k) = 2.55
        assert np.mean(lengths) == pytest.approx(2.55, abs=0.2)


class TestCoolBypass:
    def test_extremes(self):
        rng = np.random.default_rng(0)
        assert not any(cool_bypass(rng, 0.0) for _ in range(50))
        assert all(cool_bypass(rng, 1.0) for _ in range(50))

    def test_default_rate(self):
        rng = np.random.default_rng(31)
        frac = sum(cool_bypass(rng) for _ in range(10_000)) / 10_000
        assert abs(frac - 0.3) < 0.02

    def test_invalid_probability(self):
        with pytest.raises(ValidationError):
            cool_bypass(np.random.default_rng(0), 1.5)
