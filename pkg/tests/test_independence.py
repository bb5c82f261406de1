import math

import numpy as np
import pytest
from hypothesis import given, settings
from numpy.testing import assert_allclose
from scipy.signal import lfilter

from rankcorr.dgp import BGeomParams, bgeom_moments
from rankcorr.empirical import TieProbabilities, tie_probabilities
from rankcorr.errors import DegenerateMargin, RankCorrError
from rankcorr.estimators import CoefficientId, spearman_acf
from rankcorr.independence import independence_variance, moment_acf, sigma_ind_iid, sigma_ind_ts
from rankcorr.variance import HacConfig
from test_empirical import paired

CONT = TieProbabilities(0.0, 0.0)


class TestIid:
    def test_continuous_constants(self):
        expected = {"tau": 4 / 9, "rho": 1.0, "gamma": 4 / 9, "tau_b": 4 / 9, "rho_b": 1.0, "tau_b_mod": 4 / 9}
        for cid, v in expected.items():
            assert sigma_ind_iid(cid, CONT, CONT).value == v

    def test_any_margins(self):
        z = TieProbabilities(0.6, 0.4)
        assert sigma_ind_iid("rho_b", z, z).value == 1.0
        assert sigma_ind_iid("tau_b_mod", z, z).value == 4 / 9
        assert sigma_ind_iid("pearson", z, z).value == 1.0

    def test_geometric_margins(self):
        # zeta2 of Geom(0.5) by a truncated PMF sum
        p = 0.5 * 0.5 ** np.arange(200)
        z = TieProbabilities(float(np.sum(p**2)), float(np.sum(p**3)))
        assert z.zeta2 == pytest.approx(1 / 7)
        assert sigma_ind_iid("tau", z, z).value == pytest.approx(4 / 9 * (6 / 7) ** 2, abs=1e-12)
        assert sigma_ind_iid("tau", z, z).value == pytest.approx(0.32653, abs=1e-5)

    @settings(max_examples=50)
    @given(paired(min_size=2, max_size=30))
    def test_orderings(self, sample):
        x, y = sample
        zx, zy = tie_probabilities(x), tie_probabilities(y)
        if zx.zeta >= 1 or zy.zeta >= 1:
            with pytest.raises(DegenerateMargin):
                sigma_ind_iid("gamma", zx, zy)
            return
        t = sigma_ind_iid("tau", zx, zy).value
        assert sigma_ind_iid("rho", zx, zy).value == pytest.approx(9 / 4 * t, abs=1e-15)
        tb = sigma_ind_iid("tau_b", zx, zy).value
        assert sigma_ind_iid("gamma", zx, zy).value >= tb - 1e-15 >= t - 2e-15

    def test_tie_variance_curves(self):
        # as the geometric mean grows, tau's variance rises to 4/9 and gamma's falls to it
        taus, gammas = [], []
        for pi in (0.8, 0.5, 0.2, 0.05, 0.01):
            m = bgeom_moments(BGeomParams(pi, pi, 0.0))
            z = TieProbabilities(m.zeta_x, m.zeta2_x)
            taus.append(sigma_ind_iid("tau", z, z).value)
            gammas.append(sigma_ind_iid("gamma", z, z).value)
        assert all(a < b for a, b in zip(taus, taus[1:])) and taus[-1] < 4 / 9
        assert all(a > b for a, b in zip(gammas, gammas[1:])) and gammas[-1] > 4 / 9
        assert taus[-1] == pytest.approx(4 / 9, abs=0.01) and gammas[-1] == pytest.approx(4 / 9, abs=0.01)


class TestTs:
    def test_iid_input_close_to_constant(self):
        rng = np.random.default_rng(21)
        x, y = rng.normal(size=10_000), rng.normal(size=10_000)
        for cid in ("tau", "rho", "rho_b", "gamma"):
            ts = sigma_ind_ts(cid, x, y).value
            iid = independence_variance(x, y, cid, "iid")
            assert ts == pytest.approx(iid, abs=0.05)

    def test_rho_is_nine_fourths_tau(self):
        rng = np.random.default_rng(22)
        x, y = rng.integers(0, 4, 300), rng.normal(size=300)
        assert sigma_ind_ts("rho", x, y).value == pytest.approx(9 / 4 * sigma_ind_ts("tau", x, y).value, rel=1e-14)

    def test_gaussian_ar_target(self):
        n = 200_000
        rng = np.random.default_rng(23)
        x = lfilter([1.0], [1.0, -0.8], rng.normal(size=n + 1000))[1000:]
        y = lfilter([1.0], [1.0, -0.8], rng.normal(size=n + 1000))[1000:]
        b = HacConfig().resolve(n)
        h = np.arange(1, b + 1)
        rs = 6 / math.pi * np.arcsin(0.8**h / 2)
        target = 4 / 9 * (1 + 2 * np.sum((1 - h / (b + 1)) * rs**2))
        assert sigma_ind_ts("tau", x, y).value == pytest.approx(target, rel=0.05)

    def test_explicit_sum(self):
        rng = np.random.default_rng(24)
        x, y = rng.normal(size=80), rng.integers(0, 3, 80)
        b = 4
        rx = [spearman_acf(x, h) for h in range(b + 1)]
        ry = [spearman_acf(y, h) for h in range(b + 1)]
        total = sum((1 - abs(h) / (b + 1)) * rx[abs(h)] * ry[abs(h)] for h in range(-b, b + 1))
        cfg = HacConfig(bandwidth=b)
        assert sigma_ind_ts("rho", x, y, cfg).value == pytest.approx(total, abs=1e-14)
        zx, zy = tie_probabilities(x).zeta, tie_probabilities(y).zeta
        gamma = 4 / 9 * total / ((1 - zx) ** 2 * (1 - zy) ** 2)
        assert sigma_ind_ts("gamma", x, y, cfg).value == pytest.approx(gamma, abs=1e-14)
        rho_b = sum(
            (1 - abs(h) / (b + 1)) * rx[abs(h)] / rx[0] * ry[abs(h)] / ry[0] for h in range(-b, b + 1)
        )
        assert sigma_ind_ts("rho_b", x, y, cfg).value == pytest.approx(rho_b, abs=1e-14)

    def test_pearson_moment_acf(self):
        x = np.array([1.0, 3, 2, 5, 4, 6])
        d = x - x.mean()
        assert_allclose(moment_acf(x, 2), [1, d[:-1] @ d[1:] / (d @ d), d[:-2] @ d[2:] / (d @ d)])
        rng = np.random.default_rng(25)
        a, c = rng.normal(size=5000), rng.normal(size=5000)
        assert sigma_ind_ts("pearson", a, c).value == pytest.approx(1.0, abs=0.05)

    def test_constant_margin(self):
        with pytest.raises(DegenerateMargin, match="margin y"):
            sigma_ind_ts("tau", [1, 2, 3, 4, 5], [1, 1, 1, 1, 1])

    def test_mode_validation(self):
        with pytest.raises(RankCorrError):
            independence_variance([1, 2, 3], [3, 1, 2], "tau", "block")
        assert independence_variance([1, 2, 3, 4], [2, 1, 4, 3], CoefficientId.TAU, "hac") == pytest.approx(
            sigma_ind_ts("tau", [1, 2, 3, 4], [2, 1, 4, 3]).value
        )
