import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

import oracles
from rankcorr.errors import DegenerateMargin, DegenerateSample, LagTooLarge, SampleTooLarge
from rankcorr.estimators import (
    CoefficientId,
    concordance_count,
    estimate,
    goodman_kruskal_gamma,
    grade_acf,
    grade_correlation,
    kendall_tau,
    kendall_tau_b,
    nu_hat,
    pearson_r,
    rho_tilde,
    spearman_acf,
    spearman_rho,
    tau_b_mod,
)
from test_empirical import paired

RANK = [kendall_tau, spearman_rho, goodman_kruskal_gamma, kendall_tau_b, grade_correlation, tau_b_mod]


def _nondegenerate(x, y):
    return len(set(x)) > 1 and len(set(y)) > 1


class TestExamples:
    def test_kendall(self):
        assert kendall_tau([1, 2, 3], [1, 2, 3]) == 1.0
        assert kendall_tau([1, 2, 3], [3, 2, 1]) == -1.0
        assert kendall_tau([1, 2, 2], [1, 2, 3]) == pytest.approx(2 / 3, abs=1e-15)

    def test_spearman(self):
        assert spearman_rho([1, 2, 3], [1, 2, 3]) == pytest.approx(8 / 9, abs=1e-15)
        assert spearman_rho([1, 2, 3], [3, 2, 1]) == pytest.approx(-8 / 9, abs=1e-15)
        assert spearman_rho([1, 2, 3, 4], [1, 2, 3, 4]) == pytest.approx(15 / 16, abs=1e-15)

    def test_rho_tilde(self):
        assert rho_tilde([1, 2, 3], [1, 2, 3]) == pytest.approx(1.0)
        assert rho_tilde([1, 2, 3], [3, 2, 1]) == pytest.approx(-1.0)

    def test_rho_tilde_cap(self):
        x = np.arange(501.0)
        with pytest.raises(SampleTooLarge):
            rho_tilde(x, x)

    def test_nu(self):
        assert nu_hat([1, 2, 3], [1, 2, 3]) == 0.0
        assert nu_hat([1, 1, 2], [1, 2, 3]) == pytest.approx(1 / 3)
        assert nu_hat([1, 1], [2, 2]) == 1.0

    def test_gamma(self):
        assert goodman_kruskal_gamma([1, 1, 2], [1, 2, 3]) == pytest.approx(1.0)
        with pytest.raises(DegenerateSample):
            goodman_kruskal_gamma([1, 1], [1, 2])

    def test_tau_b(self):
        assert kendall_tau_b([1, 1, 2], [1, 2, 3]) == pytest.approx(math.sqrt(2 / 3), abs=1e-15)
        with pytest.raises(DegenerateMargin):
            kendall_tau_b([4, 4, 4], [1, 2, 3])

    def test_grade_correlation(self):
        assert grade_correlation([1, 2, 3], [1, 2, 3]) == pytest.approx(1.0)
        assert grade_correlation([1, 2, 3], [3, 2, 1]) == pytest.approx(-1.0)

    def test_tau_b_mod(self):
        assert tau_b_mod([1, 1, 2], [1, 2, 3]) == pytest.approx(
            (2 / 3) / math.sqrt((1 - 1 / 3) * (1 - 1 / 9)), abs=1e-12
        )
        assert tau_b_mod([1, 1, 2], [1, 2, 3]) == pytest.approx(0.866025, abs=1e-6)
        with pytest.raises(DegenerateMargin):
            tau_b_mod([1, 2, 3], [0, 0, 0])

    def test_pearson(self):
        assert pearson_r([1, 2, 3], [1, 2, 3]) == pytest.approx(1.0)
        assert pearson_r([1, 2, 3], [3, 2, 1]) == pytest.approx(-1.0)
        assert pearson_r([1, 2, 3], [1, 3, 2]) == pytest.approx(0.5)

    def test_degenerate_margin_names_margin(self):
        with pytest.raises(DegenerateMargin, match="margin y"):
            kendall_tau_b([1, 2, 3], [1, 1, 1])

    def test_estimate_dispatch(self):
        e = estimate([1, 2, 2], [1, 2, 3], "tau")
        assert e.id is CoefficientId.TAU and e.n == 3
        assert e.value == pytest.approx(2 / 3)
        assert str(CoefficientId.RHO_B) == "rho_b"


class TestAcf:
    def test_lag_zero_tie_free(self):
        x = np.random.default_rng(1).normal(size=40)
        assert spearman_acf(x, 0) == pytest.approx((40**2 - 1) / 40**2)
        assert grade_acf(x, 0) == pytest.approx(1.0)

    def test_white_noise(self):
        x = np.random.default_rng(2).normal(size=20_000)
        assert abs(spearman_acf(x, 1)) < 3 / math.sqrt(x.size)
        assert abs(grade_acf(x, 3)) < 3 / math.sqrt(x.size)

    def test_constant(self):
        assert spearman_acf([2, 2, 2, 2], 0) == 0.0
        with pytest.raises(DegenerateMargin):
            grade_acf([2, 2, 2, 2], 1)

    def test_lag_too_large(self):
        with pytest.raises(LagTooLarge):
            spearman_acf([1, 2, 3], 2)

    def test_lagged_pairs(self):
        x = np.array([3.0, 1, 4, 1, 5, 9, 2, 6])
        assert spearman_acf(x, 2) == pytest.approx(spearman_rho(x[:-2], x[2:]))


class TestAgainstOracles:
    @settings(max_examples=80)
    @given(paired(min_size=2, max_size=25))
    def test_tau_nu_rho(self, sample):
        x, y = sample
        assert kendall_tau(x, y) == pytest.approx(oracles.tau(list(x), list(y)), abs=1e-14)
        assert nu_hat(x, y) == pytest.approx(oracles.nu(list(x), list(y)), abs=1e-14)
        assert spearman_rho(x, y) == pytest.approx(oracles.rho(list(x), list(y)), abs=1e-13)

    @settings(max_examples=40)
    @given(paired(min_size=3, max_size=12))
    def test_rho_tilde(self, sample):
        x, y = sample
        assert rho_tilde(x, y) == pytest.approx(oracles.rho_tilde(list(x), list(y)), abs=1e-13)

    def test_fast_concordance_equals_naive(self):
        rng = np.random.default_rng(2024)
        for _ in range(1000):
            n = int(rng.integers(2, 120))
            if rng.random() < 0.5:
                x, y = rng.integers(0, 6, n).astype(float), rng.integers(0, 6, n).astype(float)
            else:
                x, y = rng.normal(size=n), rng.normal(size=n)
            assert concordance_count(x, y, "fast") == concordance_count(x, y, "naive")


class TestProperties:
    @given(paired(min_size=3, max_size=30))
    def test_bounded_and_symmetric(self, sample):
        x, y = sample
        for f in RANK + [pearson_r]:
            try:
                v = f(x, y)
            except DegenerateSample:
                continue
            assert -1.0 <= v <= 1.0
            assert v == pytest.approx(f(y, x), abs=1e-14)

    @given(paired(min_size=3, max_size=30))
    def test_reversal(self, sample):
        x, y = sample
        if not _nondegenerate(x, y):
            return
        for f in (kendall_tau, spearman_rho, kendall_tau_b, grade_correlation, pearson_r):
            assert f(x, -y) == pytest.approx(-f(x, y), abs=1e-12)
        try:
            g = goodman_kruskal_gamma(x, y)
        except DegenerateSample:
            return
        assert goodman_kruskal_gamma(x, -y) == pytest.approx(-g, abs=1e-12)

    @given(paired(min_size=3, max_size=30))
    def test_monotone_invariance(self, sample):
        x, y = sample
        if not _nondegenerate(x, y):
            return
        tx = np.exp(x / 3.0) * 7.0 + 1.0
        for f in (kendall_tau, spearman_rho, kendall_tau_b, grade_correlation):
            assert f(tx, y) == f(x, y)

    @given(st.integers(3, 60), st.integers(0, 10**6))
    def test_tie_free_identities(self, n, seed):
        rng = np.random.default_rng(seed)
        x, y = rng.permutation(n).astype(float), rng.permutation(n).astype(float)
        t = kendall_tau(x, y)
        assert goodman_kruskal_gamma(x, y) == pytest.approx(t, abs=1e-14)
        assert kendall_tau_b(x, y) == pytest.approx(t, abs=1e-14)
        assert grade_correlation(x, y) == pytest.approx(spearman_rho(x, y) * n * n / (n * n - 1), abs=1e-13)
        # clipped to the unit interval when |tau| is close to 1
        assert tau_b_mod(x, y) == pytest.approx(np.clip(t * n * n / (n * n - 1), -1, 1), abs=1e-13)

    @settings(max_examples=50)
    @given(paired(min_size=3, max_size=40))
    def test_rho_hat_rho_tilde_identity(self, sample):
        x, y = sample
        n = x.size
        lhs = spearman_rho(x, y)
        rhs = (n - 1) * (n - 2) / n**2 * rho_tilde(x, y) + 3 * (n - 1) / n**2 * kendall_tau(x, y)
        assert abs(lhs - rhs) < 1e-12


def test_large_sample_fast_path():
    rng = np.random.default_rng(5)
    x = rng.normal(size=20_000)
    y = x + rng.normal(size=20_000)
    # bivariate normal with correlation 1/sqrt(2)
    assert kendall_tau(x, y) == pytest.approx(2 / math.pi * math.asin(1 / math.sqrt(2)), abs=0.02)
    assert_allclose(spearman_rho(x, y), 6 / math.pi * math.asin(0.5 / math.sqrt(2)), atol=0.02)
