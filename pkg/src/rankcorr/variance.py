"""Asymptotic (co)variance estimators.

Two modes share one interface: ``"iid"`` averages products of the
estimated kernels, ``"hac"`` adds Bartlett-weighted cross-autocovariances
for serially dependent data. Ratio coefficients (gamma, tau_b, rho_b,
tau_b_mod) go through the delta method.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .empirical import as_pair
from .errors import DegenerateDenominator, DegenerateMargin, RankCorrError
from .estimators import CoefficientId, kendall_tau, nu_hat, pearson_r, spearman_rho
from .kernels import KERNEL_ORDER, KernelId, influence

__all__ = [
    "HacConfig",
    "CovarianceEstimate",
    "default_bandwidth",
    "bartlett_weight",
    "long_run_covariance",
    "sigma_iid",
    "sigma_hac",
    "delta_variance_gamma",
    "delta_variance_ratio3",
    "pearson_influence",
    "coefficient_variance",
]

MODES = ("iid", "hac")


def default_bandwidth(n: int) -> int:
    """``floor(2 n^(1/3))``, at least 1 and below n."""
    b = int(math.floor(2.0 * n ** (1.0 / 3.0)))
    # correct the floating cube root so that b**3 <= 8n < (b+1)**3
    while (b + 1) ** 3 <= 8 * n:
        b += 1
    while b > 0 and b**3 > 8 * n:
        b -= 1
    return max(1, min(b, n - 1))


def bartlett_weight(u):
    """Triangular weight ``max(0, 1 - |u|)``."""
    return np.maximum(0.0, 1.0 - np.abs(u))


@dataclass(frozen=True)
class HacConfig:
    """Kernel and bandwidth of the long-run variance estimator.

    ``bandwidth=None`` selects the default rule for the sample at hand.
    """

    kernel: str = "bartlett"
    bandwidth: int | None = None

    def __post_init__(self):
        if self.kernel != "bartlett":
            raise RankCorrError(f"unsupported HAC kernel {self.kernel!r}")
        if self.bandwidth is not None and int(self.bandwidth) < 1:
            raise RankCorrError("bandwidth must be at least 1")

    def resolve(self, n: int) -> int:
        if self.bandwidth is None:
            return default_bandwidth(n)
        b = int(self.bandwidth)
        if b >= n:
            raise RankCorrError(f"bandwidth {b} must be smaller than n={n}")
        return b


@dataclass(frozen=True)
class CovarianceEstimate:
    l: KernelId
    m: KernelId
    value: float
    mode: str


def long_run_covariance(a, b, bandwidth: int | None) -> float:
    """Bartlett long-run covariance of two series, no re-centering.

    ``alpha_ab(0) + sum_h w(h/(b+1)) (alpha_ab(h) + alpha_ba(h))`` with
    ``alpha_ab(h) = (1/n) sum_i a_i b_{i+h}``. ``bandwidth=None`` keeps only
    the lag-0 term (iid mode).
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    n = a.size
    total = float(np.dot(a, b)) / n
    if bandwidth is None:
        return total
    for h in range(1, min(int(bandwidth), n - 1) + 1):
        w = 1.0 - h / (bandwidth + 1.0)
        total += w * (float(np.dot(a[: n - h], b[h:])) + float(np.dot(b[: n - h], a[h:]))) / n
    return total


def sigma_iid(x, y, l, m) -> CovarianceEstimate:
    """``r_l r_m (1/n) sum k_l k_m``."""
    l, m = KernelId(l), KernelId(m)
    kl = influence(x, y, l).values
    km = kl if l is m else influence(x, y, m).values
    value = KERNEL_ORDER[l] * KERNEL_ORDER[m] * long_run_covariance(kl, km, None)
    return CovarianceEstimate(l, m, value, "iid")


def sigma_hac(x, y, l, m, cfg: HacConfig | None = None) -> CovarianceEstimate:
    """Bartlett-weighted long-run version of :func:`sigma_iid`."""
    xs, ys = as_pair(x, y)
    cfg = cfg or HacConfig()
    l, m = KernelId(l), KernelId(m)
    kl = influence(xs, ys, l).values
    km = kl if l is m else influence(xs, ys, m).values
    b = cfg.resolve(xs.size)
    value = KERNEL_ORDER[l] * KERNEL_ORDER[m] * long_run_covariance(kl, km, b)
    return CovarianceEstimate(l, m, value, "hac")


def delta_variance_gamma(tau: float, nu: float, s_tt: float, s_nn: float, s_tn: float) -> float:
    """Delta-method variance of ``gamma = tau / (1 - nu)``."""
    if nu >= 1:
        raise DegenerateDenominator("gamma variance needs nu < 1")
    g = tau / (1.0 - nu)
    return (s_tt + g * g * s_nn + 2.0 * g * s_tn) / (1.0 - nu) ** 2


def delta_variance_ratio3(c, cx, cy, s_cc, s_ccx, s_ccy, s_cxcx, s_cycy, s_cxcy) -> float:
    """Delta-method variance of ``c / sqrt(cx * cy)``.

    Gradient ``(1/sqrt(cx cy), -c/(2 cx^1.5 cy^0.5), -c/(2 cx^0.5 cy^1.5))``
    applied to the covariance matrix of ``(c, cx, cy)``.
    """
    if cx <= 0 or cy <= 0:
        raise DegenerateDenominator("ratio variance needs positive self-coefficients")
    middle = c * (s_ccx / cx + s_ccy / cy)
    quad = 0.25 * c * c * (s_cxcx / cx**2 + s_cycy / cy**2 + 2.0 * s_cxcy / (cx * cy))
    return (s_cc - middle + quad) / (cx * cy)


def pearson_influence(x, y) -> np.ndarray:
    """Influence values of the sample correlation, ``u v - r (u^2 + v^2)/2``.

    ``u`` and ``v`` are the margins standardised with moment estimates.
    """
    xs, ys = as_pair(x, y)
    r = pearson_r(xs, ys)
    u = (xs - xs.mean()) / xs.std()
    v = (ys - ys.mean()) / ys.std()
    return u * v - 0.5 * r * (u * u + v * v)


def _check_mode(mode: str) -> str:
    mode = "hac" if mode == "ts" else mode
    if mode not in MODES:
        raise RankCorrError(f"variance mode must be 'iid' or 'hac', got {mode!r}")
    return mode


def coefficient_variance(x, y, coefficient, mode: str = "iid", cfg: HacConfig | None = None) -> float:
    """Estimated asymptotic variance of ``sqrt(n) (estimate - truth)``.

    tau and rho use their own kernel; gamma, tau_b, rho_b and tau_b_mod
    combine the required kernels by the delta method. Pearson uses the
    moment influence function. ``mode`` is ``"iid"`` or ``"hac"``.
    """
    xs, ys = as_pair(x, y)
    cid = CoefficientId(coefficient)
    mode = _check_mode(mode)
    bandwidth = (cfg or HacConfig()).resolve(xs.size) if mode == "hac" else None
    cache: dict[KernelId, np.ndarray] = {}

    def k(kernel: KernelId) -> np.ndarray:
        if kernel not in cache:
            cache[kernel] = influence(xs, ys, kernel).values
        return cache[kernel]

    def cov(l: KernelId, m: KernelId) -> float:
        return KERNEL_ORDER[l] * KERNEL_ORDER[m] * long_run_covariance(k(l), k(m), bandwidth)

    if cid is CoefficientId.TAU:
        return cov(KernelId.K_TAU, KernelId.K_TAU)
    if cid is CoefficientId.RHO:
        return cov(KernelId.K_RHO, KernelId.K_RHO)
    if cid is CoefficientId.PEARSON:
        psi = pearson_influence(xs, ys)
        return long_run_covariance(psi, psi, bandwidth)
    if cid is CoefficientId.GAMMA:
        return delta_variance_gamma(
            kendall_tau(xs, ys),
            nu_hat(xs, ys),
            cov(KernelId.K_TAU, KernelId.K_TAU),
            cov(KernelId.K_NU, KernelId.K_NU),
            cov(KernelId.K_TAU, KernelId.K_NU),
        )

    if cid is CoefficientId.TAU_B:
        main, kx, ky = KernelId.K_TAU, KernelId.K_TAU_X, KernelId.K_TAU_Y
        c, cx, cy = kendall_tau(xs, ys), kendall_tau(xs, xs), kendall_tau(ys, ys)
    elif cid is CoefficientId.RHO_B:
        main, kx, ky = KernelId.K_RHO, KernelId.K_RHO_X, KernelId.K_RHO_Y
        c, cx, cy = spearman_rho(xs, ys), spearman_rho(xs, xs), spearman_rho(ys, ys)
    else:
        # tau_b_mod: the plug-in 1 - zeta2 coincides with rho(X,X)
        main, kx, ky = KernelId.K_TAU, KernelId.K_RHO_X, KernelId.K_RHO_Y
        c, cx, cy = kendall_tau(xs, ys), spearman_rho(xs, xs), spearman_rho(ys, ys)
    if cx <= 0:
        raise DegenerateMargin("x", f"{cid.value} needs a non-constant margin")
    if cy <= 0:
        raise DegenerateMargin("y", f"{cid.value} needs a non-constant margin")
    return delta_variance_ratio3(
        c, cx, cy,
        cov(main, main), cov(main, kx), cov(main, ky),
        cov(kx, kx), cov(ky, ky), cov(kx, ky),
    )
