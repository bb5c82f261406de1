"""Plug-in estimates of the first-order Hoeffding kernels.

Each function returns the kernel evaluated at every observed pair, the
common input of the iid and HAC variance estimators. Probabilities are
in-sample relative frequencies and the MDFs are empirical.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .empirical import (
    as_pair,
    as_series,
    grades,
    heaviside_sums,
    joint_frequencies,
    sign_product_sums,
    value_frequencies,
)
from .estimators import kendall_tau, nu_hat, spearman_rho

__all__ = [
    "KernelId",
    "InfluenceSeries",
    "KERNEL_ORDER",
    "k1_tau",
    "k1_rho",
    "k1_nu",
    "k1_tau_margin",
    "k1_rho_margin",
    "mean_conditional_mdf",
    "influence",
]


class KernelId(str, Enum):
    K_TAU = "k_tau"
    K_RHO = "k_rho"
    K_NU = "k_nu"
    K_TAU_X = "k_tauX"
    K_TAU_Y = "k_tauY"
    K_RHO_X = "k_rhoX"
    K_RHO_Y = "k_rhoY"

    def __str__(self):
        return self.value


# order of the U-statistic behind each kernel
KERNEL_ORDER = {
    KernelId.K_TAU: 2,
    KernelId.K_NU: 2,
    KernelId.K_TAU_X: 2,
    KernelId.K_TAU_Y: 2,
    KernelId.K_RHO: 3,
    KernelId.K_RHO_X: 3,
    KernelId.K_RHO_Y: 3,
}


@dataclass(frozen=True)
class InfluenceSeries:
    kernel: KernelId
    values: np.ndarray
    order: int


def _series(kernel: KernelId, values: np.ndarray) -> InfluenceSeries:
    values = np.asarray(values, dtype=float)
    values.setflags(write=False)
    return InfluenceSeries(kernel, values, KERNEL_ORDER[kernel])


def k1_tau(x, y) -> InfluenceSeries:
    """``4 G_XY - 2 (G_X + G_Y) + 1 - tau`` at each observed pair.

    Uses the identity ``4 G_XY - 2 G_X - 2 G_Y + 1 = (1/n) sum_j sgn sgn``
    for the empirical MDFs, which keeps the bracket an exact ratio of
    integers.
    """
    xs, ys = as_pair(x, y)
    c = sign_product_sums(xs, ys)
    return _series(KernelId.K_TAU, c / xs.size - kendall_tau(xs, ys))


def mean_conditional_mdf(x, y) -> tuple[np.ndarray, np.ndarray]:
    """``g_X(X_i) = (1/n) sum_k G_XY(X_i, Y_k)`` and the mirrored ``g_Y(Y_i)``.

    The double average collapses to ``(1/n) sum_j H(x - X_j) (1 - G_Y(Y_j))``,
    evaluated by one sort and a cumulative sum.
    """
    xs, ys = as_pair(x, y)
    n = xs.size
    gx = grades(xs)
    gy = grades(ys)
    return heaviside_sums(xs, 1.0 - gy) / n, heaviside_sums(ys, 1.0 - gx) / n


def k1_rho(x, y) -> InfluenceSeries:
    """Plug-in kernel of Spearman's rho at each observed pair."""
    xs, ys = as_pair(x, y)
    gx = grades(xs)
    gy = grades(ys)
    mx, my = mean_conditional_mdf(xs, ys)
    values = 4.0 * (mx + my + gx * gy - gx - gy) + 1.0 - spearman_rho(xs, ys)
    return _series(KernelId.K_RHO, values)


def k1_nu(x, y) -> InfluenceSeries:
    """``p_X(x) + p_Y(y) - p_XY(x, y) - nu`` with relative frequencies."""
    xs, ys = as_pair(x, y)
    values = value_frequencies(xs) + value_frequencies(ys) - joint_frequencies(xs, ys) - nu_hat(xs, ys)
    return _series(KernelId.K_NU, values)


def _margin_kernel(which: str, tau_kernel: bool) -> KernelId:
    which = which.upper()
    if which not in ("X", "Y"):
        raise ValueError("which must be 'X' or 'Y'")
    if tau_kernel:
        return KernelId.K_TAU_X if which == "X" else KernelId.K_TAU_Y
    return KernelId.K_RHO_X if which == "X" else KernelId.K_RHO_Y


def k1_tau_margin(values, which: str = "X") -> InfluenceSeries:
    """``1 - tau(S,S) - p_S(s)`` for a single margin."""
    s = as_series(values, min_length=2)
    kernel = _margin_kernel(which, tau_kernel=True)
    return _series(kernel, 1.0 - kendall_tau(s, s) - value_frequencies(s))


def k1_rho_margin(values, which: str = "X") -> InfluenceSeries:
    """``1 - rho(S,S) - p_S(s)**2`` for a single margin."""
    s = as_series(values, min_length=2)
    kernel = _margin_kernel(which, tau_kernel=False)
    return _series(kernel, 1.0 - spearman_rho(s, s) - value_frequencies(s) ** 2)


def influence(x, y, kernel) -> InfluenceSeries:
    """Evaluate a kernel by id on a paired sample."""
    kernel = KernelId(kernel)
    if kernel is KernelId.K_TAU:
        return k1_tau(x, y)
    if kernel is KernelId.K_RHO:
        return k1_rho(x, y)
    if kernel is KernelId.K_NU:
        return k1_nu(x, y)
    xs, ys = as_pair(x, y)
    if kernel is KernelId.K_TAU_X:
        return k1_tau_margin(xs, "X")
    if kernel is KernelId.K_TAU_Y:
        return k1_tau_margin(ys, "Y")
    if kernel is KernelId.K_RHO_X:
        return k1_rho_margin(xs, "X")
    return k1_rho_margin(ys, "Y")
