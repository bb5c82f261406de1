"""Asymptotic variances under the null of cross-independence.

iid mode evaluates closed forms in the tie probabilities. Time-series
mode replaces the lag-0 products by Bartlett-weighted sums of products
of the two margins' autocorrelations.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .empirical import TieProbabilities, as_pair, as_series, tie_probabilities
from .errors import DegenerateMargin, RankCorrError
from .estimators import CoefficientId, spearman_acf
from .variance import HacConfig

__all__ = [
    "IndependenceVariance",
    "sigma_ind_iid",
    "sigma_ind_ts",
    "moment_acf",
    "independence_variance",
]

FOUR_NINTHS = 4.0 / 9.0


@dataclass(frozen=True)
class IndependenceVariance:
    id: CoefficientId
    value: float
    mode: str
    inputs: dict = field(default_factory=dict)


def _tie_factor(z: TieProbabilities, attr: str, margin: str) -> float:
    factor = 1.0 - getattr(z, attr)
    if factor <= 0:
        raise DegenerateMargin(margin, "unit tie probability")
    return factor


def sigma_ind_iid(coefficient, zeta_x: TieProbabilities, zeta_y: TieProbabilities) -> IndependenceVariance:
    """Closed-form null variance for iid data.

    Parameters
    ----------
    coefficient : CoefficientId or str
    zeta_x, zeta_y : TieProbabilities
        Tie probabilities of the two margins (zeros for continuous margins).

    Returns
    -------
    IndependenceVariance
    """
    cid = CoefficientId(coefficient)
    inputs = {"zeta_x": zeta_x, "zeta_y": zeta_y}
    if cid is CoefficientId.RHO_B:
        return IndependenceVariance(cid, 1.0, "iid", inputs)
    if cid is CoefficientId.PEARSON:
        return IndependenceVariance(cid, 1.0, "iid", inputs)
    if cid is CoefficientId.TAU_B_MOD:
        return IndependenceVariance(cid, FOUR_NINTHS, "iid", inputs)
    fx = _tie_factor(zeta_x, "zeta2", "x")
    fy = _tie_factor(zeta_y, "zeta2", "y")
    if cid is CoefficientId.RHO:
        return IndependenceVariance(cid, fx * fy, "iid", inputs)
    tau = FOUR_NINTHS * fx * fy
    if cid is CoefficientId.TAU:
        return IndependenceVariance(cid, tau, "iid", inputs)
    gx = _tie_factor(zeta_x, "zeta", "x")
    gy = _tie_factor(zeta_y, "zeta", "y")
    if cid is CoefficientId.GAMMA:
        return IndependenceVariance(cid, tau / (gx * gx * gy * gy), "iid", inputs)
    return IndependenceVariance(cid, tau / (gx * gy), "iid", inputs)


def moment_acf(values, max_lag: int) -> np.ndarray:
    """Sample autocorrelations ``r(0..max_lag)`` with the usual 1/n moments."""
    s = as_series(values)
    d = s - s.mean()
    denom = float(np.dot(d, d))
    if denom <= 0:
        raise DegenerateMargin("x", "zero variance")
    n = s.size
    return np.array([float(np.dot(d[: n - h], d[h:])) / denom for h in range(max_lag + 1)])


def _weighted_sum(ax: np.ndarray, ay: np.ndarray, bandwidth: int) -> float:
    # lag 0 with weight 1, lags +-h folded into a factor of 2
    total = float(ax[0] * ay[0])
    for h in range(1, ax.size):
        total += 2.0 * (1.0 - h / (bandwidth + 1.0)) * float(ax[h] * ay[h])
    return total


def sigma_ind_ts(coefficient, x, y, cfg: HacConfig | None = None) -> IndependenceVariance:
    """Null variance for serially dependent data, Bartlett-weighted.

    ``sum_{|h|<=b} w(h/(b+1)) rho_X(h) rho_Y(h)`` with Spearman
    autocorrelations of each margin, scaled per coefficient; the grade
    version divides by the full-sample self-rho of each margin and Pearson
    uses moment autocorrelations.
    """
    xs, ys = as_pair(x, y, min_length=3)
    cid = CoefficientId(coefficient)
    n = xs.size
    b = (cfg or HacConfig()).resolve(n)
    lags = min(b, n - 2)
    inputs = {"bandwidth": b}

    if cid is CoefficientId.PEARSON:
        try:
            rx = moment_acf(xs, lags)
        except DegenerateMargin:
            raise DegenerateMargin("x", "zero variance") from None
        try:
            ry = moment_acf(ys, lags)
        except DegenerateMargin:
            raise DegenerateMargin("y", "zero variance") from None
        inputs.update(acf_x=rx, acf_y=ry)
        return IndependenceVariance(cid, _weighted_sum(rx, ry, b), "ts", inputs)

    rx = np.array([spearman_acf(xs, h) for h in range(lags + 1)])
    ry = np.array([spearman_acf(ys, h) for h in range(lags + 1)])
    if rx[0] <= 0:
        raise DegenerateMargin("x", "constant series")
    if ry[0] <= 0:
        raise DegenerateMargin("y", "constant series")
    inputs.update(acf_x=rx, acf_y=ry)
    total = _weighted_sum(rx, ry, b)

    if cid is CoefficientId.RHO:
        value = total
    elif cid is CoefficientId.RHO_B:
        value = _weighted_sum(rx / rx[0], ry / ry[0], b)
    elif cid is CoefficientId.TAU_B_MOD:
        value = FOUR_NINTHS * _weighted_sum(rx / rx[0], ry / ry[0], b)
    else:
        tau = FOUR_NINTHS * total
        if cid is CoefficientId.TAU:
            value = tau
        else:
            gx = _tie_factor(tie_probabilities(xs), "zeta", "x")
            gy = _tie_factor(tie_probabilities(ys), "zeta", "y")
            if cid is CoefficientId.GAMMA:
                value = tau / (gx * gx * gy * gy)
            else:
                value = tau / (gx * gy)
    return IndependenceVariance(cid, float(value), "ts", inputs)


def independence_variance(x, y, coefficient, mode: str = "iid", cfg: HacConfig | None = None) -> float:
    """Null variance from data: plug-in tie probabilities or the ts sum."""
    xs, ys = as_pair(x, y)
    if mode == "iid":
        return sigma_ind_iid(coefficient, tie_probabilities(xs), tie_probabilities(ys)).value
    if mode in ("ts", "hac"):
        return sigma_ind_ts(coefficient, xs, ys, cfg).value
    raise RankCorrError(f"mode must be 'iid' or 'ts', got {mode!r}")
