"""Point estimators of the rank correlations and their autocorrelation versions.

Kendall-type statistics are computed from the exact integer count
``S = #concordant - #discordant`` so that derived ratios stay inside
[-1, 1] and the quadratic and merge-sort routes agree bit for bit.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .empirical import as_pair, as_series, midranks, sign_product_sums, tie_probabilities
from .errors import DegenerateMargin, DegenerateSample, LagTooLarge, RankCorrError, SampleTooLarge

__all__ = [
    "CoefficientId",
    "CoefficientEstimate",
    "RHO_TILDE_MAX_N",
    "kendall_tau",
    "spearman_rho",
    "rho_tilde",
    "nu_hat",
    "goodman_kruskal_gamma",
    "kendall_tau_b",
    "grade_correlation",
    "tau_b_mod",
    "pearson_r",
    "spearman_acf",
    "grade_acf",
    "estimate",
    "concordance_count",
]

RHO_TILDE_MAX_N = 500
# above this size the merge-sort count is used by default
_FAST_KENDALL_N = 64


class CoefficientId(str, Enum):
    TAU = "tau"
    RHO = "rho"
    GAMMA = "gamma"
    TAU_B = "tau_b"
    RHO_B = "rho_b"
    TAU_B_MOD = "tau_b_mod"
    PEARSON = "pearson"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class CoefficientEstimate:
    id: CoefficientId
    value: float
    n: int


def _clip_unit(value: float) -> float:
    # guards against last-ulp overshoot in ratios of rounded quantities
    return float(min(1.0, max(-1.0, value)))


def _pairs(n: int) -> int:
    return n * (n - 1) // 2


def _tied_pairs(codes: np.ndarray) -> int:
    _, counts = np.unique(codes, return_counts=True)
    counts = counts.astype(np.int64)
    return int(np.sum(counts * (counts - 1) // 2))


def _tie_counts(x: np.ndarray, y: np.ndarray) -> tuple[int, int, int]:
    """Pairs tied in x, tied in y, tied in both."""
    _, ix = np.unique(x, return_inverse=True)
    _, iy = np.unique(y, return_inverse=True)
    joint = ix.astype(np.int64) * (int(iy.max()) + 1) + iy
    return _tied_pairs(ix), _tied_pairs(iy), _tied_pairs(joint)


def _count_inversions(a: np.ndarray) -> int:
    """Number of index pairs i < j with a[i] > a[j], for nonnegative integers.

    Bottom-up merge sort, vectorised across blocks at every level.
    """
    n = a.size
    if n < 2:
        return 0
    size = 1 << (n - 1).bit_length()
    top = int(a.max()) + 1
    work = np.full(size, top, dtype=np.int64)
    work[:n] = a
    total = 0
    width = 1
    while width < size:
        blocks = work.reshape(-1, 2, width)
        nb = blocks.shape[0]
        rows = np.arange(nb, dtype=np.int64)[:, None]
        offset = rows * (top + 1)
        left = (blocks[:, 0, :] + offset).ravel()
        right = (blocks[:, 1, :] + offset).ravel()
        pos = np.searchsorted(left, right, side="right").reshape(nb, width)
        total += int(np.sum(width - (pos - rows * width)))
        work = np.sort(blocks.reshape(nb, 2 * width), axis=1).ravel()
        width *= 2
    return total


def _concordance_fast(x: np.ndarray, y: np.ndarray) -> int:
    order = np.lexsort((y, x))
    _, ranks_y = np.unique(y, return_inverse=True)
    discordant = _count_inversions(ranks_y[order].astype(np.int64))
    tx, ty, txy = _tie_counts(x, y)
    return _pairs(x.size) - tx - ty + txy - 2 * discordant


def _concordance_naive(x: np.ndarray, y: np.ndarray) -> int:
    return int(np.sum(sign_product_sums(x, y))) // 2


def concordance_count(x, y, method: str = "auto") -> int:
    """``S = sum_{i<j} sgn(x_i - x_j) sgn(y_i - y_j)`` as an exact integer.

    ``method`` is ``"naive"`` (quadratic pair sweep), ``"fast"`` (merge sort)
    or ``"auto"``.
    """
    xs, ys = as_pair(x, y)
    if method == "auto":
        method = "fast" if xs.size > _FAST_KENDALL_N else "naive"
    if method == "naive":
        return _concordance_naive(xs, ys)
    if method == "fast":
        return _concordance_fast(xs, ys)
    raise ValueError(f"unknown method {method!r}")


def kendall_tau(x, y, method: str = "auto") -> float:
    """Empirical Kendall's tau, ``2/(n(n-1)) sum_{i<j} sgn sgn``."""
    xs, ys = as_pair(x, y)
    return concordance_count(xs, ys, method) / _pairs(xs.size)


def nu_hat(x, y) -> float:
    """Fraction of pairs with a tie in x, in y, or in both."""
    xs, ys = as_pair(x, y)
    tx, ty, txy = _tie_counts(xs, ys)
    return (tx + ty - txy) / _pairs(xs.size)


def _centered_ranks(values: np.ndarray) -> np.ndarray:
    # R - (n+1)/2 equals n * (G - 1/2); half-integers, so sums below are exact
    return midranks(values) - (values.size + 1) / 2


def spearman_rho(x, y) -> float:
    """Empirical Spearman's rho, ``(12/n) sum (G_X - 1/2)(G_Y - 1/2)``."""
    xs, ys = as_pair(x, y)
    n = xs.size
    total = float(np.dot(_centered_ranks(xs), _centered_ranks(ys)))
    return 12.0 * total / n**3


def rho_tilde(x, y) -> float:
    """Order-3 U-statistic version of Spearman's rho.

    Averages the symmetric three-point sign kernel over all increasing
    triples. Cubic cost; intended as a reference implementation.
    """
    xs, ys = as_pair(x, y, min_length=3)
    n = xs.size
    if n > RHO_TILDE_MAX_N:
        raise SampleTooLarge(f"rho_tilde supports n <= {RHO_TILDE_MAX_N}, got {n}")
    sx = np.sign(xs[:, None] - xs[None, :]).astype(np.int64)
    sy = np.sign(ys[:, None] - ys[None, :]).astype(np.int64)
    doubled = 0
    for a in range(n - 2):
        j, k = np.triu_indices(n - a - 1, 1)
        b = j + a + 1
        c = k + a + 1
        terms = (
            sx[a, b] * sy[a, c]
            + sx[a, c] * sy[a, b]
            + sx[b, a] * sy[b, c]
            + sx[b, c] * sy[b, a]
            + sx[c, a] * sy[c, b]
            + sx[c, b] * sy[c, a]
        )
        doubled += int(terms.sum())
    triples = n * (n - 1) * (n - 2) // 6
    return doubled / (2 * triples)


def goodman_kruskal_gamma(x, y) -> float:
    """Empirical Goodman-Kruskal gamma, ``tau / (1 - nu)``."""
    xs, ys = as_pair(x, y)
    tx, ty, txy = _tie_counts(xs, ys)
    pairs = _pairs(xs.size)
    if tx == pairs:
        raise DegenerateMargin("x", "gamma undefined for a constant margin")
    if ty == pairs:
        raise DegenerateMargin("y", "gamma undefined for a constant margin")
    untied = pairs - (tx + ty - txy)
    if untied == 0:
        raise DegenerateSample("gamma undefined: every pair is tied in x or y")
    return _clip_unit(concordance_count(xs, ys) / untied)


def kendall_tau_b(x, y) -> float:
    """Empirical tau_b, ``tau(X,Y) / sqrt(tau(X,X) tau(Y,Y))``."""
    xs, ys = as_pair(x, y)
    sxx = concordance_count(xs, xs)
    syy = concordance_count(ys, ys)
    if sxx == 0:
        raise DegenerateMargin("x", "tau_b needs a non-constant margin")
    if syy == 0:
        raise DegenerateMargin("y", "tau_b needs a non-constant margin")
    return _clip_unit(concordance_count(xs, ys) / math.sqrt(sxx * syy))


def grade_correlation(x, y) -> float:
    """Empirical grade correlation, ``rho(X,Y) / sqrt(rho(X,X) rho(Y,Y))``."""
    xs, ys = as_pair(x, y)
    rxx = spearman_rho(xs, xs)
    ryy = spearman_rho(ys, ys)
    if rxx <= 0:
        raise DegenerateMargin("x", "grade correlation needs a non-constant margin")
    if ryy <= 0:
        raise DegenerateMargin("y", "grade correlation needs a non-constant margin")
    return _clip_unit(spearman_rho(xs, ys) / math.sqrt(rxx * ryy))


def tau_b_mod(x, y) -> float:
    """Tau scaled by the plug-in double-tie factors of both margins."""
    xs, ys = as_pair(x, y)
    fx = 1.0 - tie_probabilities(xs).zeta2
    fy = 1.0 - tie_probabilities(ys).zeta2
    if fx <= 0:
        raise DegenerateMargin("x", "tau_b_mod needs a non-constant margin")
    if fy <= 0:
        raise DegenerateMargin("y", "tau_b_mod needs a non-constant margin")
    return _clip_unit(kendall_tau(xs, ys) / math.sqrt(fx * fy))


def pearson_r(x, y) -> float:
    """Sample Pearson correlation."""
    xs, ys = as_pair(x, y)
    dx = xs - xs.mean()
    dy = ys - ys.mean()
    sxx = float(np.dot(dx, dx))
    syy = float(np.dot(dy, dy))
    if sxx <= 0:
        raise DegenerateMargin("x", "zero variance")
    if syy <= 0:
        raise DegenerateMargin("y", "zero variance")
    return _clip_unit(float(np.dot(dx, dy)) / math.sqrt(sxx * syy))


def spearman_acf(values, h: int) -> float:
    """Spearman's rho of the lagged pairs ``(s_i, s_{i+h})``."""
    s = as_series(values)
    h = int(h)
    if h < 0:
        raise RankCorrError("lag must be nonnegative")
    if s.size - h < 2:
        raise LagTooLarge(f"lag {h} leaves fewer than two pairs (n={s.size})")
    return spearman_rho(s[: s.size - h], s[h:])


def grade_acf(values, h: int, margin: str = "x") -> float:
    """Lag-h Spearman autocorrelation over the full-sample self-rho."""
    s = as_series(values)
    denom = spearman_rho(s, s)
    if denom <= 0:
        raise DegenerateMargin(margin, "constant series")
    return spearman_acf(s, h) / denom


_ESTIMATORS = {
    CoefficientId.TAU: kendall_tau,
    CoefficientId.RHO: spearman_rho,
    CoefficientId.GAMMA: goodman_kruskal_gamma,
    CoefficientId.TAU_B: kendall_tau_b,
    CoefficientId.RHO_B: grade_correlation,
    CoefficientId.TAU_B_MOD: tau_b_mod,
    CoefficientId.PEARSON: pearson_r,
}


def estimate(x, y, coefficient) -> CoefficientEstimate:
    """Evaluate one coefficient by id (string or :class:`CoefficientId`)."""
    cid = CoefficientId(coefficient)
    xs, ys = as_pair(x, y)
    return CoefficientEstimate(cid, float(_ESTIMATORS[cid](xs, ys)), xs.size)
