"""Empirical distribution primitives.

Cumulative distribution functions with their left limits, mid-distribution
functions (MDFs), midranks, relative frequencies and tie probabilities.
Ties are decided by exact equality of the input values; pre-round data that
carry floating point noise.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.stats import rankdata

from .errors import RankCorrError

__all__ = [
    "PairedSample",
    "EmpiricalDistribution",
    "EmpiricalJoint",
    "TieProbabilities",
    "as_series",
    "as_pair",
    "empirical_cdf",
    "mid_distribution",
    "midranks",
    "grades",
    "bivariate_mdf",
    "tie_probabilities",
    "value_frequencies",
    "joint_frequencies",
    "heaviside_sums",
    "sign_product_sums",
]

# elements per block in the pairwise sweeps
_BLOCK = 2_000_000


def as_series(values, name: str = "x", min_length: int = 1) -> np.ndarray:
    """Validate a one-dimensional series of finite reals and return a float copy."""
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1:
        raise RankCorrError(f"series {name} must be one-dimensional")
    if arr.size < min_length:
        raise RankCorrError(f"series {name} needs at least {min_length} values, got {arr.size}")
    if not np.all(np.isfinite(arr)):
        raise RankCorrError(f"series {name} contains non-finite values")
    # fold -0.0 into 0.0 so that equality and hashing agree
    return arr + 0.0


def as_pair(x, y, min_length: int = 2) -> tuple[np.ndarray, np.ndarray]:
    """Validate two aligned series."""
    xs = as_series(x, "x", min_length)
    ys = as_series(y, "y", min_length)
    if xs.size != ys.size:
        raise RankCorrError(f"x and y differ in length ({xs.size} vs {ys.size})")
    return xs, ys


@dataclass(frozen=True)
class PairedSample:
    """Two aligned series of equal length.

    Unpacks as ``x, y = sample`` so it can be splatted into the estimators,
    e.g. ``kendall_tau(*sample)``.
    """

    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        xs, ys = as_pair(self.x, self.y, min_length=1)
        xs.setflags(write=False)
        ys.setflags(write=False)
        object.__setattr__(self, "x", xs)
        object.__setattr__(self, "y", ys)

    def __iter__(self):
        yield self.x
        yield self.y

    def __len__(self):
        return self.x.size

    @property
    def n(self) -> int:
        return self.x.size


class EmpiricalDistribution:
    """Empirical distribution of a univariate sample.

    Stores the sorted distinct values and their counts; CDF queries are
    answered by binary search.
    """

    def __init__(self, values):
        arr = as_series(values)
        self.unique_values, counts = np.unique(arr, return_counts=True)
        self.counts = counts.astype(np.int64)
        self.n = int(arr.size)

    def cdf(self, x):
        """Return ``(F(x), F(x-))`` for scalar or array ``x``."""
        x = np.asarray(x, dtype=float)
        cum = np.concatenate(([0], np.cumsum(self.counts)))
        le = cum[np.searchsorted(self.unique_values, x, side="right")]
        lt = cum[np.searchsorted(self.unique_values, x, side="left")]
        return le / self.n, lt / self.n

    def mdf(self, x):
        le, lt = self.cdf(x)
        return (le + lt) / 2

    def pmf(self, x):
        le, lt = self.cdf(x)
        return le - lt


class EmpiricalJoint:
    """Empirical joint distribution of paired observations."""

    def __init__(self, x, y):
        self.x, self.y = as_pair(x, y, min_length=1)
        self.n = int(self.x.size)

    def cdf(self, x, y, left_x: bool = False, left_y: bool = False):
        """Joint CDF, optionally as a left limit in either argument.

        ``left_x=True`` gives F(x-, y), ``left_y=True`` gives F(x, y-).
        """
        x = np.asarray(x, dtype=float)[..., None]
        y = np.asarray(y, dtype=float)[..., None]
        in_x = self.x < x if left_x else self.x <= x
        in_y = self.y < y if left_y else self.y <= y
        return np.count_nonzero(in_x & in_y, axis=-1) / self.n

    def mdf(self, x, y):
        """Bivariate MDF: average of the four corner CDF variants."""
        return (
            self.cdf(x, y)
            + self.cdf(x, y, left_x=True)
            + self.cdf(x, y, left_y=True)
            + self.cdf(x, y, left_x=True, left_y=True)
        ) / 4

    def pmf(self, x, y):
        x = np.asarray(x, dtype=float)[..., None]
        y = np.asarray(y, dtype=float)[..., None]
        return np.count_nonzero((self.x == x) & (self.y == y), axis=-1) / self.n


@dataclass(frozen=True)
class TieProbabilities:
    """Single-tie probability ``zeta`` and double-tie probability ``zeta2``."""

    zeta: float
    zeta2: float


def empirical_cdf(dist: EmpiricalDistribution, x):
    return dist.cdf(x)


def mid_distribution(dist: EmpiricalDistribution, x):
    return dist.mdf(x)


def bivariate_mdf(joint: EmpiricalJoint, x, y):
    return joint.mdf(x, y)


def midranks(values) -> np.ndarray:
    """Average ranks; tied observations share the mean of their positions."""
    return rankdata(as_series(values), method="average")


def grades(values) -> np.ndarray:
    """Empirical MDF evaluated at each observation, ``(R - 1/2)/n``."""
    ranks = midranks(values)
    return (ranks - 0.5) / ranks.size


def tie_probabilities(values) -> TieProbabilities:
    """Frequency plug-in of the tie probabilities.

    Tie-free data give ``zeta = 1/n`` and ``zeta2 = 1/n**2`` rather than 0.
    """
    arr = as_series(values)
    _, counts = np.unique(arr, return_counts=True)
    p = counts / arr.size
    return TieProbabilities(float(np.sum(p**2)), float(np.sum(p**3)))


def value_frequencies(values) -> np.ndarray:
    """Relative frequency of each observation's value within the sample."""
    arr = as_series(values)
    _, inv, counts = np.unique(arr, return_inverse=True, return_counts=True)
    return counts[inv] / arr.size


def joint_frequencies(x, y) -> np.ndarray:
    """Relative frequency of each observed pair within the sample."""
    xs, ys = as_pair(x, y, min_length=1)
    _, ix = np.unique(xs, return_inverse=True)
    _, iy = np.unique(ys, return_inverse=True)
    codes = ix.astype(np.int64) * (int(iy.max()) + 1) + iy
    _, inv, counts = np.unique(codes, return_inverse=True, return_counts=True)
    return counts[inv] / xs.size


def heaviside_sums(values, weights) -> np.ndarray:
    """``S_i = sum_j H(v_i - v_j) w_j`` with ``H(0) = 1/2``, in O(n log n)."""
    arr = as_series(values)
    w = np.asarray(weights, dtype=float)
    uniq, inv = np.unique(arr, return_inverse=True)
    group = np.bincount(inv, weights=w, minlength=uniq.size)
    below = np.concatenate(([0.0], np.cumsum(group)[:-1]))
    return (below + 0.5 * group)[inv]


def _smaller_before(a: np.ndarray) -> np.ndarray:
    """For each position, how many earlier entries are strictly smaller.

    Bottom-up merge sort over nonnegative integers, vectorised per level.
    """
    n = a.size
    size = 1 << max(0, (n - 1).bit_length())
    top = int(a.max()) + 1 if n else 1
    val = np.full(size, top, dtype=np.int64)
    val[:n] = a
    idx = np.arange(size)
    counts = np.zeros(size, dtype=np.int64)
    width = 1
    while width < size:
        nb = size // (2 * width)
        rows = np.arange(nb, dtype=np.int64)[:, None]
        v = val.reshape(nb, 2, width)
        ix = idx.reshape(nb, 2, width)
        offset = rows * (top + 1)
        left = (v[:, 0, :] + offset).ravel()
        right = (v[:, 1, :] + offset).ravel()
        pos = np.searchsorted(left, right, side="left").reshape(nb, width) - rows * width
        counts[ix[:, 1, :].ravel()] += pos.ravel()
        merged = val.reshape(nb, 2 * width)
        order = np.argsort(merged, axis=1, kind="stable")
        val = np.take_along_axis(merged, order, axis=1).ravel()
        idx = np.take_along_axis(idx.reshape(nb, 2 * width), order, axis=1).ravel()
        width *= 2
    return counts[:n]


def _strict_dominance(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """``#{j : x_j < x_i and y_j < y_i}`` for every i."""
    # x ascending, y descending within x-ties: earlier points with smaller y
    # then always have strictly smaller x
    order = np.lexsort((-y, x))
    _, ranks = np.unique(y, return_inverse=True)
    out = np.empty(x.size, dtype=np.int64)
    out[order] = _smaller_before(ranks[order].astype(np.int64))
    return out


def _sign_product_sums_blocked(xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    n = xs.size
    out = np.empty(n, dtype=np.int64)
    step = max(1, _BLOCK // max(n, 1))
    for start in range(0, n, step):
        stop = min(n, start + step)
        sx = np.sign(xs[start:stop, None] - xs[None, :])
        sy = np.sign(ys[start:stop, None] - ys[None, :])
        out[start:stop] = np.einsum("ij,ij->i", sx, sy).astype(np.int64)
    return out


def sign_product_sums(x, y, method: str = "auto") -> np.ndarray:
    """``c_i = sum_j sgn(x_i - x_j) sgn(y_i - y_j)`` for every observation.

    Integer valued and exact. ``method="naive"`` sweeps all pairs in row
    blocks; ``"fast"`` combines four quadrant dominance counts in
    O(n log^2 n); ``"auto"`` picks by size.
    """
    xs, ys = as_pair(x, y, min_length=1)
    if method == "auto":
        method = "fast" if xs.size > 256 else "naive"
    if method == "naive":
        return _sign_product_sums_blocked(xs, ys)
    if method != "fast":
        raise ValueError(f"unknown method {method!r}")
    concordant = _strict_dominance(xs, ys) + _strict_dominance(-xs, -ys)
    discordant = _strict_dominance(xs, -ys) + _strict_dominance(-xs, ys)
    return concordant - discordant
