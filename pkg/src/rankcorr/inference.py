"""Confidence intervals, normal tests and the Fisher transformation."""
from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.special import ndtr, ndtri

from .empirical import as_pair
from .errors import BoundaryValue, InvalidLevel, RankCorrError, ZeroVariance
from .estimators import CoefficientId, estimate
from .independence import independence_variance
from .variance import HacConfig, coefficient_variance

__all__ = [
    "ConfidenceInterval",
    "TestResult",
    "InferenceResult",
    "fisher",
    "fisher_inverse",
    "fisher_variance",
    "normal_quantile",
    "confidence_interval",
    "coefficient_test",
    "analyze",
]


@dataclass(frozen=True)
class ConfidenceInterval:
    lower: float
    upper: float
    level: float
    fisher: bool


@dataclass(frozen=True)
class TestResult:
    statistic: float
    p_value: float
    null_value: float
    variance_mode: str

    # keep pytest from collecting this class
    __test__ = False


_OPEN_LOW = math.nextafter(-1.0, 0.0)
_OPEN_HIGH = math.nextafter(1.0, 0.0)


def fisher(delta: float) -> float:
    """``arctanh(delta)``."""
    if not abs(delta) < 1:
        raise BoundaryValue(f"Fisher transform undefined at {delta}")
    return math.atanh(delta)


def fisher_inverse(z: float) -> float:
    return math.tanh(z)


def fisher_variance(sigma2: float, delta: float) -> float:
    """Variance on the Fisher scale, ``sigma2 / (1 - delta^2)^2``."""
    if not abs(delta) < 1:
        raise BoundaryValue(f"Fisher variance undefined at {delta}")
    if sigma2 < 0:
        raise RankCorrError("variance must be nonnegative")
    return sigma2 / (1.0 - delta * delta) ** 2


def normal_quantile(p: float) -> float:
    return float(ndtri(p))


def _two_sided_p(statistic: float) -> float:
    # 2 (1 - Phi(|T|)) written via the lower tail for accuracy
    return float(2.0 * ndtr(-abs(statistic)))


def confidence_interval(
    estimate: float,
    sigma2: float,
    n: int,
    level: float = 0.90,
    use_fisher: bool = False,
) -> ConfidenceInterval:
    """Normal-approximation interval ``estimate +- z sigma / sqrt(n)``.

    Plain intervals are clamped to [-1, 1]. With ``use_fisher`` the interval
    is built on the arctanh scale and mapped back with tanh.
    """
    if not 0 < level < 1:
        raise InvalidLevel(f"level must lie in (0, 1), got {level}")
    if sigma2 < 0:
        raise RankCorrError("variance must be nonnegative")
    if n < 2:
        raise RankCorrError("n must be at least 2")
    z = normal_quantile(0.5 + level / 2)
    if use_fisher:
        centre = fisher(estimate)
        half = z * math.sqrt(fisher_variance(sigma2, estimate) / n)
        # tanh rounds to +-1 for large arguments; keep the interval open
        lower = max(math.tanh(centre - half), _OPEN_LOW)
        upper = min(math.tanh(centre + half), _OPEN_HIGH)
        return ConfidenceInterval(lower, upper, level, True)
    half = z * math.sqrt(sigma2 / n)
    lower = max(-1.0, estimate - half)
    upper = min(1.0, estimate + half)
    return ConfidenceInterval(lower, upper, level, False)


def coefficient_test(
    estimate: float,
    sigma2: float,
    n: int,
    null_value: float = 0.0,
    mode: str = "general",
) -> TestResult:
    """Two-sided test of ``H0: delta = null_value``.

    ``mode`` records whether ``sigma2`` is the general variance or the
    variance under independence.
    """
    if not sigma2 > 0:
        raise ZeroVariance(f"test needs a positive variance, got {sigma2}")
    if mode not in ("general", "independence"):
        raise RankCorrError(f"mode must be 'general' or 'independence', got {mode!r}")
    statistic = math.sqrt(n) * (estimate - null_value) / math.sqrt(sigma2)
    return TestResult(statistic, _two_sided_p(statistic), null_value, mode)


@dataclass(frozen=True)
class InferenceResult:
    """Everything reported for one coefficient on one sample."""

    coefficient: CoefficientId
    n: int
    estimate: float
    variance: float
    variance_mode: str
    ci: ConfidenceInterval
    test_general: TestResult
    test_independence: TestResult
    notes: tuple = ()

    def to_dict(self) -> dict:
        return {
            "coefficient": self.coefficient.value,
            "n": self.n,
            "estimate": self.estimate,
            "variance": self.variance,
            "variance_mode": self.variance_mode,
            "ci": {
                "lower": self.ci.lower,
                "upper": self.ci.upper,
                "level": self.ci.level,
                "fisher": self.ci.fisher,
            },
            "test_general": {"statistic": self.test_general.statistic, "p": self.test_general.p_value},
            "test_independence": {
                "statistic": self.test_independence.statistic,
                "p": self.test_independence.p_value,
            },
        }


def analyze(
    x,
    y,
    coefficient,
    mode: str = "iid",
    level: float = 0.90,
    use_fisher: bool = True,
    null_value: float = 0.0,
    bandwidth: int | None = None,
    fisher_fallback: bool = False,
) -> InferenceResult:
    """Estimate, variance, interval and both tests for one coefficient.

    ``mode`` is ``"iid"`` or ``"ts"`` (HAC variances, rows in time order).
    With ``fisher_fallback`` an estimate of exactly +-1 gets the plain
    interval and a note instead of a :class:`BoundaryValue` error.
    """
    if mode not in ("iid", "ts"):
        raise RankCorrError(f"mode must be 'iid' or 'ts', got {mode!r}")
    xs, ys = as_pair(x, y)
    cid = CoefficientId(coefficient)
    cfg = HacConfig(bandwidth=bandwidth)
    n = xs.size
    value = estimate(xs, ys, cid).value
    sigma2 = coefficient_variance(xs, ys, cid, "hac" if mode == "ts" else "iid", cfg)
    notes = []
    try:
        ci = confidence_interval(value, sigma2, n, level, use_fisher)
    except BoundaryValue:
        if not (use_fisher and fisher_fallback):
            raise
        ci = confidence_interval(value, sigma2, n, level, False)
        notes.append(f"{cid.value}: estimate is {value:+g}; Fisher interval undefined, plain interval reported")
    general = coefficient_test(value, sigma2, n, null_value, "general")
    sigma2_ind = independence_variance(xs, ys, cid, mode, cfg)
    independent = coefficient_test(value, sigma2_ind, n, 0.0, "independence")
    return InferenceResult(cid, n, value, sigma2, mode, ci, general, independent, tuple(notes))
