"""Data-generating processes for the simulation study.

Continuous and count-valued iid pairs, their AR(1)/INAR(1) time-series
counterparts, and the bivariate geometric law built from the FGM copula,
whose dependence coefficients are available in closed form.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.signal import lfilter
from scipy.special import log_ndtr
from scipy.stats import binom, poisson

from .empirical import PairedSample
from .errors import InvalidSpec, TargetUnattainable
from .estimators import CoefficientId, estimate

__all__ = [
    "FAMILIES",
    "DgpSpec",
    "BGeomParams",
    "BGeomMoments",
    "rng_stream",
    "binomial_thinning",
    "signed_thinning",
    "sample_zipf",
    "sample_skellam",
    "simulate",
    "geom_cdf",
    "geom_mdf",
    "bgeom_cdf",
    "bgeom_pmf",
    "bgeom_mdf",
    "bgeom_moments",
    "pmf_coefficients",
    "poisson_thinning_pmf",
    "true_coefficient",
    "calibrate_alpha",
    "CalibrationCache",
]

AR_COEF = 0.8


@dataclass(frozen=True)
class _Family:
    serial: bool
    alpha_range: tuple[float, float]
    default_prerun: int


_SIGNED = (-1.0, 1.0)
_UNIT = (0.0, 1.0)

FAMILIES = {
    "GaussIid": _Family(False, _SIGNED, 0),
    "T4Iid": _Family(False, _SIGNED, 0),
    "T1Iid": _Family(False, _SIGNED, 0),
    "GaussExpIid": _Family(False, _SIGNED, 0),
    "PoisIid": _Family(False, _UNIT, 0),
    "ZipfIid": _Family(False, _UNIT, 0),
    "SkellamIid": _Family(False, _SIGNED, 0),
    "BGeomIid": _Family(False, _SIGNED, 0),
    "GaussAr": _Family(True, _SIGNED, 1000),
    "T4Ar": _Family(True, _SIGNED, 1000),
    "T1Ar": _Family(True, _SIGNED, 1000),
    "Tear1": _Family(True, _UNIT, 1000),
    "PoisInar": _Family(True, _UNIT, 1000),
    "ZipfInar": _Family(True, _UNIT, 1000),
    "SkellamInars": _Family(True, _SIGNED, 1000),
}


@dataclass(frozen=True)
class DgpSpec:
    """A generator, its dependence parameter, length and seed.

    ``prerun=None`` takes the family default (1000 for serial families, 0
    otherwise). ``pi_x`` and ``pi_y`` only matter for ``BGeomIid``.
    """

    family: str
    alpha: float = 0.0
    n: int = 100
    seed: int = 0
    prerun: int | None = None
    pi_x: float = 0.5
    pi_y: float = 0.5

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise InvalidSpec(f"unknown family {self.family!r}; choose from {', '.join(FAMILIES)}")
        lo, hi = FAMILIES[self.family].alpha_range
        if not (lo <= self.alpha <= hi) or not math.isfinite(self.alpha):
            raise InvalidSpec(f"alpha={self.alpha} outside [{lo}, {hi}] for {self.family}")
        if int(self.n) != self.n or self.n < 2:
            raise InvalidSpec(f"n must be an integer >= 2, got {self.n}")
        if self.prerun is not None and (int(self.prerun) != self.prerun or self.prerun < 0):
            raise InvalidSpec(f"prerun must be a nonnegative integer, got {self.prerun}")
        if not (0 < self.pi_x < 1 and 0 < self.pi_y < 1):
            raise InvalidSpec("pi_x and pi_y must lie in (0, 1)")

    @property
    def serial(self) -> bool:
        return FAMILIES[self.family].serial

    @property
    def burn_in(self) -> int:
        return FAMILIES[self.family].default_prerun if self.prerun is None else int(self.prerun)

    def with_(self, **changes) -> "DgpSpec":
        fields = dict(self.__dict__)
        fields.update(changes)
        return DgpSpec(**fields)


def rng_stream(seed: int, replication: int | None = None) -> np.random.Generator:
    """Independent generator for ``(seed, replication)``.

    Streams come from ``SeedSequence`` spawn keys, so replication ``r``
    always sees the same numbers regardless of scheduling.
    """
    key = () if replication is None else (int(replication),)
    return np.random.default_rng(np.random.SeedSequence(int(seed), spawn_key=key))


def binomial_thinning(alpha: float, x, rng: np.random.Generator):
    """``alpha o x``: number of successes among x Bernoulli(alpha) trials."""
    if not 0 <= alpha <= 1:
        raise InvalidSpec(f"thinning probability must lie in [0, 1], got {alpha}")
    x = np.asarray(x)
    if np.any(x < 0):
        raise InvalidSpec("binomial thinning needs nonnegative counts")
    out = np.asarray(rng.binomial(x.astype(np.int64), alpha))
    return out if out.ndim else int(out)


def signed_thinning(alpha: float, x, rng: np.random.Generator):
    """Signed thinning: ``sgn(alpha) sgn(x) Binomial(|x|, |alpha|)``."""
    if not -1 <= alpha <= 1:
        raise InvalidSpec(f"signed thinning parameter must lie in [-1, 1], got {alpha}")
    x = np.asarray(x).astype(np.int64)
    out = np.asarray(int(np.sign(alpha)) * np.sign(x) * rng.binomial(np.abs(x), abs(alpha)))
    return out if out.ndim else int(out)


def sample_zipf(s: float, size, rng: np.random.Generator) -> np.ndarray:
    """Zeta law with ``P(K = k) = k^-(s+1) / zeta(s+1)`` on k >= 1."""
    return rng.zipf(s + 1.0, size).astype(np.int64)


def sample_skellam(mu1: float, mu2: float, size, rng: np.random.Generator) -> np.ndarray:
    """Difference of two independent Poisson counts."""
    return rng.poisson(mu1, size) - rng.poisson(mu2, size)


def _mix_continuous(alpha, x, u):
    return alpha * x + math.sqrt(1.0 - alpha * alpha) * u


def _mix_thinned(alpha, x, u, rng):
    return binomial_thinning(alpha, x, rng) + binomial_thinning(1.0 - alpha, u, rng)


def _mix_signed(alpha, x, u, rng):
    sign = 1 if alpha >= 0 else -1
    return signed_thinning(alpha, x, rng) + sign * signed_thinning(1.0 - abs(alpha), u, rng)


def _ar1(innovations: np.ndarray) -> np.ndarray:
    return lfilter([1.0], [1.0, -AR_COEF], innovations)


def _inar1(innovations: np.ndarray, rng: np.random.Generator, signed: bool) -> np.ndarray:
    out = np.empty(innovations.size, dtype=np.int64)
    prev = 0
    for i, eps in enumerate(innovations):
        if signed:
            kept = int(np.sign(prev)) * int(rng.binomial(abs(prev), AR_COEF))
        else:
            kept = int(rng.binomial(prev, AR_COEF))
        prev = kept + int(eps)
        out[i] = prev
    return out


def _tear1(innovations: np.ndarray, keep: np.ndarray) -> np.ndarray:
    # X_i = B_i X_{i-1} + 0.2 e_i restarts from 0.2 e_i whenever B_i = 0
    out = np.empty(innovations.size)
    prev = 0.0
    for i in range(innovations.size):
        prev = (prev if keep[i] else 0.0) + (1.0 - AR_COEF) * innovations[i]
        out[i] = prev
    return out


def _fgm_uniforms(alpha: float, size: int, rng: np.random.Generator):
    u = rng.random(size)
    w = rng.random(size)
    a = alpha * (1.0 - 2.0 * u)
    # inverse of the conditional copula v + a v (1 - v) = w, rationalised
    v = 2.0 * w / (1.0 + a + np.sqrt((1.0 + a) ** 2 - 4.0 * a * w))
    return u, v


def _geom_quantile(p: np.ndarray, pi: float) -> np.ndarray:
    x = np.ceil(np.log1p(-p) / math.log1p(-pi)) - 1.0
    return np.maximum(x, 0.0)


def simulate(spec: DgpSpec, replication: int | None = None) -> PairedSample:
    """Draw one paired sample; a pure function of ``spec`` (and replication)."""
    rng = rng_stream(spec.seed, replication)
    fam, a, n = spec.family, float(spec.alpha), int(spec.n)
    total = n + spec.burn_in

    if fam in ("GaussIid", "T4Iid", "T1Iid", "GaussExpIid"):
        if fam == "T4Iid":
            x, u = rng.standard_t(4, n), rng.standard_t(4, n)
        elif fam == "T1Iid":
            x, u = rng.standard_t(1, n), rng.standard_t(1, n)
        else:
            x, u = rng.standard_normal(n), rng.standard_normal(n)
        y = _mix_continuous(a, x, u)
        if fam == "GaussExpIid":
            y = -log_ndtr(-y)
        return PairedSample(x, y)
    if fam == "PoisIid":
        x, u = rng.poisson(1.0, n), rng.poisson(1.0, n)
        return PairedSample(x, _mix_thinned(a, x, u, rng))
    if fam == "ZipfIid":
        x, u = sample_zipf(1.0, n, rng) - 1, sample_zipf(1.0, n, rng) - 1
        return PairedSample(x, _mix_thinned(a, x, u, rng))
    if fam == "SkellamIid":
        x, u = sample_skellam(1.0, 1.0, n, rng), sample_skellam(1.0, 1.0, n, rng)
        return PairedSample(x, _mix_signed(a, x, u, rng))
    if fam == "BGeomIid":
        p, q = _fgm_uniforms(a, n, rng)
        return PairedSample(_geom_quantile(p, spec.pi_x), _geom_quantile(q, spec.pi_y))

    burn = slice(spec.burn_in, None)
    if fam in ("GaussAr", "T4Ar", "T1Ar"):
        if fam == "GaussAr":
            ex, eu = rng.standard_normal(total), rng.standard_normal(total)
        else:
            df = 4 if fam == "T4Ar" else 1
            ex, eu = rng.standard_t(df, total), rng.standard_t(df, total)
        x, u = _ar1(ex)[burn], _ar1(eu)[burn]
        return PairedSample(x, _mix_continuous(a, x, u))
    if fam == "Tear1":
        ex, eu = rng.exponential(1.0, total), rng.exponential(1.0, total)
        bx, bu = rng.random(total) < AR_COEF, rng.random(total) < AR_COEF
        x, u = _tear1(ex, bx)[burn], _tear1(eu, bu)[burn]
        pick = rng.random(n) < a
        return PairedSample(x, np.where(pick, x, u))
    if fam in ("PoisInar", "ZipfInar"):
        if fam == "PoisInar":
            ex, eu = rng.poisson(1.0 - AR_COEF, total), rng.poisson(1.0 - AR_COEF, total)
        else:
            ex, eu = sample_zipf(1.5, total, rng), sample_zipf(1.5, total, rng)
        x = _inar1(ex, rng, signed=False)[burn]
        u = _inar1(eu, rng, signed=False)[burn]
        return PairedSample(x, _mix_thinned(a, x, u, rng))
    # SkellamInars
    ex = sample_skellam(0.2, 0.2, total, rng)
    eu = sample_skellam(0.2, 0.2, total, rng)
    x = _inar1(ex, rng, signed=True)[burn]
    u = _inar1(eu, rng, signed=True)[burn]
    return PairedSample(x, _mix_signed(a, x, u, rng))


# ---------------------------------------------------------------------------
# bivariate geometric law


@dataclass(frozen=True)
class BGeomParams:
    pi_x: float
    pi_y: float
    alpha: float

    def __post_init__(self):
        if not (0 < self.pi_x < 1 and 0 < self.pi_y < 1):
            raise InvalidSpec("pi_x and pi_y must lie in (0, 1)")
        if not -1 <= self.alpha <= 1:
            raise InvalidSpec("alpha must lie in [-1, 1]")


@dataclass(frozen=True)
class BGeomMoments:
    zeta_x: float
    zeta2_x: float
    zeta_y: float
    zeta2_y: float
    nu: float
    tau: float
    rho: float
    gamma: float
    tau_b: float
    rho_b: float


def geom_cdf(x, pi: float):
    """CDF of the geometric law on {0, 1, ...} with success probability pi."""
    x = np.floor(np.asarray(x, dtype=float))
    return np.where(x < 0, 0.0, 1.0 - (1.0 - pi) ** (x + 1.0))


def geom_mdf(x, pi: float):
    x = np.asarray(x, dtype=float)
    return 0.5 * (geom_cdf(x, pi) + geom_cdf(x - 1, pi))


def bgeom_cdf(params: BGeomParams, x, y):
    fx = geom_cdf(x, params.pi_x)
    fy = geom_cdf(y, params.pi_y)
    return fx * fy * (1.0 + params.alpha * (1.0 - fx) * (1.0 - fy))


def bgeom_pmf(params: BGeomParams, x, y):
    px, py, a = params.pi_x, params.pi_y, params.alpha
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    qx = (1.0 - px) ** x
    qy = (1.0 - py) ** y
    return px * qx * py * qy * (1.0 + a * ((2.0 - px) * qx - 1.0) * ((2.0 - py) * qy - 1.0))


def bgeom_mdf(params: BGeomParams, x, y):
    """Closed-form bivariate MDF for integer x, y >= 0."""
    px, py, a = params.pi_x, params.pi_y, params.alpha
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    gx = 0.5 * (2.0 - (2.0 - px) * (1.0 - px) ** x)
    gy = 0.5 * (2.0 - (2.0 - py) * (1.0 - py) ** y)
    hx = px / 2.0 * geom_cdf(x - 1, px) + (1.0 - px) * gx
    hy = py / 2.0 * geom_cdf(y - 1, py) + (1.0 - py) * gy
    return gx * gy + a * (1.0 - px) ** x * (1.0 - py) ** y * hx * hy


def bgeom_moments(params: BGeomParams) -> BGeomMoments:
    """Tie probabilities and dependence coefficients in closed form."""
    px, py, a = params.pi_x, params.pi_y, params.alpha
    zx, zy = px / (2.0 - px), py / (2.0 - py)
    z2x = px * px / (3.0 - (3.0 - px) * px)
    z2y = py * py / (3.0 - (3.0 - py) * py)
    one_minus_zx = 2.0 * (1.0 - px) / (2.0 - px)
    one_minus_zy = 2.0 * (1.0 - py) / (2.0 - py)
    one_minus_z2x = 3.0 * (1.0 - px) / (3.0 - (3.0 - px) * px)
    one_minus_z2y = 3.0 * (1.0 - py) / (3.0 - (3.0 - py) * py)
    inner = 0.5 + a * (1.0 - px) * (1.0 - py) / ((1.0 + (1.0 - px) ** 2) * (1.0 + (1.0 - py) ** 2))
    nu = 1.0 - one_minus_zx * one_minus_zy * (1.0 + a * z2x * z2y / (px * py) * inner)
    tau = 2.0 * a * (1.0 - px) * (1.0 - py) / ((3.0 - (3.0 - px) * px) * (3.0 - (3.0 - py) * py))
    rho = 1.5 * tau
    return BGeomMoments(
        zeta_x=zx,
        zeta2_x=z2x,
        zeta_y=zy,
        zeta2_y=z2y,
        nu=nu,
        tau=tau,
        rho=rho,
        gamma=tau / (1.0 - nu),
        tau_b=tau / math.sqrt(one_minus_zx * one_minus_zy),
        rho_b=rho / math.sqrt(one_minus_z2x * one_minus_z2y),
    )


def pmf_coefficients(table) -> dict:
    """Population coefficients of a discrete law given as a PMF table.

    ``table[i, j]`` is the probability of the i-th smallest x value with the
    j-th smallest y value; the table should hold (almost) all the mass.
    """
    p = np.asarray(table, dtype=float)
    px = p.sum(axis=1)
    py = p.sum(axis=0)
    gx = np.cumsum(px) - 0.5 * px
    gy = np.cumsum(py) - 0.5 * py
    cdf = p.cumsum(axis=0).cumsum(axis=1)
    pad = np.zeros((p.shape[0] + 1, p.shape[1] + 1))
    pad[1:, 1:] = cdf
    # average of F(x,y), F(x-,y), F(x,y-), F(x-,y-)
    gxy = (pad[1:, 1:] + pad[:-1, 1:] + pad[1:, :-1] + pad[:-1, :-1]) / 4.0
    tau = float(np.sum(p * (4.0 * gxy - 2.0 * gx[:, None] - 2.0 * gy[None, :] + 1.0)))
    rho = float(12.0 * np.sum(p * (gx[:, None] - 0.5) * (gy[None, :] - 0.5)))
    zx, zy = float(np.sum(px**2)), float(np.sum(py**2))
    z2x, z2y = float(np.sum(px**3)), float(np.sum(py**3))
    nu = zx + zy - float(np.sum(p**2))
    return {
        "zeta_x": zx,
        "zeta2_x": z2x,
        "zeta_y": zy,
        "zeta2_y": z2y,
        "nu": nu,
        "tau": tau,
        "rho": rho,
        "gamma": tau / (1.0 - nu),
        "tau_b": tau / math.sqrt((1.0 - zx) * (1.0 - zy)),
        "rho_b": rho / math.sqrt((1.0 - z2x) * (1.0 - z2y)),
        "tau_b_mod": tau / math.sqrt((1.0 - z2x) * (1.0 - z2y)),
    }


def poisson_thinning_pmf(alpha: float, size: int = 40) -> np.ndarray:
    """Joint PMF of ``(X, alpha o X + (1 - alpha) o u)`` with X, u ~ Poi(1).

    Rows index x = 0..size-1, columns y = 0..size-1.
    """
    k = np.arange(size)
    px = poisson.pmf(k, 1.0)
    # thinned parts: alpha o X given X = x is Bin(x, alpha); (1-alpha) o u is Poi(1-alpha)
    kept = binom.pmf(k[None, :], k[:, None], alpha)
    fresh = poisson.pmf(k, 1.0 - alpha)
    table = np.zeros((size, size))
    for x in range(size):
        table[x] = px[x] * np.convolve(kept[x], fresh)[:size]
    return table


# ---------------------------------------------------------------------------
# population values and calibration

_GAUSS_FAMILIES = ("GaussIid", "GaussAr", "GaussExpIid")


def _gauss_coefficient(alpha: float, cid: CoefficientId) -> float | None:
    # Gaussian copula with correlation alpha; the exponential transform of
    # the second margin is monotone, so rank coefficients are unaffected
    if cid in (CoefficientId.TAU, CoefficientId.TAU_B, CoefficientId.GAMMA):
        return 2.0 / math.pi * math.asin(alpha)
    if cid in (CoefficientId.RHO, CoefficientId.RHO_B):
        return 6.0 / math.pi * math.asin(alpha / 2.0)
    return None


def _simulated_coefficient(spec: DgpSpec, cid: CoefficientId) -> float:
    sample = simulate(spec)
    return estimate(sample.x, sample.y, cid).value


def true_coefficient(
    family: str,
    alpha: float,
    coefficient,
    n_sim: int = 1_000_000,
    seed: int = 20240101,
    pi_x: float = 0.5,
    pi_y: float = 0.5,
) -> float:
    """Population coefficient of a family at ``alpha``.

    Closed forms for the Gaussian families (rank coefficients, plus Pearson
    for the Gaussian pairs), BGeom and PoisIid (exact PMF); otherwise a
    single large simulation of length ``n_sim``.
    """
    cid = CoefficientId(coefficient)
    if family in _GAUSS_FAMILIES:
        value = _gauss_coefficient(alpha, cid)
        if value is None and cid is CoefficientId.PEARSON and family != "GaussExpIid":
            value = alpha
        if value is not None:
            return value
    if family == "BGeomIid":
        m = bgeom_moments(BGeomParams(pi_x, pi_y, alpha))
        if cid is CoefficientId.TAU_B_MOD:
            return m.tau / math.sqrt((1.0 - m.zeta2_x) * (1.0 - m.zeta2_y))
        if cid is not CoefficientId.PEARSON:
            return getattr(m, cid.value)
    if family == "PoisIid":
        if cid is CoefficientId.PEARSON:
            return alpha
        return pmf_coefficients(poisson_thinning_pmf(alpha))[cid.value]
    if alpha == 0 and family in FAMILIES:
        return 0.0
    return _simulated_coefficient(DgpSpec(family, alpha, n_sim, seed, pi_x=pi_x, pi_y=pi_y), cid)


class CalibrationCache:
    """Versioned key-value text file of calibrated dependence parameters.

    One line per entry::

        family=PoisIid coefficient=gamma target=0.4 alpha=0.61234567 method=pmf
    """

    HEADER = "# rankcorr calibration cache v1"

    def __init__(self, path: str | os.PathLike | None = None):
        if path is None:
            path = Path.home() / ".cache" / "rankcorr" / "calibration-v1.txt"
        self.path = Path(path)
        self._entries: dict[tuple[str, str, str], float] | None = None

    @staticmethod
    def key(family: str, coefficient: CoefficientId, target: float) -> tuple[str, str, str]:
        return family, coefficient.value, repr(float(target))

    def _load(self) -> dict:
        if self._entries is None:
            self._entries = {}
            if self.path.exists():
                lines = self.path.read_text().splitlines()
                if lines and lines[0].strip() == self.HEADER:
                    for line in lines[1:]:
                        fields = dict(item.split("=", 1) for item in line.split() if "=" in item)
                        try:
                            k = (fields["family"], fields["coefficient"], repr(float(fields["target"])))
                            self._entries[k] = float(fields["alpha"])
                        except (KeyError, ValueError):
                            continue
        return self._entries

    def get(self, family, coefficient, target):
        return self._load().get(self.key(family, coefficient, target))

    def put(self, family, coefficient, target, alpha, method):
        entries = self._load()
        k = self.key(family, coefficient, target)
        entries[k] = float(alpha)
        try:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            if not self.path.exists():
                self.path.write_text(self.HEADER + "\n")
            with self.path.open("a") as fh:
                fh.write(f"family={k[0]} coefficient={k[1]} target={k[2]} alpha={float(alpha)!r} method={method}\n")
        except OSError:
            # an unwritable cache only costs time
            pass


def _bisect(f, target: float, lo: float, hi: float, tol: float, max_iter: int = 60) -> float:
    flo, fhi = f(lo), f(hi)
    increasing = fhi >= flo
    low_val, high_val = (flo, fhi) if increasing else (fhi, flo)
    if not (low_val - tol <= target <= high_val + tol):
        raise TargetUnattainable(
            f"target {target} outside the attainable range [{low_val:.4f}, {high_val:.4f}]"
        )
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if (fm < target) == increasing:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-7:
            break
    return 0.5 * (lo + hi)


def calibrate_alpha(
    family: str,
    target_coefficient,
    target_value: float,
    method: str = "auto",
    n: int = 100_000,
    seed: int = 12345,
    cache: CalibrationCache | None | bool = None,
) -> float:
    """Dependence parameter at which ``family`` has the target coefficient.

    Bisection on the monotone map alpha -> coefficient. ``method="mc"``
    evaluates that map by simulation at length ``n`` with common random
    numbers; ``"exact"`` uses closed forms (Gaussian families) or exact PMF
    sums (PoisIid); ``"auto"`` prefers exact where available. Results are
    cached in a :class:`CalibrationCache` unless ``cache=False``.
    """
    if family not in FAMILIES:
        raise InvalidSpec(f"unknown family {family!r}")
    cid = CoefficientId(target_coefficient)
    target = float(target_value)
    lo, hi = FAMILIES[family].alpha_range
    if target == 0.0 and lo < 0 <= hi:
        return 0.0
    if target == 0.0 and lo == 0.0:
        return 0.0

    exact = family in _GAUSS_FAMILIES and _gauss_coefficient(0.5, cid) is not None
    exact = exact or (family == "PoisIid" and cid is not CoefficientId.PEARSON)
    if method == "auto":
        method = "exact" if exact else "mc"
    if method == "exact" and not exact:
        raise InvalidSpec(f"no exact map for {family}/{cid.value}")

    store = None if cache is False else (cache if isinstance(cache, CalibrationCache) else CalibrationCache())
    label = f"{family}/{method}" if method == "mc" else family
    if store is not None:
        hit = store.get(label, cid, target)
        if hit is not None:
            return hit

    if method == "exact":
        if family == "PoisIid":
            def f(a):
                return pmf_coefficients(poisson_thinning_pmf(a))[cid.value]
            alpha = _bisect(f, target, lo, hi, tol=0.0)
        else:
            alpha = _bisect(lambda a: _gauss_coefficient(a, cid), target, lo, hi, tol=0.0)
    elif method == "mc":
        def f(a):
            return _simulated_coefficient(DgpSpec(family, a, n, seed), cid)
        alpha = _bisect(f, target, lo, hi, tol=0.005, max_iter=30)
    else:
        raise InvalidSpec(f"unknown calibration method {method!r}")
    if store is not None:
        store.put(label, cid, target, alpha, method)
    return alpha
