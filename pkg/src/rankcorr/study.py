"""Monte Carlo harness for size, power and coverage experiments."""
from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .dgp import DgpSpec, simulate, true_coefficient
from .errors import BoundaryValue, InvalidSpec, RankCorrError
from .estimators import CoefficientId, estimate
from .independence import independence_variance
from .inference import coefficient_test, confidence_interval
from .variance import HacConfig, coefficient_variance

__all__ = ["StudySpec", "StudyRow", "StudyResult", "run_study", "QUICK_NS", "QUICK_MC"]

TASKS = ("size_power", "coverage")
QUICK_NS = (50, 200)
QUICK_MC = 200


@dataclass(frozen=True)
class StudySpec:
    """One Monte Carlo experiment.

    ``dgp`` is a template whose ``n`` is replaced by each entry of ``ns``.
    ``target`` labels the dependence level in the output (e.g. the tau or
    gamma value the template's alpha was calibrated to). ``truth`` maps
    coefficient names to population values for coverage; missing entries
    are filled by :func:`~rankcorr.dgp.true_coefficient`.
    """

    dgp: DgpSpec
    ns: tuple = (50, 200, 800)
    coefficients: tuple = ("tau",)
    task: str = "size_power"
    mc: int = 1000
    level: float = 0.90
    fisher: bool = False
    variance_mode: str = "iid"
    null_mode: str = "independence"
    seed: int = 0
    target: float | None = None
    truth: dict = field(default_factory=dict)
    bandwidth: int | None = None

    def __post_init__(self):
        if self.task not in TASKS:
            raise InvalidSpec(f"task must be one of {TASKS}, got {self.task!r}")
        if int(self.mc) != self.mc or self.mc < 1:
            raise InvalidSpec("mc must be a positive integer")
        if not 0 < self.level < 1:
            raise InvalidSpec("level must lie in (0, 1)")
        if self.variance_mode not in ("iid", "hac"):
            raise InvalidSpec("variance_mode must be 'iid' or 'hac'")
        if self.null_mode not in ("independence", "general"):
            raise InvalidSpec("null_mode must be 'independence' or 'general'")
        if not self.ns or any(int(n) != n or n < 3 for n in self.ns):
            raise InvalidSpec("every n must be an integer >= 3")
        if not self.coefficients:
            raise InvalidSpec("at least one coefficient is required")
        for c in self.coefficients:
            CoefficientId(c)


@dataclass(frozen=True)
class StudyRow:
    dgp: str
    coefficient: str
    n: int
    target: float | None
    rate: float
    se: float
    mc: int
    errors: int


@dataclass(frozen=True)
class StudyResult:
    spec: StudySpec
    rows: tuple

    def row(self, coefficient, n: int) -> StudyRow:
        cid = CoefficientId(coefficient).value
        for r in self.rows:
            if r.coefficient == cid and r.n == n:
                return r
        raise KeyError((cid, n))

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["dgp", "coefficient", "n", "target", "rate", "se", "mc", "errors"])
        for r in self.rows:
            target = "" if r.target is None else repr(r.target)
            writer.writerow([r.dgp, r.coefficient, r.n, target, f"{r.rate:.6f}", f"{r.se:.6f}", r.mc, r.errors])
        return buf.getvalue()

    def to_table(self) -> str:
        """Rates laid out with one row per n and one column per coefficient."""
        coefs = list(dict.fromkeys(r.coefficient for r in self.rows))
        ns = list(dict.fromkeys(r.n for r in self.rows))
        what = "rejection rate" if self.spec.task == "size_power" else "coverage"
        label = self.spec.dgp.family
        if self.spec.target is not None:
            label += f" (target {self.spec.target:g})"
        lines = [f"{label}: {what}, MC={self.spec.mc}, level={self.spec.level:g}"]
        width = max(9, *(len(c) + 2 for c in coefs))
        lines.append("n".rjust(6) + "".join(c.rjust(width) for c in coefs))
        for n in ns:
            cells = []
            for c in coefs:
                r = self.row(c, n)
                cells.append(f"{r.rate:.3f}".rjust(width))
            lines.append(str(n).rjust(6) + "".join(cells))
        errors = sum(r.errors for r in self.rows)
        if errors:
            lines.append(f"({errors} replications failed on degenerate draws and are excluded)")
        return "\n".join(lines)


def _replication(args):
    spec, n, r, truths = args
    sample = simulate(spec.dgp.with_(n=n, seed=spec.seed), replication=r)
    cfg = HacConfig(bandwidth=spec.bandwidth)
    ind_mode = "ts" if spec.variance_mode == "hac" else "iid"
    outcomes = []
    for c in spec.coefficients:
        cid = CoefficientId(c)
        try:
            value = estimate(sample.x, sample.y, cid).value
            if spec.task == "size_power":
                if spec.null_mode == "independence":
                    sigma2 = independence_variance(sample.x, sample.y, cid, ind_mode, cfg)
                    mode = "independence"
                else:
                    sigma2 = coefficient_variance(sample.x, sample.y, cid, spec.variance_mode, cfg)
                    mode = "general"
                test = coefficient_test(value, sigma2, n, 0.0, mode)
                outcomes.append(bool(test.p_value <= 1.0 - spec.level))
            else:
                sigma2 = coefficient_variance(sample.x, sample.y, cid, spec.variance_mode, cfg)
                try:
                    ci = confidence_interval(value, sigma2, n, spec.level, spec.fisher)
                except BoundaryValue:
                    # |estimate| = 1 leaves the Fisher scale; use the plain interval
                    ci = confidence_interval(value, sigma2, n, spec.level, False)
                truth = truths[cid.value]
                outcomes.append(bool(ci.lower <= truth <= ci.upper))
        except RankCorrError:
            outcomes.append(None)
    return outcomes


def _truths(spec: StudySpec) -> dict:
    out = {}
    if spec.task != "coverage":
        return out
    for c in spec.coefficients:
        cid = CoefficientId(c).value
        if cid in spec.truth:
            out[cid] = float(spec.truth[cid])
        else:
            out[cid] = true_coefficient(
                spec.dgp.family, spec.dgp.alpha, cid, pi_x=spec.dgp.pi_x, pi_y=spec.dgp.pi_y
            )
    return out


def run_study(spec: StudySpec, workers: int = 1) -> StudyResult:
    """Run every (n, replication) of ``spec`` and aggregate per cell.

    Replication ``r`` draws from its own seed-derived stream, so the result
    does not depend on ``workers``. Replications whose statistic fails on a
    degenerate draw are counted in ``errors`` and excluded from the rate.
    """
    truths = _truths(spec)
    rows = []
    for n in spec.ns:
        jobs = [(spec, int(n), r, truths) for r in range(spec.mc)]
        if workers > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                outcomes = list(pool.map(_replication, jobs, chunksize=max(1, spec.mc // (4 * workers))))
        else:
            outcomes = [_replication(job) for job in jobs]
        for j, c in enumerate(spec.coefficients):
            column = [o[j] for o in outcomes]
            valid = [v for v in column if v is not None]
            errors = len(column) - len(valid)
            rate = sum(valid) / len(valid) if valid else math.nan
            se = math.sqrt(rate * (1.0 - rate) / len(valid)) if valid else math.nan
            rows.append(
                StudyRow(spec.dgp.family, CoefficientId(c).value, int(n), spec.target, rate, se, spec.mc, errors)
            )
    return StudyResult(spec, tuple(rows))
