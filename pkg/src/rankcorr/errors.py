"""Exception types raised by the library.

All errors derive from :class:`RankCorrError`, itself a ``ValueError``, so
callers can catch the whole family at once.
"""


class RankCorrError(ValueError):
    """Base class for all library errors."""


class DegenerateSample(RankCorrError):
    """Every pair of observations is tied, so the statistic is undefined."""


class DegenerateMargin(DegenerateSample):
    """One margin is constant (or has zero variance)."""

    def __init__(self, margin: str, detail: str = ""):
        self.margin = margin
        msg = f"degenerate margin {margin}"
        if detail:
            msg = f"{msg}: {detail}"
        super().__init__(msg)


class DegenerateDenominator(RankCorrError):
    """A delta-method denominator is zero or invalid."""


class SampleTooLarge(RankCorrError):
    """The sample exceeds the size cap of a cubic-time routine."""


class LagTooLarge(RankCorrError):
    """Fewer than two lagged pairs remain."""


class BoundaryValue(RankCorrError):
    """The Fisher transform was requested at |delta| >= 1."""


class InvalidLevel(RankCorrError):
    """Confidence level outside (0, 1)."""


class ZeroVariance(RankCorrError):
    """A test statistic was requested with a non-positive variance."""


class InvalidSpec(RankCorrError):
    """A simulation or study specification is invalid."""


class TargetUnattainable(RankCorrError):
    """Calibration target lies outside the family's attainable range."""
