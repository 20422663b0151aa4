"""Reliability-based threshold derivation from measured distributions.

Thresholds come from the empirical cumulative distribution of each
condition parameter over a road network: the value at reliability p is
the smallest observed value covering at least p percent of the samples
(nearest-rank percentile). Two reliability levels per road class give
the Good/Fair and Fair/Poor boundaries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .core import (
    FWD_PARAMETERS,
    FwdTestPoint,
    Parameter,
    Provenance,
    RoadClass,
    SurfaceSegment,
    ThresholdBand,
    ThresholdSet,
)
from .errors import (
    DegenerateThresholdError,
    InsufficientSamplesError,
    InvalidRecordError,
)

MIN_SAMPLES = 30


@dataclass(frozen=True)
class ReliabilityPair:
    """Reliability levels, in percent, for the two band boundaries."""

    lower: float
    upper: float

    def __post_init__(self):
        for p in (self.lower, self.upper):
            if not (math.isfinite(p) and 0.0 < p <= 100.0):
                raise InvalidRecordError(f"reliability must be in (0, 100]: {p}")
        if not self.lower < self.upper:
            raise InvalidRecordError(
                f"reliability pair needs lower < upper, got ({self.lower}, {self.upper})"
            )


#: Higher-traffic classes demand higher reliability.
DEFAULT_RELIABILITY = {
    RoadClass.STATE_ROAD: ReliabilityPair(80.0, 85.0),
    RoadClass.US_HIGHWAY: ReliabilityPair(85.0, 90.0),
    RoadClass.INTERSTATE: ReliabilityPair(90.0, 95.0),
}


def default_reliability_pair(road_class: RoadClass) -> ReliabilityPair:
    return DEFAULT_RELIABILITY[road_class]


@dataclass(frozen=True)
class Ecdf:
    """Empirical CDF over a finite sample, stored sorted ascending."""

    values: np.ndarray

    @property
    def n(self) -> int:
        return int(self.values.size)

    def evaluate(self, x: float) -> float:
        """Fraction of samples <= x."""
        return float(np.searchsorted(self.values, x, side="right")) / self.n


def build_ecdf(samples: Iterable[float]) -> Ecdf:
    """Sort samples into an ECDF. Order of the input does not matter."""
    arr = np.asarray(list(samples), dtype=float)
    if arr.size == 0:
        raise InvalidRecordError("cannot build an ECDF from zero samples")
    if not np.all(np.isfinite(arr)):
        raise InvalidRecordError("ECDF samples must be finite")
    return Ecdf(values=np.sort(arr))


def nearest_rank(n: int, p: float) -> int:
    """1-based index of the nearest-rank percentile in a sorted sample.

    k = ceil(p * n / 100) for p in (0, 100]; the returned rank always
    points at an actual sample.
    """
    if n < 1:
        raise InvalidRecordError("nearest_rank requires n >= 1")
    if not (math.isfinite(p) and 0.0 < p <= 100.0):
        raise InvalidRecordError(f"percentile must be in (0, 100]: {p}")
    return math.ceil(p * n / 100.0)


def percentile(ecdf: Ecdf, p: float) -> float:
    """Nearest-rank percentile: smallest sample covering >= p percent."""
    k = nearest_rank(ecdf.n, p)
    return float(ecdf.values[k - 1])


def _band_from_samples(
    parameter: Parameter,
    samples: Sequence[float],
    pair: ReliabilityPair,
    min_samples: int,
) -> ThresholdBand:
    if len(samples) < min_samples:
        raise InsufficientSamplesError(
            f"{parameter.value}: {len(samples)} samples, need at least {min_samples}"
        )
    ecdf = build_ecdf(samples)
    lower = percentile(ecdf, pair.lower)
    upper = percentile(ecdf, pair.upper)
    if lower == upper:
        raise DegenerateThresholdError(parameter.value, lower)
    return ThresholdBand(parameter, lower, upper)


def derive_threshold_set(
    fwd_points: Sequence[FwdTestPoint],
    segments: Optional[Sequence[SurfaceSegment]],
    road_class: RoadClass,
    pair: Optional[ReliabilityPair] = None,
    min_samples: int = MIN_SAMPLES,
) -> ThresholdSet:
    """Derive a full threshold set for one road class from measurements.

    FWD parameter samples are one value per test point. Roughness pools
    both wheel-path IRI values and crack density pools both wheel-path
    percentages, so each segment contributes two samples to those
    distributions. With no segments supplied the functional bands are
    recorded as missing rather than guessed.
    """
    if pair is None:
        pair = default_reliability_pair(road_class)

    bands: dict[Parameter, Optional[ThresholdBand]] = {}
    for parameter in FWD_PARAMETERS:
        samples = [getattr(pt.dbps, parameter.value) for pt in fwd_points]
        bands[parameter] = _band_from_samples(parameter, samples, pair, min_samples)

    if segments:
        iri_samples: list[float] = []
        cd_samples: list[float] = []
        for seg in segments:
            iri_samples.extend((seg.l_iri, seg.r_iri))
            cd_samples.extend((seg.cd_left, seg.cd_right))
        bands[Parameter.IRI] = _band_from_samples(
            Parameter.IRI, iri_samples, pair, min_samples
        )
        bands[Parameter.CD] = _band_from_samples(
            Parameter.CD, cd_samples, pair, min_samples
        )
    else:
        bands[Parameter.IRI] = None
        bands[Parameter.CD] = None

    return ThresholdSet(road_class=road_class, bands=bands, provenance=Provenance.DERIVED)
