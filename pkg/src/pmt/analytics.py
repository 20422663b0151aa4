"""Summary statistics over condition measurements.

Box-plot statistics and histograms for distribution review, and per-DMI
stem series that flag localized distress the aggregate statistics hide.
Series are addressed by the same ids the rating engine uses (l_iri,
r_iri, cd, d0, sci, bdi, d60, bci); crack density is the worse wheel
path.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .core import (
    FwdTestPoint,
    Parameter,
    Rating,
    SurfaceSegment,
    ThresholdSet,
    classify,
)
from .errors import InvalidRecordError, MixedGroupError
from .fusion import FusedSegmentProfile

SERIES_PARAMETER = {
    "l_iri": Parameter.IRI,
    "r_iri": Parameter.IRI,
    "cd": Parameter.CD,
    "d0": Parameter.D0,
    "sci": Parameter.SCI,
    "bdi": Parameter.BDI,
    "d60": Parameter.D60,
    "bci": Parameter.BCI,
}

SURFACE_SERIES = ("l_iri", "r_iri", "cd")
FWD_SERIES = ("d0", "sci", "bdi", "d60", "bci")


def _require_series(series: str) -> None:
    if series not in SERIES_PARAMETER:
        raise InvalidRecordError(
            f"unknown series id: {series!r}, expected one of {sorted(SERIES_PARAMETER)}"
        )


def segment_series_value(segment: SurfaceSegment, series: str) -> float:
    if series == "l_iri":
        return segment.l_iri
    if series == "r_iri":
        return segment.r_iri
    if series == "cd":
        return max(segment.cd_left, segment.cd_right)
    raise InvalidRecordError(f"series {series!r} is not a surface series")


def collect_series(
    fwd_points: Sequence[FwdTestPoint],
    segments: Sequence[SurfaceSegment],
    series: str,
) -> np.ndarray:
    """Raw sample array for a series: one value per segment for surface
    series, one per FWD test point for deflection series."""
    _require_series(series)
    if series in SURFACE_SERIES:
        return np.array([segment_series_value(s, series) for s in segments], dtype=float)
    return np.array([getattr(p.dbps, series) for p in fwd_points], dtype=float)


@dataclass(frozen=True)
class BoxStats:
    """Five-number summary plus mean and threshold exceedances."""

    n: int
    minimum: float
    q1: float
    median: float
    mean: float
    q3: float
    maximum: float
    outliers: tuple[float, ...]


def box_stats(values: Sequence[float], threshold: Optional[float] = None) -> BoxStats:
    """Box-plot statistics of a sample.

    Quartiles interpolate linearly between the closest ranks at
    h = (n - 1) * p. Outliers are the values strictly above the
    supplied threshold, not whisker-based.
    """
    arr = np.asarray(values, dtype=float)
    if arr.size == 0:
        raise InvalidRecordError("box_stats requires at least one value")
    if not np.all(np.isfinite(arr)):
        raise InvalidRecordError("box_stats values must be finite")
    q1, median, q3 = np.percentile(arr, [25.0, 50.0, 75.0])
    outliers = () if threshold is None else tuple(float(v) for v in np.sort(arr[arr > threshold]))
    return BoxStats(
        n=int(arr.size),
        minimum=float(arr.min()),
        q1=float(q1),
        median=float(median),
        mean=float(arr.mean()),
        q3=float(q3),
        maximum=float(arr.max()),
        outliers=outliers,
    )


@dataclass(frozen=True)
class Histogram:
    """Equal-width histogram; the last bin includes its right edge."""

    series: str
    edges: tuple[float, ...]
    counts: tuple[int, ...]

    @property
    def n(self) -> int:
        return sum(self.counts)


def histogram(values: Sequence[float], bins: int, series: str = "") -> Histogram:
    """Equal-width histogram over [min, max].

    Constant data widens the range by half a unit each side so the
    single occupied bin is well formed. Counts always sum to n.
    """
    if bins < 1:
        raise InvalidRecordError(f"bins must be >= 1: {bins}")
    arr = np.asarray(values, dtype=float)
    if arr.size == 0:
        raise InvalidRecordError("histogram requires at least one value")
    if not np.all(np.isfinite(arr)):
        raise InvalidRecordError("histogram values must be finite")
    counts, edges = np.histogram(arr, bins=bins)
    return Histogram(
        series=series,
        edges=tuple(float(e) for e in edges),
        counts=tuple(int(c) for c in counts),
    )


@dataclass(frozen=True)
class Stem:
    """One per-DMI sample of a series with its rating."""

    dmi: int
    value: float
    rating: Rating

    @property
    def flagged(self) -> bool:
        return self.rating is Rating.POOR


def exceedance_stems(
    profiles: Sequence[FusedSegmentProfile],
    thresholds: ThresholdSet,
    series: str,
) -> list[Stem]:
    """Per-DMI series values with ratings, for localized-distress review.

    Entries rated POOR sit above the upper threshold and are the
    flagged stems. Profiles lacking the series (no FWD point for a
    deflection series) are skipped; a missing band rates UNKNOWN but
    the value is still reported.
    """
    _require_series(series)
    groups = {(p.segment.route, p.segment.direction, p.segment.lane) for p in profiles}
    if len(groups) > 1:
        raise MixedGroupError(f"stem profiles span multiple lane groups: {sorted(groups)}")

    band = thresholds.band(SERIES_PARAMETER[series])
    stems = []
    for profile in sorted(profiles, key=lambda p: p.segment.dmi):
        if series in SURFACE_SERIES:
            value = segment_series_value(profile.segment, series)
        elif profile.fwd_point is None:
            continue
        else:
            value = getattr(profile.fwd_point.dbps, series)
        rating = Rating.UNKNOWN if band is None else classify(value, band)
        stems.append(Stem(dmi=profile.segment.dmi, value=value, rating=rating))
    return stems
