"""Pairing FWD test points with the surface segments they describe.

FWD testing is sparse (hundreds of meters apart) while surface segments
tile the lane every 1.8 m, so each segment adopts the nearest FWD point
within a cutoff. Segments with no structural point in range still flow
through the pipeline, rated on surface condition alone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

from .core import FwdTestPoint, SurfaceSegment
from .errors import InvalidRecordError, MixedGroupError

EARTH_RADIUS_M = 6371008.8
DEFAULT_MAX_DISTANCE_M = 200.0


def great_circle_distance(lat1: float, lon1: float, lat2: float, lon2: float) -> float:
    """Haversine distance in meters on a spherical earth."""
    phi1, phi2 = math.radians(lat1), math.radians(lat2)
    dphi = math.radians(lat2 - lat1)
    dlam = math.radians(lon2 - lon1)
    h = math.sin(dphi / 2.0) ** 2 + math.cos(phi1) * math.cos(phi2) * math.sin(dlam / 2.0) ** 2
    return 2.0 * EARTH_RADIUS_M * math.asin(min(1.0, math.sqrt(h)))


class Completeness(Enum):
    """Whether a fused profile carries structural data."""

    FULL = "full"
    SURFACE_ONLY = "surface_only"


@dataclass(frozen=True)
class FusedSegmentProfile:
    """A surface segment together with its adopted FWD point, if any."""

    segment: SurfaceSegment
    fwd_point: Optional[FwdTestPoint]
    distance_m: Optional[float]
    completeness: Completeness


def _pair_distance(point: FwdTestPoint, segment: SurfaceSegment) -> float:
    # Station offsets are exact along the lane; fall back to coordinates
    # only for points located by GPS alone.
    if point.station_m is not None:
        return abs(point.station_m - segment.station_m)
    return great_circle_distance(
        point.latitude, point.longitude, segment.latitude, segment.longitude
    )


def match_fwd_to_segments(
    segments: Sequence[SurfaceSegment],
    fwd_points: Sequence[FwdTestPoint],
    max_distance_m: float = DEFAULT_MAX_DISTANCE_M,
) -> list[FusedSegmentProfile]:
    """Adopt the nearest in-range FWD point for every segment.

    All inputs must belong to one (route, direction, lane) group. Ties
    on distance break toward the lower station, then the earlier input
    point, so repeated runs fuse identically. Returned profiles are
    ordered by dmi.
    """
    if not (math.isfinite(max_distance_m) and max_distance_m >= 0):
        raise InvalidRecordError(f"max_distance_m must be >= 0: {max_distance_m}")

    groups = {(s.route, s.direction, s.lane) for s in segments}
    groups |= {(p.route, p.direction, p.lane) for p in fwd_points}
    if len(groups) > 1:
        raise MixedGroupError(f"records span multiple lane groups: {sorted(groups)}")

    seen_dmi = set()
    for seg in segments:
        if seg.dmi in seen_dmi:
            raise InvalidRecordError(f"duplicate segment dmi: {seg.dmi}")
        seen_dmi.add(seg.dmi)

    profiles = []
    for seg in sorted(segments, key=lambda s: s.dmi):
        best = None
        best_key = None
        for idx, point in enumerate(fwd_points):
            d = _pair_distance(point, seg)
            key = (d, point.station_m if point.station_m is not None else math.inf, idx)
            if best_key is None or key < best_key:
                best, best_key = point, key
        if best is not None and best_key[0] <= max_distance_m:
            profiles.append(
                FusedSegmentProfile(
                    segment=seg,
                    fwd_point=best,
                    distance_m=best_key[0],
                    completeness=Completeness.FULL,
                )
            )
        else:
            profiles.append(
                FusedSegmentProfile(
                    segment=seg,
                    fwd_point=None,
                    distance_m=None,
                    completeness=Completeness.SURFACE_ONLY,
                )
            )
    return profiles
