"""Patching decisions for fused segment profiles.

Deflections that localize damage deep in the structure (outer
deflection and base curvature) drive full-depth patching; surface
indicators (roughness, cracking, inner basin shape) drive surface
patching. A required action needs a Poor rating in its group, a
warning needs Fair. Deep findings dominate surface findings.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from enum import Enum
from typing import Mapping, Optional, Sequence

from .core import Parameter, Rating, ThresholdSet, classify, worst_rating
from .errors import InvalidRecordError
from .fusion import Completeness, FusedSegmentProfile

#: Patch footprint: one lane width by one segment length, meters.
PATCH_LENGTH_M = 3.6
PATCH_WIDTH_M = 1.8
PATCH_AREA_M2 = PATCH_LENGTH_M * PATCH_WIDTH_M

#: Rated series in report column order.
RATED_SERIES = ("l_iri", "r_iri", "cd", "d0", "sci", "bdi", "d60", "bci")
DEEP_SERIES = ("d60", "bci")
SHALLOW_SERIES = ("l_iri", "r_iri", "cd", "d0", "sci", "bdi")


class Decision(Enum):
    """Patching decision, ordered by severity."""

    NO_ACTION = "no_action"
    SURFACE_WARNING = "surface_warning"
    SURFACE_REQUIRED = "surface_required"
    FULL_DEPTH_WARNING = "full_depth_warning"
    FULL_DEPTH_REQUIRED = "full_depth_required"

    @property
    def severity(self) -> int:
        order = (
            Decision.NO_ACTION,
            Decision.SURFACE_WARNING,
            Decision.SURFACE_REQUIRED,
            Decision.FULL_DEPTH_WARNING,
            Decision.FULL_DEPTH_REQUIRED,
        )
        return order.index(self)


class PatchDepth(Enum):
    NONE = "none"
    SURFACE = "surface"
    FULL_DEPTH = "full_depth"


class Priority(Enum):
    NONE = "none"
    WARNING = "warning"
    REQUIRED = "required"


DECISION_DEPTH = {
    Decision.NO_ACTION: PatchDepth.NONE,
    Decision.SURFACE_WARNING: PatchDepth.SURFACE,
    Decision.SURFACE_REQUIRED: PatchDepth.SURFACE,
    Decision.FULL_DEPTH_WARNING: PatchDepth.FULL_DEPTH,
    Decision.FULL_DEPTH_REQUIRED: PatchDepth.FULL_DEPTH,
}

DECISION_PRIORITY = {
    Decision.NO_ACTION: Priority.NONE,
    Decision.SURFACE_WARNING: Priority.WARNING,
    Decision.SURFACE_REQUIRED: Priority.REQUIRED,
    Decision.FULL_DEPTH_WARNING: Priority.WARNING,
    Decision.FULL_DEPTH_REQUIRED: Priority.REQUIRED,
}

#: Map marker color per decision.
MARKER_COLORS = {
    Decision.FULL_DEPTH_REQUIRED: "red",
    Decision.FULL_DEPTH_WARNING: "orange",
    Decision.SURFACE_REQUIRED: "yellow",
    Decision.SURFACE_WARNING: "blue",
    Decision.NO_ACTION: "green",
}


@dataclass(frozen=True)
class RatingVector:
    """Per-series condition ratings for one segment."""

    l_iri: Rating
    r_iri: Rating
    cd: Rating
    d0: Rating
    sci: Rating
    bdi: Rating
    d60: Rating
    bci: Rating

    def series(self, name: str) -> Rating:
        if name not in RATED_SERIES:
            raise InvalidRecordError(f"unknown rated series: {name!r}")
        return getattr(self, name)


@dataclass(frozen=True)
class DecisionOutcome:
    decision: Decision
    triggers: tuple[str, ...]
    completeness: Completeness


def _classify_or_unknown(value: Optional[float], band) -> Rating:
    if value is None or band is None:
        return Rating.UNKNOWN
    return classify(value, band)


def rate_profile(profile: FusedSegmentProfile, thresholds: ThresholdSet) -> RatingVector:
    """Rate every series of a fused profile against a threshold set.

    Crack density is rated on the worse wheel path. Series without data
    (no FWD point) or without a band (missing functional thresholds)
    rate UNKNOWN.
    """
    seg = profile.segment
    iri_band = thresholds.band(Parameter.IRI)
    cd_band = thresholds.band(Parameter.CD)
    dbps = profile.fwd_point.dbps if profile.fwd_point is not None else None
    return RatingVector(
        l_iri=_classify_or_unknown(seg.l_iri, iri_band),
        r_iri=_classify_or_unknown(seg.r_iri, iri_band),
        cd=_classify_or_unknown(max(seg.cd_left, seg.cd_right), cd_band),
        d0=_classify_or_unknown(dbps.d0 if dbps else None, thresholds.band(Parameter.D0)),
        sci=_classify_or_unknown(dbps.sci if dbps else None, thresholds.band(Parameter.SCI)),
        bdi=_classify_or_unknown(dbps.bdi if dbps else None, thresholds.band(Parameter.BDI)),
        d60=_classify_or_unknown(dbps.d60 if dbps else None, thresholds.band(Parameter.D60)),
        bci=_classify_or_unknown(dbps.bci if dbps else None, thresholds.band(Parameter.BCI)),
    )


def decide(ratings: RatingVector) -> DecisionOutcome:
    """Turn a rating vector into a decision and its triggering series.

    The deep group (d60, bci) is consulted first; only if it is clean
    does the shallow group decide. UNKNOWN ratings never trigger: a
    group that is entirely UNKNOWN behaves as if it were Good, and the
    completeness flag records when that happened for the deep group.
    """
    deep_worst = worst_rating(ratings.series(s) for s in DEEP_SERIES)
    shallow_worst = worst_rating(ratings.series(s) for s in SHALLOW_SERIES)
    completeness = (
        Completeness.SURFACE_ONLY
        if all(ratings.series(s) is Rating.UNKNOWN for s in DEEP_SERIES)
        else Completeness.FULL
    )

    if deep_worst is Rating.POOR:
        decision, group, level = Decision.FULL_DEPTH_REQUIRED, DEEP_SERIES, Rating.POOR
    elif deep_worst is Rating.FAIR:
        decision, group, level = Decision.FULL_DEPTH_WARNING, DEEP_SERIES, Rating.FAIR
    elif shallow_worst is Rating.POOR:
        decision, group, level = Decision.SURFACE_REQUIRED, SHALLOW_SERIES, Rating.POOR
    elif shallow_worst is Rating.FAIR:
        decision, group, level = Decision.SURFACE_WARNING, SHALLOW_SERIES, Rating.FAIR
    else:
        return DecisionOutcome(Decision.NO_ACTION, (), completeness)

    triggers = tuple(s for s in group if ratings.series(s) is level)
    return DecisionOutcome(decision, triggers, completeness)


@dataclass(frozen=True)
class PatchingSuggestion:
    """Decision record for one segment, ready for mapping or export."""

    profile: FusedSegmentProfile
    ratings: RatingVector
    decision: Decision
    depth: PatchDepth
    priority: Priority
    triggers: tuple[str, ...]
    patch_area_m2: float
    completeness: Completeness

    @property
    def segment(self):
        return self.profile.segment

    @property
    def marker_color(self) -> str:
        return MARKER_COLORS[self.decision]


def suggest(profile: FusedSegmentProfile, thresholds: ThresholdSet) -> PatchingSuggestion:
    """Rate one profile and decide its patch."""
    ratings = rate_profile(profile, thresholds)
    outcome = decide(ratings)
    area = 0.0 if outcome.decision is Decision.NO_ACTION else PATCH_AREA_M2
    return PatchingSuggestion(
        profile=profile,
        ratings=ratings,
        decision=outcome.decision,
        depth=DECISION_DEPTH[outcome.decision],
        priority=DECISION_PRIORITY[outcome.decision],
        triggers=outcome.triggers,
        patch_area_m2=area,
        completeness=outcome.completeness,
    )


@dataclass(frozen=True)
class TableSummary:
    """Roll-up of a patching table; every figure equals its column sum."""

    n_segments: int
    decision_counts: Mapping[str, int]
    surface_area_m2: float
    full_depth_area_m2: float
    total_area_m2: float


@dataclass(frozen=True)
class PatchingTable:
    suggestions: tuple[PatchingSuggestion, ...]
    summary: TableSummary


def suggest_road(
    profiles: Sequence[FusedSegmentProfile], thresholds: ThresholdSet
) -> PatchingTable:
    """Suggestions for every profile, ordered by dmi, with totals."""
    rows = tuple(
        suggest(p, thresholds) for p in sorted(profiles, key=lambda p: p.segment.dmi)
    )
    counts = {d.value: 0 for d in Decision}
    surface = 0.0
    full_depth = 0.0
    for row in rows:
        counts[row.decision.value] += 1
        if row.depth is PatchDepth.SURFACE:
            surface += row.patch_area_m2
        elif row.depth is PatchDepth.FULL_DEPTH:
            full_depth += row.patch_area_m2
    summary = TableSummary(
        n_segments=len(rows),
        decision_counts=counts,
        surface_area_m2=surface,
        full_depth_area_m2=full_depth,
        total_area_m2=surface + full_depth,
    )
    return PatchingTable(suggestions=rows, summary=summary)


EXPORT_COLUMNS = (
    "route,direction,lane,dmi,rp,latitude,longitude,pavement_type,"
    "l_iri,r_iri,cd_left_pct,cd_right_pct,"
    "d0_um,sci_um,bdi_um,d60_um,bci_um,"
    "rating_l_iri,rating_r_iri,rating_cd,rating_d0,rating_sci,rating_bdi,"
    "rating_d60,rating_bci,"
    "patch_depth,patch_priority,patch_area_m2,triggers,completeness"
).split(",")

PAVEMENT_TYPE = "full-depth asphalt"


def export_patching_table(table: PatchingTable) -> str:
    """Render a patching table as CSV with a fixed column layout.

    Numeric formats are fixed (deflections to 0.1 um, IRI to 0.01,
    coordinates to six decimals) so identical inputs export
    byte-identical files. Segments without an FWD point leave the
    deflection columns empty.
    """
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(EXPORT_COLUMNS)
    for row in table.suggestions:
        seg = row.segment
        dbps = row.profile.fwd_point.dbps if row.profile.fwd_point else None
        if dbps is None:
            deflections = [""] * 5
        else:
            deflections = [
                f"{v:.1f}" for v in (dbps.d0, dbps.sci, dbps.bdi, dbps.d60, dbps.bci)
            ]
        writer.writerow(
            [
                seg.route,
                seg.direction,
                seg.lane,
                str(seg.dmi),
                f"{seg.station_m:.1f}",
                f"{seg.latitude:.6f}",
                f"{seg.longitude:.6f}",
                PAVEMENT_TYPE,
                f"{seg.l_iri:.2f}",
                f"{seg.r_iri:.2f}",
                f"{seg.cd_left:.1f}",
                f"{seg.cd_right:.1f}",
                *deflections,
                *(row.ratings.series(s).value for s in RATED_SERIES),
                row.depth.value,
                row.priority.value,
                f"{row.patch_area_m2:.2f}",
                ";".join(row.triggers),
                row.completeness.value,
            ]
        )
    return buf.getvalue()
