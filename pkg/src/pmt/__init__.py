"""Pavement patching decision tools.

Fuses falling weight deflectometer basins with surface roughness and
crack density measurements, rates each 1.8 m segment against
reliability-derived Good/Fair/Poor thresholds, verifies deflection
thresholds against structural number ratios, and emits prioritized
surface/full-depth patching suggestions through a library API, CLI,
and HTTP service.
"""

from .core import (
    DbpVector,
    DeflectionBasin,
    FwdTestPoint,
    Parameter,
    Provenance,
    Rating,
    RoadClass,
    SurfaceSegment,
    ThresholdBand,
    ThresholdSet,
    classify,
    convert_deflection,
    default_thresholds,
    derive_dbps,
    worst_rating,
)
from .errors import PmtError
from .fusion import Completeness, FusedSegmentProfile, match_fwd_to_segments
from .reliability import (
    ReliabilityPair,
    build_ecdf,
    default_reliability_pair,
    derive_threshold_set,
    percentile,
)
from .structural import (
    SnResult,
    Verdict,
    VerificationReport,
    snr_for_point,
    verify_threshold,
)
from .suggestions import (
    Decision,
    MARKER_COLORS,
    PatchingSuggestion,
    PatchingTable,
    export_patching_table,
    rate_profile,
    suggest,
    suggest_road,
)

__version__ = "1.0.0"

__all__ = [
    "Completeness",
    "DbpVector",
    "Decision",
    "DeflectionBasin",
    "FusedSegmentProfile",
    "FwdTestPoint",
    "MARKER_COLORS",
    "Parameter",
    "PatchingSuggestion",
    "PatchingTable",
    "PmtError",
    "Provenance",
    "Rating",
    "ReliabilityPair",
    "RoadClass",
    "SnResult",
    "SurfaceSegment",
    "ThresholdBand",
    "ThresholdSet",
    "Verdict",
    "VerificationReport",
    "build_ecdf",
    "classify",
    "convert_deflection",
    "default_reliability_pair",
    "default_thresholds",
    "derive_dbps",
    "derive_threshold_set",
    "export_patching_table",
    "match_fwd_to_segments",
    "percentile",
    "rate_profile",
    "snr_for_point",
    "suggest",
    "suggest_road",
    "verify_threshold",
    "worst_rating",
]
