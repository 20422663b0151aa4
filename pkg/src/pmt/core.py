"""Shared vocabulary for pavement condition measurements and ratings.

Measurement records (deflection basins, surface segments), derived
deflection basin parameters, Good/Fair/Poor rating bands, and unit
handling. Everything here is immutable after construction and safe to
share between threads.

Canonical internal units: microns for deflections, m/km for roughness,
percent for crack density, inches for pavement thickness, pounds-force
for the drop load.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional

from .errors import InvalidBasinError, InvalidRecordError, UnitError

MICRONS_PER_MIL = 25.4
IN_PER_MI_PER_M_PER_KM = 63.36  # roughness: 1 m/km = 63.36 in/mi

SEGMENT_LENGTH_M = 1.8
SEGMENT_WIDTH_M = 3.6

DIRECTIONS = frozenset({"EB", "WB", "NB", "SB"})
LANES = frozenset({"DL", "PL"})


class RoadClass(enum.Enum):
    """Road classification used to key thresholds and design constants."""

    STATE_ROAD = "state"
    US_HIGHWAY = "us"
    INTERSTATE = "interstate"

    @classmethod
    def parse(cls, text: str) -> "RoadClass":
        t = text.strip().lower().replace("-", "_").replace(" ", "_")
        aliases = {
            "state": cls.STATE_ROAD,
            "state_road": cls.STATE_ROAD,
            "sr": cls.STATE_ROAD,
            "us": cls.US_HIGHWAY,
            "us_highway": cls.US_HIGHWAY,
            "interstate": cls.INTERSTATE,
            "interstate_highway": cls.INTERSTATE,
        }
        if t not in aliases:
            raise InvalidRecordError(f"unknown road class: {text!r}")
        return aliases[t]


class Rating(enum.Enum):
    """Condition rating with the total order GOOD < FAIR < POOR.

    UNKNOWN marks a parameter that could not be rated (missing data or
    missing band); it sits outside the severity order.
    """

    GOOD = "good"
    FAIR = "fair"
    POOR = "poor"
    UNKNOWN = "unknown"

    @property
    def severity(self) -> Optional[int]:
        return {Rating.GOOD: 0, Rating.FAIR: 1, Rating.POOR: 2}.get(self)


def worst_rating(ratings: Iterable[Rating]) -> Rating:
    """Worst (most severe) rating, ignoring UNKNOWN entries.

    An empty or all-UNKNOWN input yields UNKNOWN; callers decide how an
    unrated group degrades.
    """
    worst = Rating.UNKNOWN
    for r in ratings:
        if r.severity is None:
            continue
        if worst.severity is None or r.severity > worst.severity:
            worst = r
    return worst


class Parameter(enum.Enum):
    """Condition rating parameters that carry a threshold band."""

    D0 = "d0"
    D60 = "d60"
    SCI = "sci"
    BCI = "bci"
    BDI = "bdi"
    IRI = "iri"
    CD = "cd"

    @classmethod
    def parse(cls, text: str) -> "Parameter":
        try:
            return cls(text.strip().lower())
        except ValueError:
            raise InvalidRecordError(f"unknown parameter id: {text!r}") from None


#: Parameters measured by the falling weight deflectometer (microns).
FWD_PARAMETERS = (Parameter.D0, Parameter.D60, Parameter.SCI, Parameter.BCI, Parameter.BDI)


def convert_deflection(value: float, from_unit: str, to_unit: str) -> float:
    """Convert a deflection between microns and mils (1 mil = 25.4 microns)."""
    if not math.isfinite(value):
        raise UnitError(f"non-finite deflection value: {value!r}")
    units = {"microns", "mils"}
    if from_unit not in units or to_unit not in units:
        raise UnitError(f"deflection units must be one of {sorted(units)}")
    if from_unit == to_unit:
        return value
    if from_unit == "mils":
        return value * MICRONS_PER_MIL
    return value / MICRONS_PER_MIL


@dataclass(frozen=True)
class DeflectionBasin:
    """One FWD drop: load and the five geophone deflections in microns.

    Sensor offsets from the load center are 0, 300, 600, 900 and 1500 mm
    (0, 12, 24, 36 and 60 in). Deflections normally decrease with offset
    but field data can violate that; such basins are kept and flagged
    through :attr:`is_monotone`.
    """

    d0: float
    d12: float
    d24: float
    d36: float
    d60: float
    load_lbf: float

    def __post_init__(self):
        for name in ("d0", "d12", "d24", "d36", "d60"):
            v = getattr(self, name)
            if v is None or not math.isfinite(v):
                raise InvalidBasinError(f"missing deflection {name}")
            if v <= 0:
                raise InvalidBasinError(f"non-positive deflection {name}: {v}")
        if not math.isfinite(self.load_lbf) or self.load_lbf <= 0:
            raise InvalidBasinError(f"non-positive load: {self.load_lbf}")

    @property
    def is_monotone(self) -> bool:
        return self.d0 >= self.d12 >= self.d24 >= self.d36 >= self.d60

    @property
    def deflections(self) -> tuple[float, float, float, float, float]:
        return (self.d0, self.d12, self.d24, self.d36, self.d60)


@dataclass(frozen=True)
class DbpVector:
    """Derived deflection basin parameters, in microns.

    sci = d0 - d12 (upper layers), bdi = d12 - d24 (base),
    bci = d24 - d36 (subbase); d0 and d60 are carried through as the
    overall-structure and subgrade indicators.
    """

    sci: float
    bdi: float
    bci: float
    d0: float
    d60: float


def derive_dbps(basin: DeflectionBasin) -> DbpVector:
    """Derive the basin parameters from raw deflections.

    Exact arithmetic on the stored micron values; negative results from
    non-monotone basins are permitted and carried through.
    """
    return DbpVector(
        sci=basin.d0 - basin.d12,
        bdi=basin.d12 - basin.d24,
        bci=basin.d24 - basin.d36,
        d0=basin.d0,
        d60=basin.d60,
    )


def validate_coordinates(latitude: float, longitude: float) -> None:
    if not (math.isfinite(latitude) and -90.0 <= latitude <= 90.0):
        raise InvalidRecordError(f"latitude out of range: {latitude}")
    if not (math.isfinite(longitude) and -180.0 <= longitude <= 180.0):
        raise InvalidRecordError(f"longitude out of range: {longitude}")


@dataclass(frozen=True)
class FwdTestPoint:
    """One located FWD measurement with its derived basin parameters."""

    route: str
    direction: str
    lane: str
    latitude: float
    longitude: float
    basin: DeflectionBasin
    dbps: Optional[DbpVector] = None
    station_m: Optional[float] = None
    hp_in: Optional[float] = None  # pavement thickness above subgrade

    def __post_init__(self):
        if not self.route:
            raise InvalidRecordError("empty route id")
        if self.direction not in DIRECTIONS:
            raise InvalidRecordError(f"direction must be one of {sorted(DIRECTIONS)}")
        if self.lane not in LANES:
            raise InvalidRecordError(f"lane must be one of {sorted(LANES)}")
        validate_coordinates(self.latitude, self.longitude)
        if self.dbps is None:
            object.__setattr__(self, "dbps", derive_dbps(self.basin))
        elif self.dbps != derive_dbps(self.basin):
            raise InvalidRecordError("dbps inconsistent with basin")
        if self.station_m is not None and not math.isfinite(self.station_m):
            raise InvalidRecordError(f"non-finite station: {self.station_m}")
        if self.hp_in is not None and not (math.isfinite(self.hp_in) and self.hp_in > 0):
            raise InvalidRecordError(f"non-positive pavement thickness: {self.hp_in}")


@dataclass(frozen=True)
class SurfaceSegment:
    """One 1.8 m road segment with per-wheel-path roughness and cracking."""

    route: str
    direction: str
    lane: str
    dmi: int
    latitude: float
    longitude: float
    l_iri: float  # m/km
    r_iri: float  # m/km
    cd_left: float  # percent
    cd_right: float  # percent
    surface_image_ref: Optional[str] = None
    row_image_ref: Optional[str] = None
    length_m: float = SEGMENT_LENGTH_M

    def __post_init__(self):
        if not self.route:
            raise InvalidRecordError("empty route id")
        if self.direction not in DIRECTIONS:
            raise InvalidRecordError(f"direction must be one of {sorted(DIRECTIONS)}")
        if self.lane not in LANES:
            raise InvalidRecordError(f"lane must be one of {sorted(LANES)}")
        if not isinstance(self.dmi, int) or self.dmi < 0:
            raise InvalidRecordError(f"dmi must be a non-negative integer: {self.dmi!r}")
        validate_coordinates(self.latitude, self.longitude)
        for name in ("l_iri", "r_iri"):
            v = getattr(self, name)
            if not math.isfinite(v) or v < 0:
                raise InvalidRecordError(f"{name} must be >= 0: {v}")
        for name in ("cd_left", "cd_right"):
            v = getattr(self, name)
            if not math.isfinite(v) or not 0.0 <= v <= 100.0:
                raise InvalidRecordError("cd out of [0,100]")

    @property
    def station_m(self) -> float:
        """Distance along the lane implied by the segment index."""
        return self.dmi * self.length_m


class Provenance(enum.Enum):
    """Where a threshold set came from."""

    DEFAULT = "default"
    DERIVED = "derived"
    USER_OVERRIDE = "user_override"


@dataclass(frozen=True)
class ThresholdBand:
    """A (lower, upper) pair splitting a parameter into Good/Fair/Poor.

    Units follow the parameter: microns for deflection parameters, m/km
    for IRI, percent for CD.
    """

    parameter: Parameter
    lower: float
    upper: float

    def __post_init__(self):
        if not (math.isfinite(self.lower) and math.isfinite(self.upper)):
            raise InvalidRecordError(f"non-finite band for {self.parameter.value}")
        if not self.lower < self.upper:
            raise InvalidRecordError(
                f"band for {self.parameter.value} needs lower < upper, "
                f"got ({self.lower}, {self.upper})"
            )


def classify(value: float, band: ThresholdBand) -> Rating:
    """Rate a value against a band.

    GOOD for value <= lower, FAIR for lower < value <= upper, POOR above.
    A value exactly on a boundary takes the less severe rating.
    """
    if band is None:
        raise InvalidRecordError("classify requires a threshold band")
    if not math.isfinite(value):
        raise InvalidRecordError(f"cannot classify non-finite value: {value!r}")
    if value <= band.lower:
        return Rating.GOOD
    if value <= band.upper:
        return Rating.FAIR
    return Rating.POOR


@dataclass(frozen=True)
class ThresholdSet:
    """One band per parameter for a road class.

    All seven parameters are always present as keys; IRI and CD may map
    to None where no functional thresholds exist (recorded explicitly as
    missing rather than silently absent).
    """

    road_class: RoadClass
    bands: Mapping[Parameter, Optional[ThresholdBand]]
    provenance: Provenance

    def __post_init__(self):
        object.__setattr__(self, "bands", dict(self.bands))
        missing = [p.value for p in Parameter if p not in self.bands]
        if missing:
            raise InvalidRecordError(f"threshold set missing parameters: {missing}")
        for p, band in self.bands.items():
            if band is not None and band.parameter is not p:
                raise InvalidRecordError(
                    f"band keyed {p.value} but tagged {band.parameter.value}"
                )

    def band(self, parameter: Parameter) -> Optional[ThresholdBand]:
        return self.bands[parameter]

    def with_bands(
        self,
        overrides: Mapping[Parameter, ThresholdBand],
        provenance: Provenance,
    ) -> "ThresholdSet":
        """New set with some bands replaced; untouched parameters keep theirs."""
        merged = dict(self.bands)
        for p, band in overrides.items():
            if band.parameter is not p:
                raise InvalidRecordError(
                    f"band keyed {p.value} but tagged {band.parameter.value}"
                )
            merged[p] = band
        return ThresholdSet(self.road_class, merged, provenance)


def _band_map(road_class: RoadClass, values: dict) -> dict:
    bands = {}
    for p in Parameter:
        pair = values.get(p)
        bands[p] = None if pair is None else ThresholdBand(p, pair[0], pair[1])
    return bands


# Shipped default bands for full-depth asphalt pavements (microns for the
# FWD parameters, m/km for IRI, percent for CD). Functional bands exist
# for the interstate class only; the others are recorded as missing.
_DEFAULT_BAND_VALUES = {
    RoadClass.STATE_ROAD: {
        Parameter.D0: (359.9, 388.6),
        Parameter.D60: (59.4, 62.2),
        Parameter.SCI: (111.0, 123.2),
        Parameter.BCI: (57.2, 62.2),
        Parameter.BDI: (81.5, 89.2),
    },
    RoadClass.US_HIGHWAY: {
        Parameter.D0: (227.6, 259.8),
        Parameter.D60: (53.1, 56.6),
        Parameter.SCI: (66.0, 76.7),
        Parameter.BCI: (34.3, 39.1),
        Parameter.BDI: (50.0, 55.9),
    },
    RoadClass.INTERSTATE: {
        Parameter.D0: (149.1, 214.9),
        Parameter.D60: (37.1, 47.5),
        Parameter.SCI: (43.2, 49.3),
        Parameter.BCI: (21.8, 33.8),
        Parameter.BDI: (25.4, 37.6),
        Parameter.IRI: (1.73, 2.07),
        Parameter.CD: (12.5, 13.2),
    },
}


def default_thresholds(road_class: RoadClass) -> ThresholdSet:
    """The shipped default threshold set for a road class."""
    return ThresholdSet(
        road_class=road_class,
        bands=_band_map(road_class, _DEFAULT_BAND_VALUES[road_class]),
        provenance=Provenance.DEFAULT,
    )
