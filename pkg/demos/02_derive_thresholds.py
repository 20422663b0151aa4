"""
Deriving Good/Fair/Poor bands from network measurements
=======================================================

Rating bands come in two flavors: shipped defaults per road class, and
bands derived from your own network's measurements. Derivation builds
the empirical CDF of each condition indicator and reads it at a pair of
reliability levels with the nearest-rank rule, so every band edge is an
actual measured value.
"""

from pmt.core import (
    DeflectionBasin,
    FwdTestPoint,
    Parameter,
    RoadClass,
    SurfaceSegment,
    default_thresholds,
)
from pmt.reliability import (
    ReliabilityPair,
    build_ecdf,
    derive_threshold_set,
    percentile,
)

# The nearest-rank percentile of n samples at level p is the k-th
# smallest with k = ceil(p * n / 100); it always returns a sample.
ecdf = build_ecdf(range(1, 41))  # 1..40
print(f"p90 of 1..40 -> {percentile(ecdf, 90.0)} (rank 36)")
print(f"p95 of 1..40 -> {percentile(ecdf, 95.0)} (rank 38)")

# Synthesize a small survey: 35 FWD drops whose D0 climbs steadily, and
# 40 surface segments with mild roughness and cracking.
points = []
for i in range(35):
    d0 = 100.0 + 4.0 * i
    points.append(FwdTestPoint(
        route="I-65", direction="NB", lane="DL",
        latitude=39.5 + i * 1e-4, longitude=-86.1,
        basin=DeflectionBasin(d0=d0, d12=d0 * 0.75, d24=d0 * 0.55,
                              d36=d0 * 0.40, d60=d0 * 0.22, load_lbf=9000.0),
        station_m=i * 9.0, hp_in=12.0,
    ))

segments = [
    SurfaceSegment(route="I-65", direction="NB", lane="DL", dmi=i,
                   latitude=39.5 + i * 1e-5, longitude=-86.1,
                   l_iri=1.0 + 0.03 * i, r_iri=1.1 + 0.03 * i,
                   cd_left=3.0 + 0.25 * i, cd_right=3.5 + 0.25 * i)
    for i in range(40)
]

# Interstates rate against the 90th/95th percentile pair; lower classes
# use laxer pairs because their traffic tolerates more deflection.
derived = derive_threshold_set(points, segments, RoadClass.INTERSTATE,
                               ReliabilityPair(90.0, 95.0))
for parameter in Parameter:
    band = derived.band(parameter)
    if band is not None:
        print(f"derived {parameter.value:>4}: good below {band.lower:g}, "
              f"poor above {band.upper:g}")

# Compare with the shipped interstate defaults. A derived D0 band far
# from the default one usually means the surveyed stretch is in much
# better or worse shape than the calibration network.
defaults = default_thresholds(RoadClass.INTERSTATE)
d0_default = defaults.band(Parameter.D0)
d0_derived = derived.band(Parameter.D0)
print(f"default  D0 band: ({d0_default.lower}, {d0_default.upper})")
print(f"derived  D0 band: ({d0_derived.lower}, {d0_derived.upper})")

# Derivation is order-independent: shuffling the survey changes nothing.
assert derive_threshold_set(points[::-1], segments[::-1],
                            RoadClass.INTERSTATE,
                            ReliabilityPair(90.0, 95.0)) == derived
print("reversed input order -> identical threshold set")
