"""
From measurements to a prioritized patching list
================================================

Surface segments and FWD drops are collected by different vehicles at
different spacings, so the first step pairs each segment with its
nearest drop. Rating every indicator against the class thresholds then
feeds a fixed decision rule: deep-structure indicators (D60, BCI)
govern full-depth patching, everything else governs surface patching.
"""

from pmt.core import (
    DeflectionBasin,
    FwdTestPoint,
    RoadClass,
    SurfaceSegment,
    default_thresholds,
)
from pmt.fusion import match_fwd_to_segments
from pmt.suggestions import Decision, export_patching_table, suggest_road

# Ten segments; roughness and cracking worsen toward the end of the run.
segments = [
    SurfaceSegment(route="I-65", direction="NB", lane="DL", dmi=i,
                   latitude=39.5 + i * 1.7e-5, longitude=-86.1,
                   l_iri=1.2 + 0.12 * i, r_iri=1.2 + 0.12 * i,
                   cd_left=4.0 + 1.1 * i, cd_right=4.0 + 1.1 * i)
    for i in range(10)
]

# Three FWD drops along the same stretch; the last one shows a weak
# subgrade (high D60) on top of the surface distress.
def drop(lat, d0, d60):
    return FwdTestPoint(
        route="I-65", direction="NB", lane="DL",
        latitude=lat, longitude=-86.1,
        basin=DeflectionBasin(d0=d0, d12=d0 - 40.0, d24=d0 - 64.0,
                              d36=d0 - 84.0, d60=d60, load_lbf=9000.0),
        station_m=None, hp_in=12.0,
    )

points = [
    drop(39.50000, 140.0, 30.0),
    drop(39.50008, 170.0, 36.0),
    drop(39.50015, 230.0, 52.0),
]

# Matching prefers station distance when both sides have it, and falls
# back to great-circle distance otherwise (as here). Segments farther
# than the cutoff from any drop are rated on surface data alone.
profiles = match_fwd_to_segments(segments, points)
print(f"fused {len(profiles)} segments; "
      f"first matches a drop {profiles[0].distance_m:.1f} m away")

thresholds = default_thresholds(RoadClass.INTERSTATE)
table = suggest_road(profiles, thresholds)

# Suggestions come back in dmi order, one per segment. Triggers name
# the indicators that forced each decision; filtering out no-action
# rows leaves the work plan.
for s in table.suggestions:
    if s.decision is Decision.NO_ACTION:
        continue
    print(f"  dmi {s.segment.dmi}: {s.decision.value:<20} "
          f"triggers={','.join(s.triggers)}  area={s.patch_area_m2} m2")

summary = table.summary
print(f"totals: surface {summary.surface_area_m2} m2, "
      f"full depth {summary.full_depth_area_m2} m2, "
      f"overall {summary.total_area_m2} m2")

# The export is a stable CSV -- same data in, same bytes out -- suitable
# for handing to a works contractor or diffing between surveys.
csv_text = export_patching_table(table)
header, first_row = csv_text.splitlines()[:2]
print(f"export: {len(csv_text.splitlines())} lines, "
      f"{len(header.split(','))} columns")
print(f"first row starts: {first_row[:60]}...")
