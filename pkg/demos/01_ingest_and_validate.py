"""
Ingesting FWD and surface-condition CSV files
=============================================

Measurement files arrive as CSV with fixed headers. Parsing validates
every row, converts US-customary units when asked, and reports rejects
and warnings per line instead of failing the whole file.
"""

from pmt.core import derive_dbps
from pmt.ingestion import FWD_HEADER, SEGMENT_HEADER, parse_fwd_csv, parse_segment_csv

# A small FWD file: route, direction, lane, coordinates, drop load in
# lbf and five deflections in microns (D0 at the load plate out to the
# 60-inch sensor). The third data row is broken on purpose.
fwd_csv = "\n".join([
    ",".join(FWD_HEADER),
    "I-65,NB,DL,39.500000,-86.100000,0.0,9000,180.0,134.0,104.0,74.0,42.0,12.0",
    "I-65,NB,DL,39.500450,-86.100000,50.0,9000,164.0,120.0,95.0,70.0,40.0,12.0",
    "I-65,NB,DL,39.500900,-86.100000,100.0,9000,,120.0,95.0,70.0,40.0,12.0",
    "I-65,NB,DL,39.501350,-86.100000,150.0,9000,150.0,160.0,95.0,70.0,40.0,12.0",
]).encode()

points, report = parse_fwd_csv(fwd_csv, units="si")
print(f"accepted {report.accepted} of {report.total} rows")
for line, reason in report.rejected:
    print(f"  rejected line {line}: {reason}")
for line, message in report.warnings:
    print(f"  warning  line {line}: {message}")

# Row 4 survived but with a warning: D12 exceeds D0, so the basin is
# non-monotone. Real basins occasionally do this; it is worth flagging
# but not worth discarding the drop.
basin = points[0].basin
dbps = derive_dbps(basin)
print(f"first basin: D0={basin.d0} um, D60={basin.d60} um")
print(f"  SCI={dbps.sci:.1f}  BDI={dbps.bdi:.1f}  BCI={dbps.bci:.1f}")

# Surface files carry one row per 0.001-mile segment: IRI for each
# wheel path (m/km) and crack density (percent), plus image references.
seg_csv = "\n".join([
    ",".join(SEGMENT_HEADER),
    "I-65,NB,DL,0,39.500000,-86.100000,1.20,1.30,4.0,5.0,img/0.png,img/0r.png",
    "I-65,NB,DL,1,39.500016,-86.100000,1.25,1.35,4.5,5.5,,",
]).encode()

segments, seg_report = parse_segment_csv(seg_csv, units="si")
print(f"segments accepted: {seg_report.accepted}")
print(f"dmi 0 sits at station {segments[0].station_m} m; images "
      f"{segments[0].surface_image_ref!r} / {segments[0].row_image_ref!r}")

# The same parsers accept units="us": deflections in mils and IRI in
# in/mi are converted to microns and m/km on the way in.
us_row = "I-65,NB,DL,39.5,-86.1,0.0,9000,7.0,5.0,4.0,3.0,2.0,12.0"
us_points, _ = parse_fwd_csv(
    (",".join(FWD_HEADER) + "\n" + us_row).encode(), units="us")
print(f"7.0 mils parsed under US units -> D0 = {us_points[0].basin.d0} um")
