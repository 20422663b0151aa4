"""
Driving the HTTP service end to end
===================================

Everything the library does is reachable over HTTP: upload a dataset,
derive and install thresholds, browse rated segments, pull charts data
and download the patching CSV. This walkthrough runs the app in-process
against a temporary data directory.
"""

import tempfile
from pathlib import Path

from fastapi.testclient import TestClient

from pmt.ingestion import FWD_HEADER, SEGMENT_HEADER
from pmt.service import create_app

# Build a survey big enough to derive thresholds from: 40 segments and
# 35 FWD drops on the same northbound driving lane.
fwd_rows = [",".join(FWD_HEADER)]
for i in range(35):
    d0 = 120.0 + 3.0 * i
    fwd_rows.append(
        f"I-65,NB,DL,{39.5 + i * 1e-4:.6f},-86.100000,{i * 10.0},9000,"
        f"{d0},{d0 * 0.72},{d0 * 0.52},{d0 * 0.38},{d0 * 0.2},12.0"
    )
seg_rows = [",".join(SEGMENT_HEADER)]
for i in range(40):
    seg_rows.append(
        f"I-65,NB,DL,{i},{39.5 + i * 1.6e-5:.6f},-86.100000,"
        f"{1.1 + 0.02 * i},{1.15 + 0.02 * i},{3.0 + 0.2 * i},{3.2 + 0.2 * i},,"
    )

tmp = Path(tempfile.mkdtemp())
with TestClient(create_app(tmp)) as client:
    # Upload both files as one dataset; the response is the stored
    # manifest plus per-file validation reports.
    r = client.post(
        "/datasets",
        files={
            "fwd": ("fwd.csv", "\n".join(fwd_rows).encode(), "text/csv"),
            "segments": ("segments.csv", "\n".join(seg_rows).encode(), "text/csv"),
        },
        data={"road_class": "interstate", "units": "si"},
    )
    body = r.json()
    ds_id = body["manifest"]["dataset_id"]
    print(f"POST /datasets -> {r.status_code}, id {ds_id}, "
          f"{body['fwd_report']['accepted']} drops, "
          f"{body['segments_report']['accepted']} segments")

    # Derive bands from the dataset, then install them as the stored
    # interstate override. Until the PUT, the stored set is untouched.
    derived = client.post("/thresholds/derive",
                          json={"dataset_id": ds_id}).json()
    print(f"derived d0 band: {derived['bands']['d0']}")
    bands = {p: [b["lower"], b["upper"]]
             for p, b in derived["bands"].items() if b is not None}
    client.put("/thresholds/interstate", json={"bands": bands})
    stored = client.get("/thresholds/interstate").json()
    print(f"stored provenance is now {stored['provenance']!r}")

    # Rated segments for the map: every segment carries its ratings,
    # decision, marker color and a street-view link.
    segs = client.get("/roads/I-65/segments").json()
    worst = max(segs["segments"], key=lambda s: s["dmi"])
    print(f"GET segments -> {len(segs['segments'])} rows; dmi {worst['dmi']} "
          f"is {worst['decision']} (marker {worst['marker_color']})")

    # What-if: tighter bands in the query rate this response only.
    forced = client.get("/roads/I-65/segments",
                        params={"thresholds": "iri:1.0:1.2"})
    n_action = sum(s["decision"] != "no_action"
                   for s in forced.json()["segments"])
    print(f"what-if iri:1.0-1.2 -> {n_action} actionable segments "
          f"(stored thresholds unchanged)")

    # Distribution endpoints feed the charts.
    stats = client.get("/roads/I-65/stats",
                       params={"parameter": "d0", "groupby": "lane"}).json()
    group = stats["groups"][0]
    print(f"d0 by lane: {group['key']} median {group['median']:.1f} um "
          f"over {group['n']} drops")
    hist = client.get("/roads/I-65/histogram",
                      params={"parameter": "l_iri", "bins": 6}).json()
    print(f"l_iri histogram: counts {hist['counts']}")

    # The deliverable: a deterministic CSV download.
    csv_resp = client.get("/roads/I-65/patching.csv")
    print(f"GET patching.csv -> {csv_resp.headers['content-disposition']}, "
          f"{len(csv_resp.content)} bytes")
