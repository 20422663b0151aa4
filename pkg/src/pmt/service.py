"""HTTP facade over ingestion, thresholds, fusion, and suggestions.

Every response is recomputed from the on-disk store, so identical
store contents and identical queries give identical responses. Query
supplied threshold overrides affect only the request that carries them;
persisted overrides change only through PUT.
"""

from __future__ import annotations

from pathlib import Path
from typing import Optional

from fastapi import FastAPI, File, Form, HTTPException, Response, UploadFile
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel

from .analytics import SERIES_PARAMETER, box_stats, collect_series, histogram
from .core import (
    FwdTestPoint,
    Parameter,
    Provenance,
    RoadClass,
    SurfaceSegment,
    ThresholdBand,
    ThresholdSet,
    validate_coordinates,
)
from .errors import (
    DatasetExistsError,
    DatasetNotFoundError,
    MixedGroupError,
    PmtError,
)
from .fusion import match_fwd_to_segments
from .ingestion import (
    DatasetStore,
    ThresholdOverride,
    ThresholdStore,
    collect_route_records,
    ingest_dataset,
)
from .reliability import ReliabilityPair, derive_threshold_set
from .structural import snr_for_point
from .suggestions import (
    PatchingSuggestion,
    PatchingTable,
    RATED_SERIES,
    export_patching_table,
    suggest_road,
)

MAX_UPLOAD_BYTES = 64 * 1024 * 1024


def street_view_url(latitude: float, longitude: float) -> str:
    """Deterministic street-level map URL for a coordinate pair."""
    validate_coordinates(latitude, longitude)
    return (
        "https://www.google.com/maps/@?api=1&map_action=pano"
        f"&viewpoint={latitude:.6f},{longitude:.6f}"
    )


def parse_threshold_query(text: str) -> dict[Parameter, ThresholdBand]:
    """Parse query overrides like ``d0:150:215,iri:1.5:2.0``."""
    overrides: dict[Parameter, ThresholdBand] = {}
    for entry in text.split(","):
        entry = entry.strip()
        if not entry:
            continue
        parts = entry.split(":")
        if len(parts) != 3:
            raise PmtError(f"override must be parameter:lower:upper, got {entry!r}")
        parameter = Parameter.parse(parts[0])
        try:
            lower, upper = float(parts[1]), float(parts[2])
        except ValueError:
            raise PmtError(f"override bounds must be numbers, got {entry!r}") from None
        overrides[parameter] = ThresholdBand(parameter, lower, upper)
    return overrides


def _threshold_set_json(ts: ThresholdSet) -> dict:
    return {
        "road_class": ts.road_class.value,
        "provenance": ts.provenance.value,
        "bands": {
            p.value: (
                None
                if ts.band(p) is None
                else {"lower": ts.band(p).lower, "upper": ts.band(p).upper}
            )
            for p in Parameter
        },
    }


def _report_json(report) -> dict:
    return {
        "accepted": report.accepted,
        "rejected": [{"line": ln, "reason": reason} for ln, reason in report.rejected],
        "warnings": [{"line": ln, "reason": reason} for ln, reason in report.warnings],
    }


def _fwd_json(point: FwdTestPoint, road_class: RoadClass) -> dict:
    basin = point.basin
    out = {
        "latitude": point.latitude,
        "longitude": point.longitude,
        "station_m": point.station_m,
        "load_lbf": basin.load_lbf,
        "hp_in": point.hp_in,
        "d0": basin.d0,
        "d12": basin.d12,
        "d24": basin.d24,
        "d36": basin.d36,
        "d60": basin.d60,
        "sci": point.dbps.sci,
        "bdi": point.dbps.bdi,
        "bci": point.dbps.bci,
        "monotone": basin.is_monotone,
        "m_r_psi": None,
        "sn_required": None,
        "sn_effective": None,
        "snr": None,
    }
    if point.hp_in is not None:
        try:
            sn = snr_for_point(point, road_class)
        except PmtError:
            return out
        out.update(
            m_r_psi=sn.m_r_psi,
            sn_required=sn.sn_required,
            sn_effective=sn.sn_effective,
            snr=sn.snr,
        )
    return out


def _segment_view(row: PatchingSuggestion, road_class: RoadClass) -> dict:
    seg = row.segment
    point = row.profile.fwd_point
    return {
        "route": seg.route,
        "direction": seg.direction,
        "lane": seg.lane,
        "dmi": seg.dmi,
        "rp_m": seg.station_m,
        "latitude": seg.latitude,
        "longitude": seg.longitude,
        "l_iri": seg.l_iri,
        "r_iri": seg.r_iri,
        "cd_left": seg.cd_left,
        "cd_right": seg.cd_right,
        "surface_image": seg.surface_image_ref,
        "row_image": seg.row_image_ref,
        "completeness": row.completeness.value,
        "fwd_distance_m": row.profile.distance_m,
        "fwd": None if point is None else _fwd_json(point, road_class),
        "ratings": {s: row.ratings.series(s).value for s in RATED_SERIES},
        "decision": row.decision.value,
        "patch_depth": row.depth.value,
        "patch_priority": row.priority.value,
        "patch_area_m2": row.patch_area_m2,
        "triggers": list(row.triggers),
        "marker_color": row.marker_color,
        "street_view_url": street_view_url(seg.latitude, seg.longitude),
    }


def _summary_json(table: PatchingTable) -> dict:
    s = table.summary
    return {
        "n_segments": s.n_segments,
        "decision_counts": dict(s.decision_counts),
        "surface_area_m2": s.surface_area_m2,
        "full_depth_area_m2": s.full_depth_area_m2,
        "total_area_m2": s.total_area_m2,
    }


class ThresholdPutBody(BaseModel):
    bands: dict[str, tuple[float, float]]
    note: Optional[str] = None


class DeriveBody(BaseModel):
    dataset_id: str
    pair: Optional[tuple[float, float]] = None


def _http(status: int, exc: Exception) -> HTTPException:
    return HTTPException(status_code=status, detail=str(exc))


def create_app(data_dir: Path | str, max_upload_bytes: int = MAX_UPLOAD_BYTES) -> FastAPI:
    """Build the API over one data directory."""
    data_dir = Path(data_dir)
    datasets = DatasetStore(data_dir)
    thresholds = ThresholdStore(data_dir)

    app = FastAPI(title="pavement patching service")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    def _road_class_arg(text: str) -> RoadClass:
        try:
            return RoadClass.parse(text)
        except PmtError as e:
            raise _http(422, e)

    def _route_records(route: str):
        try:
            return collect_route_records(datasets, route)
        except DatasetNotFoundError as e:
            raise _http(404, e)
        except MixedGroupError as e:
            raise _http(422, e)

    def _select_group(
        fwd: list[FwdTestPoint],
        segments: list[SurfaceSegment],
        direction: Optional[str],
        lane: Optional[str],
        route: str,
    ):
        groups = sorted({(s.direction, s.lane) for s in segments})
        if direction is None and lane is None and len(groups) == 1:
            direction, lane = groups[0]
        if direction is None or lane is None:
            raise HTTPException(
                status_code=422,
                detail=f"route {route} has lane groups {groups}; "
                "specify direction and lane",
            )
        direction, lane = direction.upper(), lane.upper()
        seg_group = [s for s in segments if (s.direction, s.lane) == (direction, lane)]
        fwd_group = [p for p in fwd if (p.direction, p.lane) == (direction, lane)]
        if not seg_group:
            raise HTTPException(
                status_code=404,
                detail=f"no segments for {route} {direction} {lane}",
            )
        return direction, lane, seg_group, fwd_group

    def _effective_thresholds(road_class: RoadClass, query: Optional[str]) -> ThresholdSet:
        ts = thresholds.effective(road_class)
        if query:
            try:
                overrides = parse_threshold_query(query)
            except PmtError as e:
                raise _http(422, e)
            if overrides:
                ts = ts.with_bands(overrides, provenance=Provenance.USER_OVERRIDE)
        return ts

    def _road_table(
        route: str,
        direction: Optional[str],
        lane: Optional[str],
        threshold_query: Optional[str],
    ):
        road_class, fwd, segments = _route_records(route)
        direction, lane, seg_group, fwd_group = _select_group(
            fwd, segments, direction, lane, route
        )
        ts = _effective_thresholds(road_class, threshold_query)
        profiles = match_fwd_to_segments(seg_group, fwd_group)
        table = suggest_road(profiles, ts)
        return road_class, direction, lane, ts, table

    @app.get("/datasets")
    def list_datasets():
        return {"datasets": [m.to_dict() for m in datasets.list_manifests()]}

    @app.post("/datasets", status_code=201)
    async def post_dataset(
        fwd: UploadFile = File(...),
        segments: UploadFile = File(...),
        units: str = Form("si"),
        road_class: str = Form(...),
        dataset_id: Optional[str] = Form(None),
    ):
        fwd_bytes = await fwd.read()
        seg_bytes = await segments.read()
        if len(fwd_bytes) > max_upload_bytes or len(seg_bytes) > max_upload_bytes:
            raise HTTPException(status_code=413, detail="upload exceeds size limit")
        rc = _road_class_arg(road_class)
        try:
            ds, fwd_report, seg_report = ingest_dataset(
                datasets,
                fwd_bytes,
                seg_bytes,
                units=units,
                road_class=rc,
                dataset_id=dataset_id,
                fwd_name=fwd.filename or "fwd.csv",
                segment_name=segments.filename or "segments.csv",
            )
        except DatasetExistsError as e:
            raise _http(409, e)
        except PmtError as e:
            raise _http(400, e)
        return {
            "manifest": ds.manifest.to_dict(),
            "fwd_report": _report_json(fwd_report),
            "segments_report": _report_json(seg_report),
        }

    @app.get("/thresholds/{road_class}")
    def get_thresholds(road_class: str):
        rc = _road_class_arg(road_class)
        return _threshold_set_json(thresholds.effective(rc))

    @app.put("/thresholds/{road_class}")
    def put_thresholds(road_class: str, body: ThresholdPutBody):
        rc = _road_class_arg(road_class)
        try:
            bands = tuple(
                ThresholdBand(Parameter.parse(pid), pair[0], pair[1])
                for pid, pair in body.bands.items()
            )
        except PmtError as e:
            raise _http(422, e)
        thresholds.put_override(
            ThresholdOverride(
                road_class=rc,
                bands=bands,
                provenance=Provenance.USER_OVERRIDE,
                note=body.note,
            )
        )
        return _threshold_set_json(thresholds.effective(rc))

    @app.post("/thresholds/derive")
    def derive_thresholds(body: DeriveBody):
        try:
            ds = datasets.load(body.dataset_id)
        except DatasetNotFoundError as e:
            raise _http(404, e)
        try:
            pair = None if body.pair is None else ReliabilityPair(*body.pair)
            derived = derive_threshold_set(
                ds.fwd_points, ds.segments, ds.manifest.road_class, pair=pair
            )
        except PmtError as e:
            raise _http(422, e)
        return _threshold_set_json(derived)

    @app.get("/roads/{route}/segments")
    def road_segments(
        route: str,
        direction: Optional[str] = None,
        lane: Optional[str] = None,
        thresholds: Optional[str] = None,
    ):
        road_class, direction, lane, ts, table = _road_table(
            route, direction, lane, thresholds
        )
        return {
            "route": route,
            "direction": direction,
            "lane": lane,
            "road_class": road_class.value,
            "thresholds": _threshold_set_json(ts),
            "summary": _summary_json(table),
            "segments": [_segment_view(row, road_class) for row in table.suggestions],
        }

    @app.get("/roads/{route}/patching.csv")
    def road_patching_csv(
        route: str,
        direction: Optional[str] = None,
        lane: Optional[str] = None,
        thresholds: Optional[str] = None,
    ):
        _, direction, lane, _, table = _road_table(route, direction, lane, thresholds)
        csv_text = export_patching_table(table)
        filename = f"{route}-{direction}-{lane}-patching.csv".replace("/", "_")
        return Response(
            content=csv_text,
            media_type="text/csv",
            headers={"Content-Disposition": f'attachment; filename="{filename}"'},
        )

    def _series_filter(
        fwd: list[FwdTestPoint],
        segments: list[SurfaceSegment],
        direction: Optional[str],
        lane: Optional[str],
    ):
        if direction is not None:
            direction = direction.upper()
            fwd = [p for p in fwd if p.direction == direction]
            segments = [s for s in segments if s.direction == direction]
        if lane is not None:
            lane = lane.upper()
            fwd = [p for p in fwd if p.lane == lane]
            segments = [s for s in segments if s.lane == lane]
        return fwd, segments

    @app.get("/roads/{route}/stats")
    def road_stats(
        route: str,
        parameter: str,
        groupby: str = "none",
        direction: Optional[str] = None,
        lane: Optional[str] = None,
        threshold: Optional[float] = None,
    ):
        if parameter not in SERIES_PARAMETER:
            raise HTTPException(
                status_code=422, detail=f"unknown parameter id: {parameter!r}"
            )
        if groupby not in ("none", "lane", "direction"):
            raise HTTPException(
                status_code=422, detail="groupby must be none, lane or direction"
            )
        _, fwd, segments = _route_records(route)
        fwd, segments = _series_filter(fwd, segments, direction, lane)

        def group_key(rec):
            if groupby == "lane":
                return rec.lane
            if groupby == "direction":
                return rec.direction
            return "all"

        keys = sorted({group_key(s) for s in segments} | {group_key(p) for p in fwd})
        groups = []
        for key in keys:
            g_fwd = [p for p in fwd if group_key(p) == key]
            g_seg = [s for s in segments if group_key(s) == key]
            values = collect_series(g_fwd, g_seg, parameter)
            if values.size == 0:
                continue
            stats = box_stats(values, threshold=threshold)
            groups.append(
                {
                    "key": key,
                    "n": stats.n,
                    "min": stats.minimum,
                    "q1": stats.q1,
                    "median": stats.median,
                    "mean": stats.mean,
                    "q3": stats.q3,
                    "max": stats.maximum,
                    "outliers": list(stats.outliers),
                }
            )
        if not groups:
            raise HTTPException(
                status_code=404, detail=f"no {parameter} measurements for {route}"
            )
        return {"route": route, "parameter": parameter, "groupby": groupby, "groups": groups}

    @app.get("/roads/{route}/histogram")
    def road_histogram(
        route: str,
        parameter: str,
        bins: int = 10,
        direction: Optional[str] = None,
        lane: Optional[str] = None,
    ):
        if parameter not in SERIES_PARAMETER:
            raise HTTPException(
                status_code=422, detail=f"unknown parameter id: {parameter!r}"
            )
        if bins < 1:
            raise HTTPException(status_code=422, detail="bins must be >= 1")
        _, fwd, segments = _route_records(route)
        fwd, segments = _series_filter(fwd, segments, direction, lane)
        values = collect_series(fwd, segments, parameter)
        if values.size == 0:
            raise HTTPException(
                status_code=404, detail=f"no {parameter} measurements for {route}"
            )
        h = histogram(values, bins, series=parameter)
        return {
            "route": route,
            "parameter": parameter,
            "edges": list(h.edges),
            "counts": list(h.counts),
            "n": h.n,
        }

    return app


def main_asgi() -> FastAPI:
    """App factory reading PMT_DATA_DIR, for `uvicorn pmt.service:main_asgi`."""
    import os

    return create_app(os.environ.get("PMT_DATA_DIR", "./pmt-data"))
