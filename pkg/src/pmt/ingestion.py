"""CSV ingestion and the file-backed measurement store.

Measurement files arrive as CSV with fixed headers, one file of FWD
test points and one of surface segments per dataset. Rows are validated
independently: a bad row is rejected with its line number and reason
while the rest of the batch proceeds. Validated records persist as
newline-delimited canonical JSON under a single dataset directory with
content hashes for integrity, written atomically so readers never see a
partial dataset.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
import os
import tempfile
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional, Sequence

from .core import (
    DeflectionBasin,
    FwdTestPoint,
    IN_PER_MI_PER_M_PER_KM,
    Parameter,
    Provenance,
    RoadClass,
    SurfaceSegment,
    ThresholdBand,
    ThresholdSet,
    convert_deflection,
    default_thresholds,
)
from .errors import (
    DatasetExistsError,
    DatasetNotFoundError,
    IntegrityError,
    InvalidRecordError,
    MixedGroupError,
    PmtError,
    SchemaError,
    UnitError,
)

FWD_HEADER = (
    "route,direction,lane,latitude,longitude,station_m,load_lbf,"
    "d0,d12,d24,d36,d60,hp_in"
).split(",")

SEGMENT_HEADER = (
    "route,direction,lane,dmi,latitude,longitude,"
    "l_iri,r_iri,cd_left_pct,cd_right_pct,surface_image,row_image"
).split(",")

UNIT_SYSTEMS = ("si", "us")


@dataclass(frozen=True)
class ValidationReport:
    """Per-file ingestion outcome; every rejected line keeps its reason."""

    accepted: int
    rejected: tuple[tuple[int, str], ...]
    warnings: tuple[tuple[int, str], ...]

    @property
    def total(self) -> int:
        return self.accepted + len(self.rejected)


class _RowError(Exception):
    """Internal: one row failed validation; message becomes the reason."""


def _check_units(units: str) -> str:
    u = units.strip().lower()
    if u not in UNIT_SYSTEMS:
        raise UnitError(f"units must be one of {UNIT_SYSTEMS}: {units!r}")
    return u


def _check_header(got: list[str], expected: list[str]) -> None:
    if got == expected:
        return
    stripped = [c.strip() for c in got]
    missing = [c for c in expected if c not in stripped]
    extra = [c for c in stripped if c not in expected]
    detail = []
    if missing:
        detail.append(f"missing columns: {missing}")
    if extra:
        detail.append(f"unexpected columns: {extra}")
    if not detail:
        detail.append(f"column order must be exactly {expected}")
    raise SchemaError("bad header: " + "; ".join(detail))


def _required_float(raw: str, name: str) -> float:
    text = raw.strip()
    if not text:
        raise _RowError(f"missing {name}")
    try:
        value = float(text)
    except ValueError:
        raise _RowError(f"invalid {name}: {raw!r}") from None
    if not math.isfinite(value):
        raise _RowError(f"non-finite {name}: {raw!r}")
    return value


def _optional_float(raw: str, name: str) -> Optional[float]:
    if not raw.strip():
        return None
    return _required_float(raw, name)


def _decode(data: bytes) -> io.StringIO:
    try:
        return io.StringIO(data.decode("utf-8-sig"))
    except UnicodeDecodeError as e:
        raise SchemaError(f"file is not valid UTF-8: {e}") from None


def _read_rows(data: bytes, expected_header: list[str]):
    reader = csv.reader(_decode(data))
    try:
        header = next(reader)
    except StopIteration:
        raise SchemaError("empty file, expected a header row") from None
    _check_header(header, expected_header)
    for row in reader:
        if not row or all(not cell.strip() for cell in row):
            continue  # blank line, not a data row
        yield reader.line_num, row


def parse_fwd_csv(data: bytes, units: str) -> tuple[list[FwdTestPoint], ValidationReport]:
    """Parse an FWD CSV, normalizing deflections to microns.

    Row validation never aborts the batch; each bad row is rejected
    with (line number, reason). Non-monotone basins are accepted and
    reported as warnings.
    """
    u = _check_units(units)
    points: list[FwdTestPoint] = []
    rejected: list[tuple[int, str]] = []
    warnings: list[tuple[int, str]] = []

    for line_num, row in _read_rows(data, FWD_HEADER):
        try:
            if len(row) != len(FWD_HEADER):
                raise _RowError(f"expected {len(FWD_HEADER)} fields, got {len(row)}")
            deflections = {}
            for i, name in enumerate(("d0", "d12", "d24", "d36", "d60")):
                raw = row[7 + i].strip()
                if not raw:
                    raise _RowError(f"missing deflection {name}")
                deflections[name] = _required_float(raw, f"deflection {name}")
            if u == "us":
                deflections = {
                    k: convert_deflection(v, "mils", "microns")
                    for k, v in deflections.items()
                }
            basin = DeflectionBasin(load_lbf=_required_float(row[6], "load_lbf"), **deflections)
            point = FwdTestPoint(
                route=row[0].strip(),
                direction=row[1].strip().upper(),
                lane=row[2].strip().upper(),
                latitude=_required_float(row[3], "latitude"),
                longitude=_required_float(row[4], "longitude"),
                basin=basin,
                station_m=_optional_float(row[5], "station_m"),
                hp_in=_optional_float(row[12], "hp_in"),
            )
        except _RowError as e:
            rejected.append((line_num, str(e)))
            continue
        except PmtError as e:
            rejected.append((line_num, str(e)))
            continue
        if not basin.is_monotone:
            warnings.append((line_num, "non-monotone basin"))
        points.append(point)

    report = ValidationReport(
        accepted=len(points), rejected=tuple(rejected), warnings=tuple(warnings)
    )
    return points, report


def parse_segment_csv(
    data: bytes, units: str
) -> tuple[list[SurfaceSegment], ValidationReport]:
    """Parse a surface segment CSV, normalizing roughness to m/km.

    Segments are keyed by (route, direction, lane, dmi); a repeated key
    rejects the later row.
    """
    u = _check_units(units)
    segments: list[SurfaceSegment] = []
    rejected: list[tuple[int, str]] = []
    warnings: list[tuple[int, str]] = []
    seen: set[tuple[str, str, str, int]] = set()

    for line_num, row in _read_rows(data, SEGMENT_HEADER):
        try:
            if len(row) != len(SEGMENT_HEADER):
                raise _RowError(f"expected {len(SEGMENT_HEADER)} fields, got {len(row)}")
            raw_dmi = row[3].strip()
            try:
                dmi = int(raw_dmi)
            except ValueError:
                raise _RowError(f"invalid dmi: {raw_dmi!r}") from None
            l_iri = _required_float(row[6], "l_iri")
            r_iri = _required_float(row[7], "r_iri")
            if u == "us":
                l_iri /= IN_PER_MI_PER_M_PER_KM
                r_iri /= IN_PER_MI_PER_M_PER_KM
            segment = SurfaceSegment(
                route=row[0].strip(),
                direction=row[1].strip().upper(),
                lane=row[2].strip().upper(),
                dmi=dmi,
                latitude=_required_float(row[4], "latitude"),
                longitude=_required_float(row[5], "longitude"),
                l_iri=l_iri,
                r_iri=r_iri,
                cd_left=_required_float(row[8], "cd_left_pct"),
                cd_right=_required_float(row[9], "cd_right_pct"),
                surface_image_ref=row[10].strip() or None,
                row_image_ref=row[11].strip() or None,
            )
            key = (segment.route, segment.direction, segment.lane, segment.dmi)
            if key in seen:
                raise _RowError(f"duplicate dmi {dmi}")
            seen.add(key)
        except _RowError as e:
            rejected.append((line_num, str(e)))
            continue
        except PmtError as e:
            rejected.append((line_num, str(e)))
            continue
        segments.append(segment)

    report = ValidationReport(
        accepted=len(segments), rejected=tuple(rejected), warnings=tuple(warnings)
    )
    return segments, report


# --- canonical record serialization ---------------------------------------

def _fwd_record(p: FwdTestPoint) -> dict:
    return {
        "route": p.route,
        "direction": p.direction,
        "lane": p.lane,
        "latitude": p.latitude,
        "longitude": p.longitude,
        "station_m": p.station_m,
        "load_lbf": p.basin.load_lbf,
        "d0": p.basin.d0,
        "d12": p.basin.d12,
        "d24": p.basin.d24,
        "d36": p.basin.d36,
        "d60": p.basin.d60,
        "hp_in": p.hp_in,
    }


def _fwd_from_record(r: dict) -> FwdTestPoint:
    return FwdTestPoint(
        route=r["route"],
        direction=r["direction"],
        lane=r["lane"],
        latitude=r["latitude"],
        longitude=r["longitude"],
        station_m=r["station_m"],
        hp_in=r["hp_in"],
        basin=DeflectionBasin(
            d0=r["d0"], d12=r["d12"], d24=r["d24"], d36=r["d36"], d60=r["d60"],
            load_lbf=r["load_lbf"],
        ),
    )


def _segment_record(s: SurfaceSegment) -> dict:
    return {
        "route": s.route,
        "direction": s.direction,
        "lane": s.lane,
        "dmi": s.dmi,
        "latitude": s.latitude,
        "longitude": s.longitude,
        "l_iri": s.l_iri,
        "r_iri": s.r_iri,
        "cd_left": s.cd_left,
        "cd_right": s.cd_right,
        "surface_image": s.surface_image_ref,
        "row_image": s.row_image_ref,
    }


def _segment_from_record(r: dict) -> SurfaceSegment:
    return SurfaceSegment(
        route=r["route"],
        direction=r["direction"],
        lane=r["lane"],
        dmi=r["dmi"],
        latitude=r["latitude"],
        longitude=r["longitude"],
        l_iri=r["l_iri"],
        r_iri=r["r_iri"],
        cd_left=r["cd_left"],
        cd_right=r["cd_right"],
        surface_image_ref=r["surface_image"],
        row_image_ref=r["row_image"],
    )


def canonical_lines(records: Sequence[dict]) -> bytes:
    """Records as newline-delimited JSON with fixed key order.

    Floats serialize via repr (shortest round-trip form), so store and
    load are lossless and the bytes are reproducible.
    """
    out = io.StringIO()
    for r in records:
        json.dump(r, out, separators=(",", ":"), sort_keys=False)
        out.write("\n")
    return out.getvalue().encode("utf-8")


def _sha256(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def default_dataset_id(fwd_bytes: bytes, segment_bytes: bytes) -> str:
    """Deterministic id from the source bytes: same files, same id."""
    h = hashlib.sha256()
    h.update(hashlib.sha256(fwd_bytes).digest())
    h.update(hashlib.sha256(segment_bytes).digest())
    return h.hexdigest()[:12]


@dataclass(frozen=True)
class DatasetManifest:
    dataset_id: str
    road_class: RoadClass
    units: str
    source_files: tuple[tuple[str, str], ...]  # (name, sha256 of source bytes)
    n_fwd: int
    n_segments: int
    created_utc: str

    def to_dict(self) -> dict:
        return {
            "dataset_id": self.dataset_id,
            "road_class": self.road_class.value,
            "units": self.units,
            "source_files": [list(f) for f in self.source_files],
            "n_fwd": self.n_fwd,
            "n_segments": self.n_segments,
            "created_utc": self.created_utc,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "DatasetManifest":
        return cls(
            dataset_id=d["dataset_id"],
            road_class=RoadClass(d["road_class"]),
            units=d["units"],
            source_files=tuple((f[0], f[1]) for f in d["source_files"]),
            n_fwd=d["n_fwd"],
            n_segments=d["n_segments"],
            created_utc=d["created_utc"],
        )


@dataclass(frozen=True)
class Dataset:
    manifest: DatasetManifest
    fwd_points: tuple[FwdTestPoint, ...]
    segments: tuple[SurfaceSegment, ...]


def _atomic_write(path: Path, data: bytes) -> None:
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".tmp")
    try:
        with os.fdopen(fd, "wb") as f:
            f.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


class DatasetStore:
    """Datasets as self-contained directories under <root>/datasets/<id>.

    Each directory holds manifest.json plus fwd.ndjson and
    segments.ndjson in canonical serialization; the manifest records
    sha256 hashes of both record files, checked on load. Writes build
    the directory under a temporary name and rename it into place, so
    concurrent readers only ever see complete datasets.
    """

    def __init__(self, root: Path | str):
        self.root = Path(root)

    @property
    def datasets_dir(self) -> Path:
        return self.root / "datasets"

    def _dir(self, dataset_id: str) -> Path:
        if not dataset_id or "/" in dataset_id or dataset_id.startswith("."):
            raise InvalidRecordError(f"invalid dataset id: {dataset_id!r}")
        return self.datasets_dir / dataset_id

    def exists(self, dataset_id: str) -> bool:
        return (self._dir(dataset_id) / "manifest.json").is_file()

    def store(
        self,
        manifest: DatasetManifest,
        fwd_points: Sequence[FwdTestPoint],
        segments: Sequence[SurfaceSegment],
    ) -> str:
        if len(fwd_points) != manifest.n_fwd or len(segments) != manifest.n_segments:
            raise InvalidRecordError("manifest counts do not match records")
        final = self._dir(manifest.dataset_id)
        if final.exists():
            raise DatasetExistsError(f"dataset already stored: {manifest.dataset_id}")
        self.datasets_dir.mkdir(parents=True, exist_ok=True)

        fwd_blob = canonical_lines([_fwd_record(p) for p in fwd_points])
        seg_blob = canonical_lines([_segment_record(s) for s in segments])
        payload = manifest.to_dict()
        payload["integrity"] = {
            "fwd.ndjson": _sha256(fwd_blob),
            "segments.ndjson": _sha256(seg_blob),
        }

        tmp = Path(tempfile.mkdtemp(dir=self.datasets_dir, prefix=".tmp-"))
        try:
            (tmp / "fwd.ndjson").write_bytes(fwd_blob)
            (tmp / "segments.ndjson").write_bytes(seg_blob)
            (tmp / "manifest.json").write_bytes(
                json.dumps(payload, indent=2, sort_keys=False).encode("utf-8") + b"\n"
            )
            try:
                os.rename(tmp, final)
            except OSError:
                if final.exists():
                    raise DatasetExistsError(
                        f"dataset already stored: {manifest.dataset_id}"
                    ) from None
                raise
        finally:
            if tmp.exists():
                for child in tmp.iterdir():
                    child.unlink()
                tmp.rmdir()
        return manifest.dataset_id

    def load(self, dataset_id: str) -> Dataset:
        d = self._dir(dataset_id)
        manifest_path = d / "manifest.json"
        if not manifest_path.is_file():
            raise DatasetNotFoundError(f"no such dataset: {dataset_id}")
        payload = json.loads(manifest_path.read_text("utf-8"))
        integrity = payload.pop("integrity", {})
        manifest = DatasetManifest.from_dict(payload)

        blobs = {}
        for name in ("fwd.ndjson", "segments.ndjson"):
            blob = (d / name).read_bytes()
            expected = integrity.get(name)
            if expected != _sha256(blob):
                raise IntegrityError(f"{dataset_id}/{name}: content hash mismatch")
            blobs[name] = blob

        fwd_points = tuple(
            _fwd_from_record(json.loads(line))
            for line in blobs["fwd.ndjson"].splitlines()
        )
        segments = tuple(
            _segment_from_record(json.loads(line))
            for line in blobs["segments.ndjson"].splitlines()
        )
        return Dataset(manifest=manifest, fwd_points=fwd_points, segments=segments)

    def list_manifests(self) -> list[DatasetManifest]:
        if not self.datasets_dir.is_dir():
            return []
        out = []
        for d in sorted(self.datasets_dir.iterdir()):
            if d.name.startswith(".") or not (d / "manifest.json").is_file():
                continue
            payload = json.loads((d / "manifest.json").read_text("utf-8"))
            payload.pop("integrity", None)
            out.append(DatasetManifest.from_dict(payload))
        return out


def ingest_dataset(
    store: DatasetStore,
    fwd_bytes: bytes,
    segment_bytes: bytes,
    units: str,
    road_class: RoadClass,
    dataset_id: Optional[str] = None,
    fwd_name: str = "fwd.csv",
    segment_name: str = "segments.csv",
) -> tuple[Dataset, ValidationReport, ValidationReport]:
    """Parse both measurement files and persist the accepted records.

    Partial row rejections are normal and reported; a file whose rows
    are all rejected aborts ingestion, since a dataset missing one side
    of the fusion cannot serve its purpose.
    """
    fwd_points, fwd_report = parse_fwd_csv(fwd_bytes, units)
    segments, seg_report = parse_segment_csv(segment_bytes, units)
    if fwd_report.accepted == 0:
        raise InvalidRecordError(f"{fwd_name}: no valid rows")
    if seg_report.accepted == 0:
        raise InvalidRecordError(f"{segment_name}: no valid rows")

    manifest = DatasetManifest(
        dataset_id=dataset_id or default_dataset_id(fwd_bytes, segment_bytes),
        road_class=road_class,
        units=_check_units(units),
        source_files=(
            (fwd_name, _sha256(fwd_bytes)),
            (segment_name, _sha256(segment_bytes)),
        ),
        n_fwd=len(fwd_points),
        n_segments=len(segments),
        created_utc=datetime.now(timezone.utc).isoformat(timespec="seconds"),
    )
    store.store(manifest, fwd_points, segments)
    return Dataset(manifest, tuple(fwd_points), tuple(segments)), fwd_report, seg_report


def collect_route_records(
    store: DatasetStore, route: str
) -> tuple[RoadClass, list[FwdTestPoint], list[SurfaceSegment]]:
    """All stored records for one route, across datasets.

    The route's road class comes from the owning dataset manifests;
    datasets disagreeing on the class make threshold selection
    ambiguous and are refused.
    """
    fwd: list[FwdTestPoint] = []
    segments: list[SurfaceSegment] = []
    classes = set()
    for manifest in store.list_manifests():
        ds = store.load(manifest.dataset_id)
        ds_fwd = [p for p in ds.fwd_points if p.route == route]
        ds_seg = [s for s in ds.segments if s.route == route]
        if ds_fwd or ds_seg:
            classes.add(manifest.road_class)
            fwd.extend(ds_fwd)
            segments.extend(ds_seg)
    if not fwd and not segments:
        raise DatasetNotFoundError(f"unknown route: {route}")
    if len(classes) > 1:
        raise MixedGroupError(
            f"route {route} spans multiple road classes: "
            f"{sorted(c.value for c in classes)}"
        )
    return classes.pop(), fwd, segments


# --- threshold persistence -------------------------------------------------

@dataclass(frozen=True)
class ThresholdOverride:
    """A stored partial override: only the replaced bands, plus a note."""

    road_class: RoadClass
    bands: tuple[ThresholdBand, ...]
    provenance: Provenance
    note: Optional[str] = None


class ThresholdStore:
    """Per-class threshold overrides under <root>/thresholds.

    Only the overridden bands are stored; the effective set for a class
    is the shipped defaults with the override laid on top. Writes are
    atomic whole-file swaps, so a reader sees the old or the new
    override, never a mix.
    """

    def __init__(self, root: Path | str):
        self.root = Path(root)

    def _path(self, road_class: RoadClass) -> Path:
        return self.root / "thresholds" / f"{road_class.value}.json"

    def get_override(self, road_class: RoadClass) -> Optional[ThresholdOverride]:
        path = self._path(road_class)
        if not path.is_file():
            return None
        d = json.loads(path.read_text("utf-8"))
        bands = tuple(
            ThresholdBand(Parameter(pid), pair[0], pair[1])
            for pid, pair in d["bands"].items()
        )
        return ThresholdOverride(
            road_class=RoadClass(d["road_class"]),
            bands=bands,
            provenance=Provenance(d["provenance"]),
            note=d.get("note"),
        )

    def put_override(self, override: ThresholdOverride) -> None:
        payload = {
            "road_class": override.road_class.value,
            "provenance": override.provenance.value,
            "note": override.note,
            "bands": {b.parameter.value: [b.lower, b.upper] for b in override.bands},
        }
        path = self._path(override.road_class)
        path.parent.mkdir(parents=True, exist_ok=True)
        blob = json.dumps(payload, indent=2).encode("utf-8")
        _atomic_write(path, blob + b"\n")

    def effective(self, road_class: RoadClass) -> ThresholdSet:
        defaults = default_thresholds(road_class)
        override = self.get_override(road_class)
        if override is None:
            return defaults
        return defaults.with_bands(
            {b.parameter: b for b in override.bands}, provenance=override.provenance
        )
