"""Command line entry points: ingest, thresholds derive, suggest, serve.

The CLI drives the same engine as the HTTP service against a data
directory chosen by --data-dir, the PMT_DATA_DIR environment variable,
or ./pmt-data. Exit codes: 0 success, 1 validation failure, 2 I/O
failure. Rejected rows within an otherwise valid file are reported but
do not fail the command.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .core import Provenance, RoadClass
from .errors import IntegrityError, InvalidRecordError, PmtError
from .fusion import match_fwd_to_segments
from .ingestion import (
    DatasetStore,
    ThresholdOverride,
    ThresholdStore,
    collect_route_records,
    ingest_dataset,
)
from .reliability import ReliabilityPair, derive_threshold_set
from .suggestions import export_patching_table, suggest_road

DEFAULT_DATA_DIR = "./pmt-data"


def _data_dir(args) -> Path:
    return Path(args.data_dir or os.environ.get("PMT_DATA_DIR") or DEFAULT_DATA_DIR)


def _print_report(name: str, report) -> None:
    print(f"{name}: accepted {report.accepted}, rejected {len(report.rejected)}")
    for line, reason in report.rejected:
        print(f"  rejected line {line}: {reason}")
    for line, reason in report.warnings:
        print(f"  warning line {line}: {reason}")


def _cmd_ingest(args) -> int:
    fwd_path, seg_path = Path(args.fwd), Path(args.segments)
    store = DatasetStore(_data_dir(args))
    ds, fwd_report, seg_report = ingest_dataset(
        store,
        fwd_path.read_bytes(),
        seg_path.read_bytes(),
        units=args.units,
        road_class=RoadClass.parse(args.road_class),
        dataset_id=args.id,
        fwd_name=fwd_path.name,
        segment_name=seg_path.name,
    )
    print(f"dataset {ds.manifest.dataset_id} ({ds.manifest.road_class.value})")
    _print_report("fwd", fwd_report)
    _print_report("segments", seg_report)
    return 0


def _parse_pair(text: str) -> ReliabilityPair:
    parts = text.split(",")
    if len(parts) != 2:
        raise InvalidRecordError(f"--pair must be lower,upper: {text!r}")
    try:
        return ReliabilityPair(float(parts[0]), float(parts[1]))
    except ValueError:
        raise InvalidRecordError(f"--pair values must be numbers: {text!r}") from None


def _cmd_thresholds_derive(args) -> int:
    data_dir = _data_dir(args)
    ds = DatasetStore(data_dir).load(args.dataset)
    pair = _parse_pair(args.pair) if args.pair else None
    derived = derive_threshold_set(
        ds.fwd_points, ds.segments, ds.manifest.road_class, pair=pair
    )
    print(f"derived thresholds for {derived.road_class.value}")
    for parameter, band in derived.bands.items():
        if band is None:
            print(f"  {parameter.value}: not derived (no data)")
        else:
            print(f"  {parameter.value}: {band.lower:g} / {band.upper:g}")
    if args.install:
        bands = tuple(b for b in derived.bands.values() if b is not None)
        ThresholdStore(data_dir).put_override(
            ThresholdOverride(
                road_class=derived.road_class,
                bands=bands,
                provenance=Provenance.DERIVED,
                note=f"derived from dataset {args.dataset}",
            )
        )
        print(f"installed as {derived.road_class.value} override")
    return 0


def _cmd_suggest(args) -> int:
    data_dir = _data_dir(args)
    road_class, fwd, segments = collect_route_records(DatasetStore(data_dir), args.route)

    groups = sorted({(s.direction, s.lane) for s in segments})
    direction, lane = args.direction, args.lane
    if direction is None and lane is None and len(groups) == 1:
        direction, lane = groups[0]
    if direction is None or lane is None:
        raise InvalidRecordError(
            f"route {args.route} has lane groups {groups}; pass --direction and --lane"
        )
    direction, lane = direction.upper(), lane.upper()
    seg_group = [s for s in segments if (s.direction, s.lane) == (direction, lane)]
    fwd_group = [p for p in fwd if (p.direction, p.lane) == (direction, lane)]
    if not seg_group:
        raise InvalidRecordError(f"no segments for {args.route} {direction} {lane}")

    thresholds = ThresholdStore(data_dir).effective(road_class)
    if args.thresholds:
        from .service import parse_threshold_query

        overrides = parse_threshold_query(args.thresholds)
        if overrides:
            thresholds = thresholds.with_bands(
                overrides, provenance=Provenance.USER_OVERRIDE
            )

    table = suggest_road(match_fwd_to_segments(seg_group, fwd_group), thresholds)
    csv_text = export_patching_table(table)
    if args.out and args.out != "-":
        Path(args.out).write_text(csv_text, encoding="utf-8")
    else:
        sys.stdout.write(csv_text)

    s = table.summary
    print(
        f"{args.route} {direction} {lane}: {s.n_segments} segments, "
        f"surface {s.surface_area_m2:.2f} m2, full depth {s.full_depth_area_m2:.2f} m2",
        file=sys.stderr,
    )
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(_data_dir(args))
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def _add_data_dir(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--data-dir",
        default=None,
        help="data directory (default: $PMT_DATA_DIR or ./pmt-data)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pmt", description="pavement patching decision tools"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="validate and store a measurement dataset")
    p.add_argument("--fwd", required=True, help="FWD test point CSV")
    p.add_argument("--segments", required=True, help="surface segment CSV")
    p.add_argument(
        "--class",
        dest="road_class",
        required=True,
        help="road class: state, us or interstate",
    )
    p.add_argument("--units", default="si", help="measurement units: si or us")
    p.add_argument("--id", default=None, help="dataset id (default: content hash)")
    _add_data_dir(p)
    p.set_defaults(func=_cmd_ingest)

    p = sub.add_parser("thresholds", help="threshold operations")
    tsub = p.add_subparsers(dest="thresholds_command", required=True)
    d = tsub.add_parser("derive", help="derive thresholds from a stored dataset")
    d.add_argument("--dataset", required=True, help="dataset id")
    d.add_argument("--pair", default=None, help="reliability pair, e.g. 90,95")
    d.add_argument(
        "--install",
        action="store_true",
        help="persist the derived set as the class override",
    )
    _add_data_dir(d)
    d.set_defaults(func=_cmd_thresholds_derive)

    p = sub.add_parser("suggest", help="export the patching table for a route")
    p.add_argument("--route", required=True)
    p.add_argument("--direction", default=None, help="EB, WB, NB or SB")
    p.add_argument("--lane", default=None, help="DL or PL")
    p.add_argument(
        "--thresholds",
        default=None,
        help="one-off overrides, e.g. d0:150:215,iri:1.5:2.0",
    )
    p.add_argument("--out", default=None, help="output CSV path (default: stdout)")
    _add_data_dir(p)
    p.set_defaults(func=_cmd_suggest)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    _add_data_dir(p)
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except IntegrityError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except PmtError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
