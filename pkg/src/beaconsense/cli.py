"""Command line entry points: simulate, evaluate, plotdata.

Every subcommand builds its full output in memory and writes it in one
pass, so a failing run never leaves a partial report behind. Domain and
I/O errors exit with status 1; usage errors exit with status 2.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .attribution import (
    DEFAULT_WINDOWS_MS,
    attribution_report_csv,
    evaluate_attribution,
    render_attribution_table,
)
from .errors import BeaconSenseError
from .proximity import ProximityConfig, render_zone_timeline, run_proximity
from .simulate import build_trace, parse_scenario
from .touch import (
    DEFAULT_THRESHOLDS_DBM,
    DEFAULT_VICINITY_MS,
    evaluate_touch,
    render_touch_table,
    touch_report_csv,
)
from .trace import NO_VALUE, EventTrace, parse_trace, serialize_trace, windowed_max_rss_many


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part.strip()) for part in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="beaconsense",
        description="Simulate and evaluate wearable-beacon interaction traces.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="render a scenario file into a trace")
    sim.add_argument("scenario", type=Path, help="scenario file (key = value lines)")
    sim.add_argument("--seed", type=int, default=None, help="override the scenario rng seed")
    sim.add_argument("--out", type=Path, default=Path("trace.txt"))
    sim.set_defaults(func=_cmd_simulate)

    ev = sub.add_parser("evaluate", help="score a trace and write a report")
    ev.add_argument("mode", choices=("proximity", "touch", "attribution"))
    ev.add_argument("trace", type=Path, help="trace file to score")
    ev.add_argument(
        "--thresholds",
        type=_int_list,
        default=DEFAULT_THRESHOLDS_DBM,
        help="touch thresholds in dBm; write as --thresholds=-40,-41,-42",
    )
    ev.add_argument(
        "--windows",
        type=_int_list,
        default=DEFAULT_WINDOWS_MS,
        help="attribution smoothing windows in ms",
    )
    ev.add_argument("--vicinity-ms", type=int, default=DEFAULT_VICINITY_MS)
    ev.add_argument("--close-threshold-dbm", type=int, default=-60)
    ev.add_argument("--timeout-ms", type=int, default=2000)
    ev.add_argument("--tick-ms", type=int, default=50)
    ev.add_argument("--out", type=Path, default=None, help="report path (mode-specific default)")
    ev.set_defaults(func=_cmd_evaluate)

    plot = sub.add_parser("plotdata", help="dump a trace as plot-ready columns")
    plot.add_argument("trace", type=Path)
    plot.add_argument("--out", type=Path, default=Path("plotdata.tsv"))
    plot.set_defaults(func=_cmd_plotdata)
    return parser


def _read_trace(path: Path) -> EventTrace:
    return parse_trace(path.read_text())


def _cmd_simulate(args: argparse.Namespace) -> int:
    scenario = parse_scenario(args.scenario.read_text())
    if args.seed is not None:
        scenario = scenario.with_seed(args.seed)
    trace = build_trace(scenario)
    args.out.write_text(serialize_trace(trace))
    print(
        f"wrote {args.out}: {len(trace.advs)} advs, {len(trace.frames)} frames, "
        f"{len(trace.truths)} ground-truth touches"
    )
    return 0


def _cmd_evaluate(args: argparse.Namespace) -> int:
    trace = _read_trace(args.trace)
    if args.mode == "touch":
        reports = evaluate_touch(trace, args.thresholds, args.vicinity_ms)
        out = args.out or Path("touch_report.csv")
        out.write_text(touch_report_csv(reports))
        sys.stdout.write(render_touch_table(reports))
    elif args.mode == "attribution":
        rows = evaluate_attribution(trace, args.windows)
        out = args.out or Path("attribution_report.csv")
        out.write_text(attribution_report_csv(rows))
        sys.stdout.write(render_attribution_table(rows))
    else:
        config = ProximityConfig(
            close_threshold_dbm=args.close_threshold_dbm,
            presence_timeout_ms=args.timeout_ms,
        )
        timelines = run_proximity(trace, config, tick_ms=args.tick_ms)
        out = args.out or Path("proximity_timeline.txt")
        rendered = render_zone_timeline(timelines)
        out.write_text(rendered)
        sys.stdout.write(rendered)
    print(f"wrote {out}")
    return 0


def _cmd_plotdata(args: argparse.Namespace) -> int:
    trace = _read_trace(args.trace)
    text = plotdata_tsv(trace)
    args.out.write_text(text)
    print(f"wrote {args.out}")
    return 0


def plotdata_tsv(trace: EventTrace) -> str:
    """Tab-separated plot columns sampled at every adv and frame time.

    Columns: t_ms, one held-RSS column per beacon (nan before its first
    adv), a touch indicator held from the most recent frame, and, only
    when the trace has ground truth, the touching person id (-1 outside
    every interval).
    """
    beacons = trace.beacons()
    adv_times = np.array(sorted({e.t_ms for e in trace.advs}), dtype=np.int64)
    frame_times = trace.frame_times()
    times = np.union1d(adv_times, frame_times).astype(np.int64)

    columns: list[np.ndarray] = []
    header = ["t_ms"]
    for beacon in beacons:
        header.append(f"rss_{beacon.label()}")
        columns.append(windowed_max_rss_many(trace, times, 0, beacon))

    header.append("touch")
    if frame_times.size:
        touched = np.array([f.touched for f in trace.frames], dtype=np.int64)
        idx = np.searchsorted(frame_times, times, side="right") - 1
        touch_col = np.where(idx >= 0, touched[np.maximum(idx, 0)], 0)
    else:
        touch_col = np.zeros(times.size, dtype=np.int64)
    columns.append(touch_col)

    if trace.truths:
        header.append("truth_person")
        starts = np.array([t.start_ms for t in trace.truths], dtype=np.int64)
        ends = np.array([t.end_ms for t in trace.truths], dtype=np.int64)
        persons = np.array([t.person_id for t in trace.truths], dtype=np.int64)
        idx = np.searchsorted(starts, times, side="right") - 1
        safe = np.maximum(idx, 0)
        inside = (idx >= 0) & (times < ends[safe])
        columns.append(np.where(inside, persons[safe], -1))

    lines = ["\t".join(header)]
    n_beacons = len(beacons)
    for row, t in enumerate(times):
        cells = [str(int(t))]
        for col_no, column in enumerate(columns):
            value = int(column[row])
            if col_no < n_beacons and value == NO_VALUE:
                cells.append("nan")
            else:
                cells.append(str(value))
        lines.append("\t".join(cells))
    return "".join(line + "\n" for line in lines)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (BeaconSenseError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
