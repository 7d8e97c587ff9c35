"""Touch detection from RSS versus capacitive ground truth.

A robot frame counts as a detected touch when any beacon's held RSS is
strictly above the threshold. Frames whose capacitive sensors fired are
the ground-truth positives; the evaluation counts hits on both sides and
flags false positives that sit within a small time vicinity of a real
touch (mostly hold-over from an adjacent touch rather than noise).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .errors import EmptyTraceError
from .ibeacon import BeaconIdentity
from .trace import NO_VALUE, EventTrace, RobotFrame, windowed_max_rss_many

DEFAULT_THRESHOLDS_DBM = (-40, -41, -42)
DEFAULT_VICINITY_MS = 400
DEFAULT_MERGE_GAP_MS = 400


def ground_truth_touch(frame: RobotFrame) -> bool:
    """True when any capacitive sensor fired in this frame."""
    return frame.touched


def classify_touch_frame(
    rss_by_beacon: Mapping[BeaconIdentity, int | None], threshold_dbm: int
) -> bool:
    """RSS-based touch call: any beacon strictly above the threshold."""
    return any(
        rss is not None and rss > threshold_dbm for rss in rss_by_beacon.values()
    )


@dataclass(frozen=True)
class TouchSequence:
    """A contiguous run of touching frames (gaps <= merge gap bridged)."""

    start_ms: int
    end_ms: int
    frame_indices: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.frame_indices:
            raise ValueError("a touch sequence needs at least one frame")
        if self.start_ms > self.end_ms:
            raise ValueError("start_ms must be <= end_ms")


def extract_touch_sequences(
    trace: EventTrace, merge_gap_ms: int = DEFAULT_MERGE_GAP_MS
) -> list[TouchSequence]:
    """Group ground-truth touching frames into sequences.

    Consecutive touching frames whose gap is at most merge_gap_ms belong
    to the same sequence; a larger gap starts a new one.
    """
    if merge_gap_ms < 0:
        raise ValueError("merge_gap_ms must be >= 0")
    sequences: list[TouchSequence] = []
    group: list[int] = []
    last_t = 0
    for index, frame in enumerate(trace.frames):
        if not frame.touched:
            continue
        if group and frame.t_ms - last_t > merge_gap_ms:
            sequences.append(_finish(trace, group))
            group = []
        group.append(index)
        last_t = frame.t_ms
    if group:
        sequences.append(_finish(trace, group))
    return sequences


def _finish(trace: EventTrace, group: list[int]) -> TouchSequence:
    return TouchSequence(
        start_ms=trace.frames[group[0]].t_ms,
        end_ms=trace.frames[group[-1]].t_ms,
        frame_indices=tuple(group),
    )


@dataclass(frozen=True)
class TouchReport:
    """Detection counts for one threshold."""

    threshold_dbm: int
    vicinity_ms: int
    touch_total: int
    touch_above: int
    notouch_total: int
    notouch_above: int
    notouch_above_vicinity: int

    def __post_init__(self) -> None:
        if not 0 <= self.touch_above <= self.touch_total:
            raise ValueError("touch_above out of range")
        if not 0 <= self.notouch_above <= self.notouch_total:
            raise ValueError("notouch_above out of range")
        if not 0 <= self.notouch_above_vicinity <= self.notouch_above:
            raise ValueError("notouch_above_vicinity out of range")

    @property
    def touch_above_pct(self) -> float:
        return 100.0 * self.touch_above / self.touch_total if self.touch_total else 0.0

    @property
    def notouch_above_pct(self) -> float:
        if not self.notouch_total:
            return 0.0
        return 100.0 * self.notouch_above / self.notouch_total

    @property
    def vicinity_pct(self) -> float:
        """Share of false positives lying near a real touch."""
        if not self.notouch_above:
            return 0.0
        return 100.0 * self.notouch_above_vicinity / self.notouch_above


def evaluate_touch(
    trace: EventTrace,
    thresholds_dbm: Sequence[int] = DEFAULT_THRESHOLDS_DBM,
    vicinity_ms: int = DEFAULT_VICINITY_MS,
) -> list[TouchReport]:
    """Score the RSS touch detector against capacitive ground truth.

    Every robot frame is classified with the raw held RSS (window 0) and
    compared to its sensors. notouch_above_vicinity counts the false
    positives within vicinity_ms of some ground-truth touching frame.
    """
    if vicinity_ms < 0:
        raise ValueError("vicinity_ms must be >= 0")
    if not trace.frames:
        raise EmptyTraceError("cannot evaluate touch on a trace without frames")

    times = trace.frame_times()
    touched = np.array([f.touched for f in trace.frames], dtype=bool)
    beacons = trace.beacons()
    if beacons:
        held = np.stack([windowed_max_rss_many(trace, times, 0, b) for b in beacons])
    else:
        held = np.full((1, times.size), NO_VALUE, dtype=np.int64)
    valid = held != NO_VALUE

    touch_times = times[touched]
    near = np.zeros(times.size, dtype=bool)
    if touch_times.size:
        pos = np.searchsorted(touch_times, times)
        left = np.where(pos > 0, times - touch_times[np.maximum(pos - 1, 0)], np.iinfo(np.int64).max)
        right = np.where(
            pos < touch_times.size,
            touch_times[np.minimum(pos, touch_times.size - 1)] - times,
            np.iinfo(np.int64).max,
        )
        near = np.minimum(left, right) <= vicinity_ms

    reports = []
    for threshold in thresholds_dbm:
        above = np.any(valid & (held > threshold), axis=0)
        false_pos = above & ~touched
        reports.append(
            TouchReport(
                threshold_dbm=int(threshold),
                vicinity_ms=vicinity_ms,
                touch_total=int(touched.sum()),
                touch_above=int((above & touched).sum()),
                notouch_total=int((~touched).sum()),
                notouch_above=int(false_pos.sum()),
                notouch_above_vicinity=int((false_pos & near).sum()),
            )
        )
    return reports


TOUCH_CSV_HEADER = (
    "threshold_dbm,touch_total,touch_above,notouch_total,"
    "notouch_above,notouch_above_vicinity"
)


def touch_report_csv(reports: Sequence[TouchReport]) -> str:
    lines = [TOUCH_CSV_HEADER]
    for r in reports:
        lines.append(
            f"{r.threshold_dbm},{r.touch_total},{r.touch_above},"
            f"{r.notouch_total},{r.notouch_above},{r.notouch_above_vicinity}"
        )
    return "".join(line + "\n" for line in lines)


def render_touch_table(reports: Sequence[TouchReport]) -> str:
    """Human-readable detection summary, one row per threshold."""
    header = (
        f"{'thr dBm':>8} {'touch':>7} {'above':>7} {'%':>6} "
        f"{'no-touch':>9} {'above':>7} {'%':>6} {'near%':>6}"
    )
    lines = [header, "-" * len(header)]
    for r in reports:
        lines.append(
            f"{r.threshold_dbm:>8} {r.touch_total:>7} {r.touch_above:>7} "
            f"{r.touch_above_pct:>6.1f} {r.notouch_total:>9} {r.notouch_above:>7} "
            f"{r.notouch_above_pct:>6.1f} {r.vicinity_pct:>6.1f}"
        )
    return "".join(line + "\n" for line in lines)
