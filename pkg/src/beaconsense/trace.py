"""Canonical time-ordered event traces and their line-based file format.

A trace is three streams: beacon advertisements, robot frames (each with
four capacitive touch sensor flags) and ground-truth touch intervals.
File grammar, one record per line, '#' starts a comment line:

    adv <t_ms> <person_id>-<Attachment> <rss_dbm>
    frame <t_ms> <s0><s1><s2><s3>
    truth <start_ms> <end_ms> <person_id>

Traces are canonicalized on construction: advertisements sorted by
(time, beacon nibble), frames by time, truths by start. Serialization
merges the streams by (time, kind, beacon) with adv < frame < truth on
ties, so parse and serialize invert each other exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from ._kernels import NO_VALUE, windowed_max_many
from .errors import OverlapError, SchemaError
from .ibeacon import BeaconIdentity, pack_identity

RSS_MIN_DBM = -127
RSS_MAX_DBM = 20

SENSOR_COUNT = 4


@dataclass(frozen=True)
class AdvEvent:
    """One received advertisement: when, from whom, how strong."""

    t_ms: int
    beacon: BeaconIdentity
    rss_dbm: int

    def __post_init__(self) -> None:
        if self.t_ms < 0:
            raise ValueError(f"t_ms must be >= 0, got {self.t_ms}")
        if not RSS_MIN_DBM <= self.rss_dbm <= RSS_MAX_DBM:
            raise ValueError(
                f"rss_dbm must be within [{RSS_MIN_DBM}, {RSS_MAX_DBM}], "
                f"got {self.rss_dbm}"
            )


@dataclass(frozen=True)
class RobotFrame:
    """One robot status frame with its capacitive touch sensor flags."""

    t_ms: int
    touch_sensors: tuple[bool, bool, bool, bool]

    def __post_init__(self) -> None:
        if self.t_ms < 0:
            raise ValueError(f"t_ms must be >= 0, got {self.t_ms}")
        sensors = tuple(bool(s) for s in self.touch_sensors)
        if len(sensors) != SENSOR_COUNT:
            raise ValueError(f"expected {SENSOR_COUNT} sensor flags, got {len(sensors)}")
        object.__setattr__(self, "touch_sensors", sensors)

    @property
    def touched(self) -> bool:
        return any(self.touch_sensors)


@dataclass(frozen=True)
class GroundTruthTouch:
    """Labeled interval during which one person touched the robot."""

    start_ms: int
    end_ms: int
    person_id: int

    def __post_init__(self) -> None:
        if self.start_ms < 0:
            raise ValueError(f"start_ms must be >= 0, got {self.start_ms}")
        if self.start_ms >= self.end_ms:
            raise ValueError(
                f"interval must have start < end, got [{self.start_ms}, {self.end_ms})"
            )
        if not 0 <= self.person_id < 4:
            raise ValueError(f"person_id must be 0..3, got {self.person_id}")

    def covers(self, t_ms: int) -> bool:
        """Half-open containment: start <= t < end."""
        return self.start_ms <= t_ms < self.end_ms


def _beacon_key(event: AdvEvent) -> tuple[int, int]:
    return (event.t_ms, pack_identity(event.beacon))


@dataclass(frozen=True)
class EventTrace:
    """Immutable trace of advertisements, robot frames and ground truth."""

    advs: tuple[AdvEvent, ...] = ()
    frames: tuple[RobotFrame, ...] = ()
    truths: tuple[GroundTruthTouch, ...] = ()
    _columns: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "advs", tuple(sorted(self.advs, key=_beacon_key)))
        object.__setattr__(self, "frames", tuple(sorted(self.frames, key=lambda f: f.t_ms)))
        truths = tuple(sorted(self.truths, key=lambda g: (g.start_ms, g.end_ms)))
        for prev, cur in zip(truths, truths[1:]):
            if prev.end_ms > cur.start_ms:
                raise OverlapError(
                    f"ground-truth intervals overlap: [{prev.start_ms}, {prev.end_ms}) "
                    f"and [{cur.start_ms}, {cur.end_ms})"
                )
        object.__setattr__(self, "truths", truths)

    def beacons(self) -> tuple[BeaconIdentity, ...]:
        """Distinct advertising beacons, ordered by wire nibble."""
        return tuple(sorted({e.beacon for e in self.advs}, key=pack_identity))

    def persons(self) -> tuple[int, ...]:
        """Distinct person ids among advertising beacons, ascending."""
        return tuple(sorted({e.beacon.person_id for e in self.advs}))

    def end_ms(self) -> int:
        """Time of the last event (truth intervals count by their end)."""
        end = 0
        if self.advs:
            end = max(end, self.advs[-1].t_ms)
        if self.frames:
            end = max(end, self.frames[-1].t_ms)
        if self.truths:
            end = max(end, self.truths[-1].end_ms)
        return end

    def adv_columns(self, beacon: BeaconIdentity) -> tuple[np.ndarray, np.ndarray]:
        """(times, rss) int64 column arrays for one beacon, time-ordered."""
        key = pack_identity(beacon)
        cached = self._columns.get(key)
        if cached is None:
            events = [e for e in self.advs if e.beacon == beacon]
            cached = (
                np.array([e.t_ms for e in events], dtype=np.int64),
                np.array([e.rss_dbm for e in events], dtype=np.int64),
            )
            self._columns[key] = cached
        return cached

    def frame_times(self) -> np.ndarray:
        cached = self._columns.get("frame_times")
        if cached is None:
            cached = np.array([f.t_ms for f in self.frames], dtype=np.int64)
            self._columns["frame_times"] = cached
        return cached


def windowed_max_rss(
    trace: EventTrace, t_ms: int, window_ms: int, beacon: BeaconIdentity
) -> int | None:
    """Strongest RSS of a beacon over (t_ms - window_ms, t_ms].

    With window_ms = 0, or when the window holds no advertisement, falls
    back to the most recent advertisement at or before t_ms (last-value
    hold). None if the beacon has not advertised by t_ms.
    """
    out = windowed_max_rss_many(trace, np.array([t_ms], dtype=np.int64), window_ms, beacon)
    return None if out[0] == NO_VALUE else int(out[0])


def windowed_max_rss_many(
    trace: EventTrace, times_ms, window_ms: int, beacon: BeaconIdentity
) -> np.ndarray:
    """Vector form of :func:`windowed_max_rss` over many query times.

    Returns int64 values with NO_VALUE where the beacon was never heard.
    """
    if window_ms < 0:
        raise ValueError(f"window_ms must be >= 0, got {window_ms}")
    adv_t, adv_rss = trace.adv_columns(beacon)
    times = np.ascontiguousarray(times_ms, dtype=np.int64)
    if times.size > 1 and np.any(np.diff(times) < 0):
        order = np.argsort(times, kind="stable")
        out = np.empty_like(times)
        out[order] = windowed_max_many(adv_t, adv_rss, times[order], window_ms)
        return out
    return windowed_max_many(adv_t, adv_rss, times, window_ms)


def _parse_int(token: str, line_no: int, what: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise SchemaError(line_no, f"{what} must be an integer, got {token!r}") from None


def parse_trace(text: str | Iterable[str]) -> EventTrace:
    """Parse trace file content (a string or an iterable of lines).

    Raises SchemaError naming the offending line, or OverlapError when
    ground-truth intervals overlap.
    """
    if isinstance(text, str):
        lines: Iterable[str] = text.splitlines()
    else:
        lines = text
    advs: list[AdvEvent] = []
    frames: list[RobotFrame] = []
    truths: list[GroundTruthTouch] = []
    for line_no, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        kind = tokens[0]
        if kind == "adv":
            if len(tokens) != 4:
                raise SchemaError(line_no, f"adv record needs 3 fields, got {len(tokens) - 1}")
            t_ms = _parse_int(tokens[1], line_no, "t_ms")
            try:
                beacon = BeaconIdentity.from_label(tokens[2])
            except ValueError as exc:
                raise SchemaError(line_no, str(exc)) from None
            rss = _parse_int(tokens[3], line_no, "rss_dbm")
            try:
                advs.append(AdvEvent(t_ms, beacon, rss))
            except ValueError as exc:
                raise SchemaError(line_no, str(exc)) from None
        elif kind == "frame":
            if len(tokens) != 3:
                raise SchemaError(line_no, f"frame record needs 2 fields, got {len(tokens) - 1}")
            t_ms = _parse_int(tokens[1], line_no, "t_ms")
            flags = tokens[2]
            if len(flags) != SENSOR_COUNT or any(c not in "01" for c in flags):
                raise SchemaError(
                    line_no, f"sensor flags must be {SENSOR_COUNT} chars of 0/1, got {flags!r}"
                )
            try:
                frames.append(RobotFrame(t_ms, tuple(c == "1" for c in flags)))
            except ValueError as exc:
                raise SchemaError(line_no, str(exc)) from None
        elif kind == "truth":
            if len(tokens) != 4:
                raise SchemaError(line_no, f"truth record needs 3 fields, got {len(tokens) - 1}")
            start = _parse_int(tokens[1], line_no, "start_ms")
            end = _parse_int(tokens[2], line_no, "end_ms")
            person = _parse_int(tokens[3], line_no, "person_id")
            try:
                truths.append(GroundTruthTouch(start, end, person))
            except ValueError as exc:
                raise SchemaError(line_no, str(exc)) from None
        else:
            raise SchemaError(line_no, f"unknown record kind {kind!r}")
    return EventTrace(tuple(advs), tuple(frames), tuple(truths))


def serialize_trace(trace: EventTrace) -> str:
    """Render a trace to file text; inverse of :func:`parse_trace`.

    Records are merged by (time, kind, beacon nibble) with adv < frame <
    truth on equal timestamps, so equal traces serialize byte-identically.
    """
    records: list[tuple[int, int, int, str]] = []
    for e in trace.advs:
        records.append((e.t_ms, 0, pack_identity(e.beacon), f"adv {e.t_ms} {e.beacon.label()} {e.rss_dbm}"))
    for f in trace.frames:
        flags = "".join("1" if s else "0" for s in f.touch_sensors)
        records.append((f.t_ms, 1, 0, f"frame {f.t_ms} {flags}"))
    for g in trace.truths:
        records.append((g.start_ms, 2, 0, f"truth {g.start_ms} {g.end_ms} {g.person_id}"))
    records.sort(key=lambda r: r[:3])
    return "".join(line + "\n" for *_, line in records)
