"""Proximity zones from advertisement presence and strength.

A beacon is Close while its RSS clears a threshold, InRoom while it is
heard at all, and Out once it has been silent longer than the presence
timeout. The tracker is a deterministic state machine fed advertisements
and clock ticks in time order.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping

from .errors import TimeRegressionError
from .ibeacon import BeaconIdentity, pack_identity
from .trace import RSS_MAX_DBM, RSS_MIN_DBM, AdvEvent, EventTrace


class ProximityZone(Enum):
    CLOSE = "Close"
    IN_ROOM = "InRoom"
    OUT = "Out"


@dataclass(frozen=True)
class ProximityConfig:
    """Thresholds driving the zone state machine.

    close_threshold_dbm: RSS at or above this is Close (default -60,
        beyond which the wearer is not within touching range).
    presence_timeout_ms: silence longer than this means Out.
    hysteresis_db: optional extra margin a Close beacon must fall below
        before dropping to InRoom; 0 disables it.
    """

    close_threshold_dbm: int = -60
    presence_timeout_ms: int = 2000
    hysteresis_db: int = 0

    def __post_init__(self) -> None:
        if not RSS_MIN_DBM <= self.close_threshold_dbm <= RSS_MAX_DBM:
            raise ValueError(
                f"close_threshold_dbm must be within [{RSS_MIN_DBM}, {RSS_MAX_DBM}]"
            )
        if self.presence_timeout_ms <= 0:
            raise ValueError("presence_timeout_ms must be > 0")
        if self.hysteresis_db < 0:
            raise ValueError("hysteresis_db must be >= 0")

    @classmethod
    def within_half_meter(cls) -> "ProximityConfig":
        """Alternative preset: Close means roughly within half a meter."""
        return cls(close_threshold_dbm=-70)


def classify_zone(rss_dbm: int, config: ProximityConfig) -> ProximityZone:
    """Close or InRoom from a single RSS reading (boundary counts Close)."""
    if rss_dbm >= config.close_threshold_dbm:
        return ProximityZone.CLOSE
    return ProximityZone.IN_ROOM


class ProximityTracker:
    """Per-beacon zone state machine over a time-ordered event stream.

    Feed advertisements through :meth:`observe` and clock ticks through
    :meth:`tick`; both require nondecreasing times across calls.
    """

    def __init__(
        self,
        config: ProximityConfig | None = None,
        beacons: Iterable[BeaconIdentity] = (),
    ):
        self.config = config if config is not None else ProximityConfig()
        self._last_adv: dict[BeaconIdentity, int] = {}
        self._zone: dict[BeaconIdentity, ProximityZone] = {
            b: ProximityZone.OUT for b in beacons
        }
        self._now = 0

    def _check_time(self, t_ms: int) -> None:
        if t_ms < self._now:
            raise TimeRegressionError(
                f"event at {t_ms} ms is older than last processed {self._now} ms"
            )
        self._now = t_ms

    def zones(self) -> Mapping[BeaconIdentity, ProximityZone]:
        return dict(self._zone)

    def zone(self, beacon: BeaconIdentity) -> ProximityZone:
        return self._zone.get(beacon, ProximityZone.OUT)

    def observe(self, event: AdvEvent) -> ProximityZone:
        """Ingest one advertisement; returns the beacon's new zone."""
        self._check_time(event.t_ms)
        previous = self._zone.get(event.beacon, ProximityZone.OUT)
        threshold = self.config.close_threshold_dbm
        if previous is ProximityZone.CLOSE:
            threshold -= self.config.hysteresis_db
        zone = (
            ProximityZone.CLOSE
            if event.rss_dbm >= threshold
            else ProximityZone.IN_ROOM
        )
        self._last_adv[event.beacon] = event.t_ms
        self._zone[event.beacon] = zone
        return zone

    def tick(self, t_ms: int) -> list[BeaconIdentity]:
        """Advance the clock; returns beacons that timed out to Out."""
        self._check_time(t_ms)
        timeout = self.config.presence_timeout_ms
        dropped = []
        for beacon, zone in self._zone.items():
            if zone is ProximityZone.OUT:
                continue
            if t_ms - self._last_adv[beacon] > timeout:
                self._zone[beacon] = ProximityZone.OUT
                dropped.append(beacon)
        return dropped


Timeline = list[tuple[int, ProximityZone]]


def run_proximity(
    trace: EventTrace,
    config: ProximityConfig | None = None,
    tick_ms: int = 50,
    beacons: Iterable[BeaconIdentity] | None = None,
    until_ms: int | None = None,
) -> dict[BeaconIdentity, Timeline]:
    """Replay a trace into per-beacon zone timelines.

    Each timeline is a list of (t_ms, zone) segments starting at t = 0;
    entries after the first are transitions. Ticks are synthesized every
    tick_ms, advertisements are applied before the tick on equal times.
    By default the replay runs presence_timeout_ms past the last event so
    the terminal drop to Out is part of the timeline.
    """
    if tick_ms <= 0:
        raise ValueError("tick_ms must be > 0")
    cfg = config if config is not None else ProximityConfig()
    tracked = tuple(beacons) if beacons is not None else trace.beacons()
    if until_ms is None:
        until_ms = trace.end_ms() + cfg.presence_timeout_ms + tick_ms

    tracker = ProximityTracker(cfg, tracked)
    timelines: dict[BeaconIdentity, Timeline] = {
        b: [(0, ProximityZone.OUT)] for b in tracked
    }

    def record(beacon: BeaconIdentity, t_ms: int, zone: ProximityZone) -> None:
        timeline = timelines[beacon]
        if timeline[-1][1] is zone:
            return
        if timeline[-1][0] == t_ms:
            timeline[-1] = (t_ms, zone)
            if len(timeline) > 1 and timeline[-2][1] is zone:
                timeline.pop()
        else:
            timeline.append((t_ms, zone))

    tracked_set = set(tracked)
    events: list[tuple[int, int, AdvEvent | None]] = [
        (e.t_ms, 0, e) for e in trace.advs if e.beacon in tracked_set
    ]
    events.extend((t, 1, None) for t in range(0, until_ms + 1, tick_ms))
    events.sort(key=lambda item: item[:2])

    for t_ms, _, adv in events:
        if t_ms > until_ms:
            break
        if adv is not None:
            record(adv.beacon, t_ms, tracker.observe(adv))
        else:
            for beacon in tracker.tick(t_ms):
                record(beacon, t_ms, ProximityZone.OUT)
    return timelines


def render_zone_timeline(timelines: Mapping[BeaconIdentity, Timeline]) -> str:
    """Render timelines as ``zone <t_ms> <beacon> <zone>`` lines.

    The first line per beacon is its initial zone; later lines are
    transitions. Lines are ordered by (time, beacon nibble).
    """
    records = []
    for beacon, timeline in timelines.items():
        for t_ms, zone in timeline:
            records.append(
                (t_ms, pack_identity(beacon), f"zone {t_ms} {beacon.label()} {zone.value}")
            )
    records.sort(key=lambda r: r[:2])
    return "".join(line + "\n" for *_, line in records)
