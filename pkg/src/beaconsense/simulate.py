"""Deterministic BLE channel simulator for synthetic traces.

Log-distance path loss plus gaussian shadowing, body-occlusion dips on
the touching hand, packet loss, and timing jitter. All randomness flows
from one seeded generator with a fixed draw order, so a (scenario, seed)
pair always produces the identical trace.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from .errors import NonpositiveDistanceError, SchemaError
from .ibeacon import (
    TX_POWER_MAX_DBM,
    TX_POWER_MIN_DBM,
    Attachment,
    BeaconIdentity,
)
from .trace import RSS_MAX_DBM, RSS_MIN_DBM, AdvEvent, EventTrace, GroundTruthTouch, RobotFrame


@dataclass(frozen=True)
class PathLossModel:
    """Log-distance propagation: rss(d) = rss_at_1m - 10 n log10(d)."""

    rss_at_1m_dbm: float = -59.0
    exponent_n: float = 2.0
    shadowing_sigma_db: float = 4.0

    def __post_init__(self) -> None:
        if self.exponent_n < 0:
            raise ValueError("exponent_n must be >= 0")
        if self.shadowing_sigma_db < 0:
            raise ValueError("shadowing_sigma_db must be >= 0")

    def expected_rss(self, distance_m: float) -> float:
        """Mean RSS at a distance, before shadowing and tx power offset."""
        if distance_m <= 0:
            raise NonpositiveDistanceError(
                f"distance must be > 0, got {distance_m}"
            )
        return self.rss_at_1m_dbm - 10.0 * self.exponent_n * math.log10(distance_m)


@dataclass(frozen=True)
class OcclusionModel:
    """Body-occlusion dips: episodic extra attenuation on the toucher."""

    dip_probability_per_adv: float = 0.0
    dip_attenuation_db: float = 15.0
    dip_min_duration_ms: int = 100
    dip_max_duration_ms: int = 300

    def __post_init__(self) -> None:
        if not 0.0 <= self.dip_probability_per_adv <= 1.0:
            raise ValueError("dip_probability_per_adv must be in [0, 1]")
        if self.dip_attenuation_db < 0:
            raise ValueError("dip_attenuation_db must be >= 0")
        if not 0 < self.dip_min_duration_ms <= self.dip_max_duration_ms:
            raise ValueError("need 0 < dip_min_duration_ms <= dip_max_duration_ms")


@dataclass(frozen=True)
class ScenarioConfig:
    """Timing, loss, and radio knobs shared by all scenarios."""

    adv_interval_ms: int = 100
    jitter_ms: int = 0
    frame_interval_ms: int = 50
    packet_loss_rate: float = 0.0
    frame_loss_rate: float = 0.0
    tx_power_dbm: tuple[int, ...] = (0,)
    duration_ms: int = 30_000
    rng_seed: int = 0

    def __post_init__(self) -> None:
        if self.adv_interval_ms <= 0 or self.frame_interval_ms <= 0:
            raise ValueError("intervals must be > 0")
        if self.jitter_ms < 0:
            raise ValueError("jitter_ms must be >= 0")
        if not 0.0 <= self.packet_loss_rate <= 1.0:
            raise ValueError("packet_loss_rate must be in [0, 1]")
        if not 0.0 <= self.frame_loss_rate <= 1.0:
            raise ValueError("frame_loss_rate must be in [0, 1]")
        if self.duration_ms <= 0:
            raise ValueError("duration_ms must be > 0")
        object.__setattr__(self, "tx_power_dbm", tuple(self.tx_power_dbm))
        if not self.tx_power_dbm:
            raise ValueError("need at least one tx power")
        for tx in self.tx_power_dbm:
            if not TX_POWER_MIN_DBM <= tx <= TX_POWER_MAX_DBM:
                raise ValueError(
                    f"tx power {tx} outside [{TX_POWER_MIN_DBM}, {TX_POWER_MAX_DBM}]"
                )


def sample_adv(
    expected_dbm: float,
    occluded: bool,
    path_loss: PathLossModel,
    occlusion: OcclusionModel | None,
    packet_loss_rate: float,
    rng: np.random.Generator,
) -> int | None:
    """One advertisement reception: None when lost, else quantized RSS.

    Draw order is fixed: loss uniform first, then shadowing normal (only
    for received packets). The result is rounded to the nearest integer
    and clamped to the valid RSS range.
    """
    if rng.random() < packet_loss_rate:
        return None
    rss = expected_dbm + rng.normal(0.0, path_loss.shadowing_sigma_db)
    if occluded and occlusion is not None:
        rss -= occlusion.dip_attenuation_db
    rss = int(np.rint(rss))
    return max(RSS_MIN_DBM, min(RSS_MAX_DBM, rss))


class _DipState:
    """Tracks one beacon's occlusion episodes; draws only while eligible."""

    def __init__(self, occlusion: OcclusionModel, rng: np.random.Generator):
        self._occlusion = occlusion
        self._rng = rng
        self._until = -1

    def occluded_at(self, t_ms: int, eligible: bool) -> bool:
        if not eligible:
            return False
        if t_ms < self._until:
            return True
        if self._occlusion.dip_probability_per_adv <= 0.0:
            return False
        if self._rng.random() < self._occlusion.dip_probability_per_adv:
            duration = int(
                self._rng.integers(
                    self._occlusion.dip_min_duration_ms,
                    self._occlusion.dip_max_duration_ms + 1,
                )
            )
            self._until = t_ms + duration
            return True
        return False


def _adv_time(nominal_ms: int, jitter_ms: int, rng: np.random.Generator) -> int:
    # the jitter draw happens even at 0 so draw order is config independent
    offset = int(rng.integers(-jitter_ms, jitter_ms + 1))
    return max(0, nominal_ms + offset)


def generate_recede_scenario(
    config: ScenarioConfig,
    path_loss: PathLossModel | None = None,
    speed_m_per_s: float = 0.05,
    start_m: float = 0.1,
) -> EventTrace:
    """A person walks away from the receiver at constant speed.

    One beacon per entry in tx_power_dbm, all riding on the same person's
    trajectory, so multi-entry configs give co-located beacons that
    differ only in transmit power. No frames and no ground truth.
    """
    if speed_m_per_s <= 0:
        raise ValueError("speed_m_per_s must be > 0")
    if start_m <= 0:
        raise ValueError("start_m must be > 0")
    model = path_loss if path_loss is not None else PathLossModel()
    rng = np.random.default_rng(config.rng_seed)

    advs = []
    for person, tx in enumerate(config.tx_power_dbm):
        beacon = BeaconIdentity(person_id=person, attachment=Attachment.WRIST)
        for nominal in range(0, config.duration_ms, config.adv_interval_ms):
            t = _adv_time(nominal, config.jitter_ms, rng)
            distance = start_m + speed_m_per_s * (t / 1000.0)
            expected = tx + model.expected_rss(distance)
            rss = sample_adv(
                expected, False, model, None, config.packet_loss_rate, rng
            )
            if rss is not None:
                advs.append(AdvEvent(t_ms=t, beacon=beacon, rss_dbm=rss))
    return EventTrace(advs=tuple(advs), frames=(), truths=())


def generate_two_person_game(
    config: ScenarioConfig,
    path_loss: PathLossModel | None = None,
    occlusion: OcclusionModel | None = None,
    touch_script: Sequence[GroundTruthTouch | tuple[int, int, int]] = (),
    ambient_distance_m: float = 1.0,
    contact_distance_m: float = 0.05,
) -> EventTrace:
    """Two people alternately touching the robot per a touch script.

    Each person wears one wrist beacon (tx_power_dbm must have exactly
    two entries). The toucher sits at contact distance and is eligible
    for occlusion dips; the other person idles at ambient distance.
    Robot frames report one scripted sensor per touch interval; the
    script intervals become the trace's ground truth.
    """
    if len(config.tx_power_dbm) != 2:
        raise ValueError("two_person_game needs exactly two tx powers")
    if not 0 < contact_distance_m <= ambient_distance_m:
        raise ValueError("need 0 < contact_distance_m <= ambient_distance_m")
    model = path_loss if path_loss is not None else PathLossModel()
    occl = occlusion if occlusion is not None else OcclusionModel()
    truths = tuple(
        t if isinstance(t, GroundTruthTouch) else GroundTruthTouch(*t)
        for t in touch_script
    )
    # constructing the trace validates interval overlap up front
    EventTrace(advs=(), frames=(), truths=truths)
    truths = tuple(sorted(truths, key=lambda t: (t.start_ms, t.end_ms)))

    rng = np.random.default_rng(config.rng_seed)
    starts = [t.start_ms for t in truths]

    def toucher_at(t_ms: int) -> int | None:
        idx = np.searchsorted(starts, t_ms, side="right") - 1
        if idx >= 0 and truths[idx].covers(t_ms):
            return truths[idx].person_id
        return None

    # one sensor index per scripted interval, drawn before any channel noise
    sensor_for = {i: int(rng.integers(0, 4)) for i in range(len(truths))}

    advs = []
    for person, tx in enumerate(config.tx_power_dbm):
        beacon = BeaconIdentity(person_id=person, attachment=Attachment.WRIST)
        dips = _DipState(occl, rng)
        for nominal in range(0, config.duration_ms, config.adv_interval_ms):
            t = _adv_time(nominal, config.jitter_ms, rng)
            touching = toucher_at(t) == person
            distance = contact_distance_m if touching else ambient_distance_m
            occluded = dips.occluded_at(t, eligible=touching)
            expected = tx + model.expected_rss(distance)
            rss = sample_adv(
                expected, occluded, model, occl, config.packet_loss_rate, rng
            )
            if rss is not None:
                advs.append(AdvEvent(t_ms=t, beacon=beacon, rss_dbm=rss))

    frames = []
    for t in range(0, config.duration_ms, config.frame_interval_ms):
        lost = rng.random() < config.frame_loss_rate
        if lost:
            continue
        sensors = [False, False, False, False]
        idx = np.searchsorted(starts, t, side="right") - 1
        if idx >= 0 and truths[idx].covers(t):
            sensors[sensor_for[int(idx)]] = True
        frames.append(RobotFrame(t_ms=t, touch_sensors=tuple(sensors)))

    return EventTrace(advs=tuple(advs), frames=tuple(frames), truths=truths)


@dataclass(frozen=True)
class Scenario:
    """A parsed scenario file: kind plus all model and timing knobs."""

    kind: str
    config: ScenarioConfig = ScenarioConfig()
    path_loss: PathLossModel = PathLossModel()
    occlusion: OcclusionModel = OcclusionModel()
    speed_m_per_s: float = 0.05
    start_m: float = 0.1
    ambient_distance_m: float = 1.0
    contact_distance_m: float = 0.05
    touch_script: tuple[GroundTruthTouch, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        if self.kind not in ("recede", "two_person_game"):
            raise ValueError(f"unknown scenario kind {self.kind!r}")

    def with_seed(self, seed: int) -> "Scenario":
        return replace(self, config=replace(self.config, rng_seed=seed))


_SCALAR_KEYS = {
    # key: (section, field, converter)
    "rss_at_1m_dbm": ("path_loss", "rss_at_1m_dbm", float),
    "exponent_n": ("path_loss", "exponent_n", float),
    "shadowing_sigma_db": ("path_loss", "shadowing_sigma_db", float),
    "dip_probability_per_adv": ("occlusion", "dip_probability_per_adv", float),
    "dip_attenuation_db": ("occlusion", "dip_attenuation_db", float),
    "dip_min_duration_ms": ("occlusion", "dip_min_duration_ms", int),
    "dip_max_duration_ms": ("occlusion", "dip_max_duration_ms", int),
    "adv_interval_ms": ("config", "adv_interval_ms", int),
    "jitter_ms": ("config", "jitter_ms", int),
    "frame_interval_ms": ("config", "frame_interval_ms", int),
    "packet_loss_rate": ("config", "packet_loss_rate", float),
    "frame_loss_rate": ("config", "frame_loss_rate", float),
    "duration_ms": ("config", "duration_ms", int),
    "rng_seed": ("config", "rng_seed", int),
    "speed_m_per_s": ("scenario", "speed_m_per_s", float),
    "start_m": ("scenario", "start_m", float),
    "ambient_distance_m": ("scenario", "ambient_distance_m", float),
    "contact_distance_m": ("scenario", "contact_distance_m", float),
}


def parse_scenario(text: str) -> Scenario:
    """Parse a ``key = value`` scenario file into a Scenario.

    Blank lines and ``#`` comments are skipped. ``touch = start end person``
    may repeat; ``tx_power_dbm`` takes a comma-separated list. Unknown keys
    and bad values raise SchemaError with the offending line number.
    """
    sections: dict[str, dict] = {
        "path_loss": {},
        "occlusion": {},
        "config": {},
        "scenario": {},
    }
    kind = None
    touches: list[GroundTruthTouch] = []

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key:
            raise SchemaError(line_no, f"expected 'key = value', got {raw!r}")
        if key == "kind":
            kind = value
        elif key == "tx_power_dbm":
            try:
                powers = tuple(int(p.strip()) for p in value.split(","))
            except ValueError:
                raise SchemaError(line_no, f"bad value for tx_power_dbm: {value!r}")
            sections["config"]["tx_power_dbm"] = powers
        elif key == "touch":
            parts = value.split()
            if len(parts) != 3:
                raise SchemaError(
                    line_no, "touch needs three fields: start_ms end_ms person_id"
                )
            try:
                touches.append(GroundTruthTouch(*(int(p) for p in parts)))
            except ValueError as exc:
                raise SchemaError(line_no, f"bad touch interval: {exc}")
        elif key in _SCALAR_KEYS:
            section, name, convert = _SCALAR_KEYS[key]
            try:
                sections[section][name] = convert(value)
            except ValueError:
                raise SchemaError(line_no, f"bad value for {key}: {value!r}")
        else:
            raise SchemaError(line_no, f"unknown scenario key {key!r}")

    if kind is None:
        raise SchemaError(None, "missing required key 'kind'")
    try:
        return Scenario(
            kind=kind,
            config=ScenarioConfig(**sections["config"]),
            path_loss=PathLossModel(**sections["path_loss"]),
            occlusion=OcclusionModel(**sections["occlusion"]),
            touch_script=tuple(touches),
            **sections["scenario"],
        )
    except ValueError as exc:
        raise SchemaError(None, str(exc))


def build_trace(scenario: Scenario) -> EventTrace:
    """Run the scenario's generator and return the synthetic trace."""
    if scenario.kind == "recede":
        return generate_recede_scenario(
            scenario.config,
            scenario.path_loss,
            speed_m_per_s=scenario.speed_m_per_s,
            start_m=scenario.start_m,
        )
    return generate_two_person_game(
        scenario.config,
        scenario.path_loss,
        scenario.occlusion,
        scenario.touch_script,
        ambient_distance_m=scenario.ambient_distance_m,
        contact_distance_m=scenario.contact_distance_m,
    )
