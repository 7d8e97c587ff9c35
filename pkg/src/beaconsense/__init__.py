"""Wearable-beacon proximity, touch, and attribution toolkit.

Encode and decode beacon advertisements, model received event traces,
track per-beacon proximity zones, detect and attribute robot touches,
and synthesize traces with a seeded channel simulator.
"""

from .attribution import (
    AttributionRow,
    attribute_frame,
    attribute_sequence,
    attribution_report_csv,
    evaluate_attribution,
    render_attribution_table,
)
from .errors import (
    BeaconSenseError,
    EmptySequenceError,
    EmptyTraceError,
    MalformedPrefixError,
    NoGroundTruthError,
    NonpositiveDistanceError,
    OverlapError,
    SchemaError,
    TimeRegressionError,
    TruncatedPayloadError,
)
from .ibeacon import (
    ADV_LENGTH,
    ADV_PREFIX,
    AdvertisementPayload,
    Attachment,
    BeaconIdentity,
    decode_advertisement,
    encode_advertisement,
    pack_identity,
    unpack_identity,
)
from .proximity import (
    ProximityConfig,
    ProximityTracker,
    ProximityZone,
    classify_zone,
    render_zone_timeline,
    run_proximity,
)
from .simulate import (
    OcclusionModel,
    PathLossModel,
    Scenario,
    ScenarioConfig,
    build_trace,
    generate_recede_scenario,
    generate_two_person_game,
    parse_scenario,
    sample_adv,
)
from .touch import (
    TouchReport,
    TouchSequence,
    classify_touch_frame,
    evaluate_touch,
    extract_touch_sequences,
    ground_truth_touch,
    render_touch_table,
    touch_report_csv,
)
from .trace import (
    AdvEvent,
    EventTrace,
    GroundTruthTouch,
    RobotFrame,
    parse_trace,
    serialize_trace,
    windowed_max_rss,
    windowed_max_rss_many,
)

__version__ = "0.1.0"

__all__ = [
    "ADV_LENGTH",
    "ADV_PREFIX",
    "AdvEvent",
    "AdvertisementPayload",
    "Attachment",
    "AttributionRow",
    "BeaconIdentity",
    "BeaconSenseError",
    "EmptySequenceError",
    "EmptyTraceError",
    "EventTrace",
    "GroundTruthTouch",
    "MalformedPrefixError",
    "NoGroundTruthError",
    "NonpositiveDistanceError",
    "OcclusionModel",
    "OverlapError",
    "PathLossModel",
    "ProximityConfig",
    "ProximityTracker",
    "ProximityZone",
    "RobotFrame",
    "Scenario",
    "ScenarioConfig",
    "SchemaError",
    "TimeRegressionError",
    "TouchReport",
    "TouchSequence",
    "TruncatedPayloadError",
    "attribute_frame",
    "attribute_sequence",
    "attribution_report_csv",
    "build_trace",
    "classify_touch_frame",
    "classify_zone",
    "decode_advertisement",
    "encode_advertisement",
    "evaluate_attribution",
    "evaluate_touch",
    "extract_touch_sequences",
    "generate_recede_scenario",
    "generate_two_person_game",
    "ground_truth_touch",
    "pack_identity",
    "parse_scenario",
    "parse_trace",
    "render_attribution_table",
    "render_touch_table",
    "render_zone_timeline",
    "run_proximity",
    "sample_adv",
    "serialize_trace",
    "touch_report_csv",
    "unpack_identity",
    "windowed_max_rss",
    "windowed_max_rss_many",
]
