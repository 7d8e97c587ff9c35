"""Exception types raised across the package."""


class BeaconSenseError(Exception):
    """Base class for all errors raised by this package."""


class MalformedPrefixError(BeaconSenseError):
    """Advertisement bytes do not carry the expected header constants."""


class TruncatedPayloadError(BeaconSenseError):
    """Advertisement byte sequence is shorter than a full payload."""


class SchemaError(BeaconSenseError):
    """A trace or scenario line does not match the file grammar.

    Carries the 1-based line number of the offending record, or None for
    file-level problems such as a missing required key.
    """

    def __init__(self, line_no: int | None, message: str):
        prefix = f"line {line_no}: " if line_no is not None else ""
        super().__init__(prefix + message)
        self.line_no = line_no


class OverlapError(BeaconSenseError):
    """Ground-truth touch intervals overlap."""


class TimeRegressionError(BeaconSenseError):
    """An event was fed to a state machine out of time order."""


class EmptyTraceError(BeaconSenseError):
    """The trace lacks the records the operation needs."""


class EmptySequenceError(BeaconSenseError):
    """A touch sequence contains no attributed frames."""


class NoGroundTruthError(BeaconSenseError):
    """The trace carries no ground-truth touch intervals."""


class NonpositiveDistanceError(BeaconSenseError):
    """A path-loss query was made at distance <= 0."""
