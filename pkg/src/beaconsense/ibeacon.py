"""Bit-exact encoding and decoding of iBeacon advertisement payloads.

Advertisement layout (30 bytes total):

    Offset  Length  Value       Description
    0-2     3       02 01 06    Flags AD structure (LE General Discoverable)
    3-4     2       1A FF       Manufacturer-specific AD: length + type
    5-6     2       4C 00       Apple company ID (little-endian on air)
    7       1       02          iBeacon type
    8       1       15          iBeacon data length (21 bytes following)
    9-24    16      [UUID]      Proximity UUID (big-endian)
    25-26   2       [Major]     Major value (big-endian)
    27-28   2       [Minor]     Minor value (big-endian)
    29      1       [TxPower]   Calibrated TX power, dBm (two's complement)

The UUID and major are shared deployment constants; the low nibble of the
minor field packs a :class:`BeaconIdentity` (who wears the beacon and where
it is attached): ``(person_id << 2) | attachment``.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from enum import IntEnum

from .errors import MalformedPrefixError, TruncatedPayloadError

# Fixed prefix: flags AD + manufacturer AD header (Apple, iBeacon, 0x15 bytes).
ADV_PREFIX = bytes((0x02, 0x01, 0x06, 0x1A, 0xFF, 0x4C, 0x00, 0x02, 0x15))

ADV_LENGTH = 30

TX_POWER_MIN_DBM = -127
TX_POWER_MAX_DBM = 20

_BODY = struct.Struct(">16sHHb")  # UUID, major, minor, txPower


class Attachment(IntEnum):
    """Where on the body a beacon is worn (2-bit wire code)."""

    WRIST = 0
    ANKLE = 1
    CHEST = 2
    OTHER = 3

    def label(self) -> str:
        return self.name.capitalize()

    @classmethod
    def from_label(cls, text: str) -> "Attachment":
        try:
            return cls[text.upper()]
        except KeyError:
            raise ValueError(f"unknown attachment {text!r}") from None


@dataclass(frozen=True, order=True)
class BeaconIdentity:
    """Who wears a beacon and where it is attached.

    Both fields occupy 2 bits each, so an identity packs into the low
    nibble of the advertisement's minor field.
    """

    person_id: int
    attachment: Attachment = Attachment.WRIST

    def __post_init__(self) -> None:
        if not 0 <= self.person_id < 4:
            raise ValueError(f"person_id must be 0..3, got {self.person_id}")
        object.__setattr__(self, "attachment", Attachment(self.attachment))

    def label(self) -> str:
        """Render as ``<person_id>-<Attachment>``, e.g. ``1-Wrist``."""
        return f"{self.person_id}-{self.attachment.label()}"

    @classmethod
    def from_label(cls, text: str) -> "BeaconIdentity":
        person_text, sep, attach_text = text.partition("-")
        if not sep or not person_text.isdigit():
            raise ValueError(f"bad beacon label {text!r}")
        return cls(int(person_text), Attachment.from_label(attach_text))


def pack_identity(identity: BeaconIdentity) -> int:
    """Pack an identity into its 4-bit wire nibble."""
    return (identity.person_id << 2) | int(identity.attachment)


def unpack_identity(nibble: int) -> BeaconIdentity:
    """Inverse of :func:`pack_identity`; every nibble value is valid."""
    if not 0 <= nibble < 16:
        raise ValueError(f"identity nibble must be 0..15, got {nibble}")
    return BeaconIdentity(nibble >> 2, Attachment(nibble & 0b11))


@dataclass(frozen=True)
class AdvertisementPayload:
    """Decoded iBeacon fields.

    Attributes:
        proximity_uuid: 16-byte opaque identifier, shared per deployment.
        major: 16-bit unsigned group value, shared per deployment.
        minor: 16-bit unsigned value; low nibble packs a BeaconIdentity.
        measured_tx_power_dbm: calibrated TX power byte, dBm.
    """

    proximity_uuid: bytes
    major: int
    minor: int
    measured_tx_power_dbm: int

    def __post_init__(self) -> None:
        if len(self.proximity_uuid) != 16:
            raise ValueError(
                f"proximity_uuid must be 16 bytes, got {len(self.proximity_uuid)}"
            )
        object.__setattr__(self, "proximity_uuid", bytes(self.proximity_uuid))
        if not 0 <= self.major <= 0xFFFF:
            raise ValueError(f"major must be 0..65535, got {self.major}")
        if not 0 <= self.minor <= 0xFFFF:
            raise ValueError(f"minor must be 0..65535, got {self.minor}")
        if not TX_POWER_MIN_DBM <= self.measured_tx_power_dbm <= TX_POWER_MAX_DBM:
            raise ValueError(
                "measured_tx_power_dbm must be within "
                f"[{TX_POWER_MIN_DBM}, {TX_POWER_MAX_DBM}], "
                f"got {self.measured_tx_power_dbm}"
            )

    @property
    def identity(self) -> BeaconIdentity:
        """Identity packed in the minor field's low nibble."""
        return unpack_identity(self.minor & 0xF)


def encode_advertisement(payload: AdvertisementPayload) -> bytes:
    """Serialize a payload to its 30-byte advertisement form."""
    return ADV_PREFIX + _BODY.pack(
        payload.proximity_uuid,
        payload.major,
        payload.minor,
        payload.measured_tx_power_dbm,
    )


def decode_advertisement(data: bytes) -> AdvertisementPayload:
    """Parse a 30-byte advertisement into its payload fields.

    Raises:
        TruncatedPayloadError: fewer than 30 bytes supplied.
        MalformedPrefixError: header constants mismatch, or trailing bytes
            beyond the 30-byte frame.
    """
    data = bytes(data)
    if len(data) < ADV_LENGTH:
        raise TruncatedPayloadError(
            f"advertisement needs {ADV_LENGTH} bytes, got {len(data)}"
        )
    if len(data) > ADV_LENGTH:
        raise MalformedPrefixError(
            f"advertisement must be exactly {ADV_LENGTH} bytes, got {len(data)}"
        )
    if data[: len(ADV_PREFIX)] != ADV_PREFIX:
        raise MalformedPrefixError(
            f"bad header {data[:len(ADV_PREFIX)].hex()}, expected {ADV_PREFIX.hex()}"
        )
    uuid, major, minor, tx_power = _BODY.unpack(data[len(ADV_PREFIX):])
    return AdvertisementPayload(uuid, major, minor, tx_power)
