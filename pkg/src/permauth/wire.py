"""Binary framing for the identification protocol.

Frame layout (all integers big-endian)::

    magic   2 bytes  b"PA"
    version 1 byte   0x01
    type    1 byte   MsgType
    length  4 bytes  payload length, at most MAX_PAYLOAD
    payload length bytes

Protocol values inside payloads carry a one-byte tag (see ``encode_value``).
"""

from __future__ import annotations

import enum
import struct
from dataclasses import dataclass
from typing import Union

from .fingerprint import DiffVector, WeightVector
from .perm import Permutation

MAGIC = b"PA"
VERSION = 0x01
HEADER = struct.Struct(">2sBBI")
HEADER_SIZE = HEADER.size
MAX_PAYLOAD = 1 << 20


class MsgType(enum.IntEnum):
    HELLO = 0x01
    COMMIT = 0x02
    CHALLENGE = 0x03
    RESPONSE = 0x04
    ROUND_RESULT = 0x05
    SESSION_RESULT = 0x06
    ABORT = 0x07


class AbortReason(enum.IntEnum):
    UNSPECIFIED = 0
    SCHEME_MISMATCH = 1
    UNEXPECTED_MESSAGE = 2
    DECODE_ERROR = 3
    TIMEOUT = 4
    PROTOCOL_ERROR = 5
    SHUTDOWN = 6


class FrameError(Exception):
    """A frame or payload could not be decoded.  ``reason`` is a stable short code."""

    REASONS = ("bad-magic", "bad-version", "truncated", "oversize", "unknown-type", "bad-payload")

    def __init__(self, reason: str, detail: str = ""):
        assert reason in self.REASONS
        self.reason = reason
        super().__init__(f"{reason}: {detail}" if detail else reason)


# -- tagged values ----------------------------------------------------------

TAG_SCALAR = 0x00
TAG_WEIGHTS = 0x01
TAG_DIFFS = 0x02
TAG_PERM = 0x03

Value = Union[int, WeightVector, DiffVector, Permutation]


def encode_value(v: Value) -> bytes:
    if isinstance(v, Permutation):
        return bytes([TAG_PERM]) + v.to_bytes()
    if isinstance(v, WeightVector):
        tag = TAG_DIFFS if isinstance(v, DiffVector) else TAG_WEIGHTS
        return struct.pack(">BBH", tag, v.width_bits, len(v)) + v.to_bytes()
    if isinstance(v, int) and not isinstance(v, bool) and 0 <= v < 1 << 64:
        return struct.pack(">BQ", TAG_SCALAR, v)
    raise TypeError(f"cannot encode {v!r}")


def read_value(data: bytes) -> tuple[Value, bytes]:
    """Decode one tagged value from the front of *data*; return it and the rest."""
    try:
        if not data:
            raise ValueError("missing value tag")
        tag = data[0]
        if tag == TAG_SCALAR:
            if len(data) < 9:
                raise ValueError("truncated scalar")
            return struct.unpack_from(">Q", data, 1)[0], data[9:]
        if tag in (TAG_WEIGHTS, TAG_DIFFS):
            if len(data) < 4:
                raise ValueError("truncated vector header")
            width, count = struct.unpack_from(">BH", data, 1)
            if width not in (8, 16, 24, 32):
                raise ValueError(f"bad vector width {width}")
            end = 4 + count * (width // 8)
            if len(data) < end:
                raise ValueError("truncated vector body")
            cls = DiffVector if tag == TAG_DIFFS else WeightVector
            return cls.from_raw(data[4:end], width), data[end:]
        if tag == TAG_PERM:
            return Permutation.read_bytes(data[1:])
        raise ValueError(f"unknown value tag 0x{tag:02x}")
    except ValueError as e:
        raise FrameError("bad-payload", str(e)) from None


def decode_value(data: bytes) -> Value:
    v, rest = read_value(data)
    if rest:
        raise FrameError("bad-payload", f"{len(rest)} trailing bytes")
    return v


# -- messages ----------------------------------------------------------------

SCHEME_TAGS = {"A": 0x41, "B": 0x42}
MODE_CODES = {"scalar": 0, "full-vector": 1}


@dataclass(frozen=True)
class Hello:
    scheme: str
    mode: str = "scalar"
    rounds: int = 0

    msg_type = MsgType.HELLO

    def payload(self) -> bytes:
        return struct.pack(">BBI", SCHEME_TAGS[self.scheme], MODE_CODES[self.mode], self.rounds)

    @classmethod
    def parse(cls, p: bytes) -> "Hello":
        _exact(p, 6)
        s, m, rounds = struct.unpack(">BBI", p)
        scheme = _lookup(SCHEME_TAGS, s, "scheme")
        mode = _lookup(MODE_CODES, m, "mode")
        return cls(scheme, mode, rounds)


@dataclass(frozen=True)
class Commit:
    commitment: Value
    series_index: int = 0

    msg_type = MsgType.COMMIT

    def payload(self) -> bytes:
        return bytes([self.series_index]) + encode_value(self.commitment)

    @classmethod
    def parse(cls, p: bytes) -> "Commit":
        if not p:
            raise FrameError("bad-payload", "empty commit")
        return cls(decode_value(p[1:]), p[0])


@dataclass(frozen=True)
class Challenge:
    bit: int

    msg_type = MsgType.CHALLENGE

    def payload(self) -> bytes:
        return bytes([self.bit])

    @classmethod
    def parse(cls, p: bytes) -> "Challenge":
        _exact(p, 1)
        if p[0] > 1:
            raise FrameError("bad-payload", f"challenge byte {p[0]}")
        return cls(p[0])


@dataclass(frozen=True)
class Response:
    response: Value

    msg_type = MsgType.RESPONSE

    def payload(self) -> bytes:
        return encode_value(self.response)

    @classmethod
    def parse(cls, p: bytes) -> "Response":
        return cls(decode_value(p))


@dataclass(frozen=True)
class RoundResult:
    round_index: int
    accepted: bool

    msg_type = MsgType.ROUND_RESULT

    def payload(self) -> bytes:
        return struct.pack(">IB", self.round_index, int(self.accepted))

    @classmethod
    def parse(cls, p: bytes) -> "RoundResult":
        _exact(p, 5)
        i, a = struct.unpack(">IB", p)
        return cls(i, _flag(a))


@dataclass(frozen=True)
class SessionResult:
    accepted: bool
    rounds: int

    msg_type = MsgType.SESSION_RESULT

    def payload(self) -> bytes:
        return struct.pack(">BI", int(self.accepted), self.rounds)

    @classmethod
    def parse(cls, p: bytes) -> "SessionResult":
        _exact(p, 5)
        a, rounds = struct.unpack(">BI", p)
        return cls(_flag(a), rounds)


@dataclass(frozen=True)
class Abort:
    reason: AbortReason = AbortReason.UNSPECIFIED
    detail: str = ""

    msg_type = MsgType.ABORT

    def payload(self) -> bytes:
        return bytes([self.reason]) + self.detail.encode("utf-8")

    @classmethod
    def parse(cls, p: bytes) -> "Abort":
        if not p:
            raise FrameError("bad-payload", "empty abort")
        try:
            reason = AbortReason(p[0])
            detail = p[1:].decode("utf-8")
        except (ValueError, UnicodeDecodeError) as e:
            raise FrameError("bad-payload", str(e)) from None
        return cls(reason, detail)


Message = Union[Hello, Commit, Challenge, Response, RoundResult, SessionResult, Abort]

MESSAGE_CLASSES = {c.msg_type: c for c in (Hello, Commit, Challenge, Response, RoundResult, SessionResult, Abort)}


def _exact(p: bytes, n: int):
    if len(p) != n:
        raise FrameError("bad-payload", f"expected {n} payload bytes, got {len(p)}")


def _lookup(table: dict, code: int, what: str) -> str:
    for k, v in table.items():
        if v == code:
            return k
    raise FrameError("bad-payload", f"unknown {what} code {code}")


def _flag(b: int) -> bool:
    if b > 1:
        raise FrameError("bad-payload", f"flag byte {b}")
    return bool(b)


# -- frames ------------------------------------------------------------------

def encode_frame(msg: Message) -> bytes:
    payload = msg.payload()
    if len(payload) > MAX_PAYLOAD:
        raise ValueError(f"payload of {len(payload)} bytes exceeds {MAX_PAYLOAD}")
    return HEADER.pack(MAGIC, VERSION, msg.msg_type, len(payload)) + payload


def parse_header(header: bytes) -> tuple[MsgType, int]:
    if len(header) < HEADER_SIZE:
        raise FrameError("truncated", f"header has {len(header)} of {HEADER_SIZE} bytes")
    magic, version, mtype, length = HEADER.unpack_from(header)
    if magic != MAGIC:
        raise FrameError("bad-magic", magic.hex())
    if version != VERSION:
        raise FrameError("bad-version", str(version))
    if length > MAX_PAYLOAD:
        raise FrameError("oversize", f"{length} bytes")
    try:
        return MsgType(mtype), length
    except ValueError:
        raise FrameError("unknown-type", f"0x{mtype:02x}") from None


def decode_message(mtype: MsgType, payload: bytes) -> Message:
    return MESSAGE_CLASSES[mtype].parse(payload)


def decode_frame(data: bytes) -> Message:
    """Decode exactly one frame.  Raises ``FrameError`` on any malformed input."""
    mtype, length = parse_header(data)
    body = data[HEADER_SIZE:]
    if len(body) < length:
        raise FrameError("truncated", f"payload has {len(body)} of {length} bytes")
    if len(body) > length:
        raise FrameError("bad-payload", f"{len(body) - length} bytes after frame")
    return decode_message(mtype, body)
