"""Append-only session logs and their offline re-verification.

One line per round::

    round=3 scheme=B series=3 mode=scalar commit=<hex> challenge=1 response=<hex> verdict=accept

``commit`` and ``response`` hold the hex of the tagged wire encoding of the
value, so a log can be re-checked against the public key alone.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path

from . import wire
from .protocol import RoundTranscript, check_transcript

log = logging.getLogger(__name__)

FIELDS = ("round", "scheme", "series", "mode", "commit", "challenge", "response", "verdict")


def format_line(t: RoundTranscript, mode: str = "scalar") -> str:
    verdict = "accept" if t.verdict and t.verdict.accepted else "reject"
    series = t.series_index if t.series_index is not None else 0
    return (f"round={t.round_index} scheme={t.scheme} series={series} mode={mode} "
            f"commit={wire.encode_value(t.commitment).hex()} challenge={t.challenge} "
            f"response={wire.encode_value(t.response).hex()} verdict={verdict}")


class LogLineError(ValueError):
    pass


@dataclass
class LoggedRound:
    transcript: RoundTranscript | None
    mode: str
    logged_verdict: str
    round_index: int
    error: str = ""


def parse_line(line: str) -> LoggedRound:
    try:
        kv = dict(tok.split("=", 1) for tok in line.split())
    except ValueError:
        raise LogLineError(f"unparseable line: {line!r}") from None
    missing = [f for f in FIELDS if f not in kv]
    if missing:
        raise LogLineError(f"missing fields {missing}")
    try:
        round_index = int(kv["round"])
    except ValueError:
        raise LogLineError(f"bad round index {kv['round']!r}") from None
    scheme = kv["scheme"]
    try:
        commitment = wire.decode_value(bytes.fromhex(kv["commit"]))
        response = wire.decode_value(bytes.fromhex(kv["response"]))
        challenge = int(kv["challenge"])
        series = int(kv["series"])
    except (ValueError, wire.FrameError) as e:
        return LoggedRound(None, kv["mode"], kv["verdict"], round_index, f"undecodable: {e}")
    t = RoundTranscript(scheme, round_index, commitment, challenge, response,
                        series if scheme == "B" else None)
    return LoggedRound(t, kv["mode"], kv["verdict"], round_index)


class TranscriptLog:
    """Appends one line per round; disables itself with a warning if the file is unwritable."""

    def __init__(self, path, mode: str = "scalar"):
        self.path = Path(path)
        self.mode = mode
        self.enabled = True
        try:
            self._fh = open(self.path, "a", encoding="utf-8")
        except OSError as e:
            log.warning("transcript logging disabled: %s", e)
            self._fh = None
            self.enabled = False

    def write(self, t: RoundTranscript):
        if not self.enabled:
            return
        try:
            self._fh.write(format_line(t, self.mode) + "\n")
            self._fh.flush()
        except OSError as e:
            log.warning("transcript logging disabled: %s", e)
            self.enabled = False

    __call__ = write

    def close(self):
        if self._fh is not None:
            self._fh.close()
            self._fh = None

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


@dataclass
class LogCheck:
    rounds: int
    failing: list[tuple[int, str]]

    @property
    def accepted(self) -> bool:
        return self.rounds > 0 and not self.failing


def verify_lines(public, lines) -> LogCheck:
    """Recompute every round's verdict from the public key."""
    rounds = 0
    failing = []
    for line in lines:
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        rounds += 1
        try:
            entry = parse_line(line)
        except LogLineError as e:
            failing.append((rounds, str(e)))
            continue
        if entry.transcript is None:
            failing.append((entry.round_index, entry.error))
            continue
        verdict = check_transcript(public, entry.transcript, entry.mode)
        if not verdict.accepted:
            failing.append((entry.round_index, verdict.reason))
    return LogCheck(rounds, failing)


def verify_log(public, path) -> LogCheck:
    return verify_lines(public, Path(path).read_text(encoding="utf-8").splitlines())
