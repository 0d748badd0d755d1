"""The two permutation identification schemes and their session driver.

Scheme A hides a secret permutation ``pi`` behind the conjugate
``sigma = pi ∘ Pi ∘ pi⁻¹`` of a public permutation ``Pi``.  The public key is
``(Pi, B, C)`` with ``C = sigma(B)``.  Each round the prover commits to the
fingerprint of ``R(B)`` for a fresh random ``R`` and, when challenged, shows
either ``R`` or ``tau = R ∘ sigma⁻¹`` (which maps ``C`` to ``R(B)``).

Scheme B derives a 64-byte secret ``X`` from a password with SHA-512 and
publishes a degree-64 permutation ``pi`` of order at least 32 together with
the XOR difference vectors ``alpha_i`` of ``pi**i (X)``.  The prover commits
to the difference vector of ``pi**i (R)`` and reveals ``R`` or ``R ^ X``.
"""

from __future__ import annotations

import hashlib
import logging
import random
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, NamedTuple, Optional, Union

from .fingerprint import DiffVector, Series, WeightVector, diff_sum, diff_vector_xor, XOR_VECTOR
from .perm import Permutation, make_rng
from . import wire

log = logging.getLogger(__name__)

SCALAR = "scalar"
FULL_VECTOR = "full-vector"
MODES = (SCALAR, FULL_VECTOR)

SCHEME_B_DEGREE = 64
SCHEME_B_SERIES = 32
SCHEME_B_MIN_ORDER = 32


class ProtocolError(Exception):
    pass


class Verdict(NamedTuple):
    accepted: bool
    reason: str = "ok"

    def __bool__(self):
        return self.accepted


ACCEPT = Verdict(True)


def _reject(reason: str) -> Verdict:
    return Verdict(False, reason)


@dataclass(frozen=True)
class RoundTranscript:
    scheme: str
    round_index: int
    commitment: Union[int, WeightVector, DiffVector]
    challenge: int
    response: Union[Permutation, WeightVector, None]
    series_index: Optional[int] = None
    verdict: Optional[Verdict] = None

    def with_verdict(self, verdict: Verdict) -> "RoundTranscript":
        return RoundTranscript(self.scheme, self.round_index, self.commitment, self.challenge,
                               self.response, self.series_index, verdict)


def _check_challenge(challenge):
    if challenge not in (0, 1) or isinstance(challenge, bool):
        raise ProtocolError(f"challenge must be 0 or 1, got {challenge!r}")


# ---------------------------------------------------------------------------
# Scheme A
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PublicKeyA:
    Pi: Permutation
    B: WeightVector
    C: WeightVector

    def __post_init__(self):
        if not (self.Pi.degree == len(self.B) == len(self.C)):
            raise ValueError("Pi, B and C must share one degree")
        if self.B.width_bits != self.C.width_bits:
            raise ValueError("B and C must share one width")

    @property
    def n(self) -> int:
        return self.Pi.degree

    @property
    def width_bits(self) -> int:
        return self.B.width_bits


@dataclass(frozen=True)
class KeyPairA:
    pi: Permutation
    public: PublicKeyA

    @cached_property
    def sigma(self) -> Permutation:
        return self.pi.compose(self.public.Pi).compose(self.pi.inverse())

    @cached_property
    def sigma_inverse(self) -> Permutation:
        return self.sigma.inverse()


def keygen_a(n: int, width_bits: int = 8, rng: random.Random | None = None,
             Pi: Permutation | None = None) -> KeyPairA:
    """Draw ``b``, ``pi`` and ``Pi`` and publish ``(Pi, pi(b), sigma(pi(b)))``.

    ``b`` is not retained.
    """
    if n < 2:
        raise ValueError("scheme A needs degree n >= 2")
    rng = rng or make_rng()
    b = WeightVector.random(n, width_bits, rng)
    pi = Permutation.random(n, rng)
    if Pi is None:
        Pi = Permutation.random(n, rng)
    sigma = pi.compose(Pi).compose(pi.inverse())
    B = pi.apply(b)
    C = sigma.apply(B)
    return KeyPairA(pi, PublicKeyA(Pi, B, C))


def commitment_a(vector: WeightVector, mode: str):
    if mode == SCALAR:
        return diff_sum(vector)
    if mode == FULL_VECTOR:
        return vector
    raise ValueError(f"unknown commitment mode {mode!r}")


def prover_commit_a(kp: KeyPairA, rng: random.Random, mode: str = SCALAR):
    R = Permutation.random(kp.public.n, rng)
    return R, commitment_a(R.apply(kp.public.B), mode)


def prover_respond_a(kp: KeyPairA, R: Permutation, challenge: int) -> Permutation:
    _check_challenge(challenge)
    if challenge == 0:
        return R
    return R.compose(kp.sigma_inverse)


def verifier_check_a(public: PublicKeyA, t: RoundTranscript, mode: str | None = None) -> Verdict:
    """Re-derive the commitment from the response; the mode follows the commitment's type."""
    if t.challenge not in (0, 1):
        return _reject("bad-challenge")
    if isinstance(t.commitment, WeightVector):
        got_mode = FULL_VECTOR
    elif isinstance(t.commitment, int) and not isinstance(t.commitment, bool):
        got_mode = SCALAR
    else:
        return _reject("malformed-commitment")
    if mode is not None and mode != got_mode:
        return _reject("wrong-commitment-mode")
    if not isinstance(t.response, Permutation) or t.response.degree != public.n:
        return _reject("malformed-response")
    target = public.B if t.challenge == 0 else public.C
    if commitment_a(t.response.apply(target), got_mode) != t.commitment:
        return _reject("fingerprint-mismatch")
    return ACCEPT


# ---------------------------------------------------------------------------
# Scheme B
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PublicKeyB:
    pi: Permutation
    alpha: Series

    def __post_init__(self):
        if self.alpha.kind != XOR_VECTOR:
            raise ValueError("alpha must be a series of XOR difference vectors")
        for a in self.alpha.entries:
            if len(a) != self.pi.degree:
                raise ValueError("alpha entries must match the permutation degree")

    @property
    def n(self) -> int:
        return self.pi.degree

    @property
    def length(self) -> int:
        return len(self.alpha)

    @cached_property
    def powers(self) -> tuple[Permutation, ...]:
        """``powers[i] == pi**i`` for ``i = 0..length``."""
        out = [Permutation.identity(self.n)]
        for _ in range(self.length):
            out.append(self.pi.compose(out[-1]))
        return tuple(out)

    def series_index(self, round_index: int) -> int:
        return (round_index - 1) % self.length + 1


@dataclass(frozen=True)
class KeyPairB:
    X: WeightVector
    public: PublicKeyB


def derive_secret_b(password: bytes | str) -> WeightVector:
    """``X = SHA-512(password)``; unsalted, exactly as the scheme is defined."""
    if isinstance(password, str):
        password = password.encode("utf-8")
    if not password:
        raise ValueError("password must not be empty")
    return WeightVector.from_bytes(hashlib.sha512(password).digest())


def alpha_series(pi: Permutation, X: WeightVector, length: int = SCHEME_B_SERIES) -> Series:
    out = []
    cur = X
    for _ in range(length):
        cur = pi.apply(cur)
        out.append(diff_vector_xor(cur))
    return Series(XOR_VECTOR, tuple(out))


def draw_scheme_b_permutation(rng: random.Random, n: int = SCHEME_B_DEGREE,
                              min_order: int = SCHEME_B_MIN_ORDER) -> tuple[Permutation, int]:
    """Redraw until the order reaches *min_order*; also return the number of draws."""
    draws = 0
    while True:
        draws += 1
        p = Permutation.random(n, rng)
        if p.order() >= min_order:
            return p, draws


def keygen_b(password: bytes | str, rng: random.Random | None = None,
             pi: Permutation | None = None) -> KeyPairB:
    """Derive ``X`` from *password* and publish ``(pi, alpha)``.

    Passing a previously published *pi* re-derives the identical public key,
    so nothing secret has to be stored.
    """
    X = derive_secret_b(password)
    if pi is None:
        pi, _ = draw_scheme_b_permutation(rng or make_rng())
    elif pi.degree != SCHEME_B_DEGREE:
        raise ValueError(f"scheme B permutation must have degree {SCHEME_B_DEGREE}")
    elif pi.order() < SCHEME_B_MIN_ORDER:
        raise ValueError(f"scheme B permutation must have order >= {SCHEME_B_MIN_ORDER}")
    return KeyPairB(X, PublicKeyB(pi, alpha_series(pi, X)))


def commitment_b(public: PublicKeyB, vector: WeightVector, i: int) -> DiffVector:
    return diff_vector_xor(public.powers[i].apply(vector))


def prover_commit_b(kp: KeyPairB, round_index: int, rng: random.Random):
    public = kp.public
    R = WeightVector.from_bytes(rng.randbytes(public.n))
    i = public.series_index(round_index)
    return R, i, commitment_b(public, R, i)


def prover_respond_b(kp: KeyPairB, R: WeightVector, challenge: int) -> WeightVector:
    _check_challenge(challenge)
    return R if challenge == 0 else R ^ kp.X


def verifier_check_b(public: PublicKeyB, t: RoundTranscript) -> Verdict:
    if t.challenge not in (0, 1):
        return _reject("bad-challenge")
    i = t.series_index
    if not isinstance(i, int) or not 1 <= i <= public.length:
        return _reject("bad-series-index")
    if not isinstance(t.commitment, WeightVector) or len(t.commitment) != public.n or t.commitment.width_bits != 8:
        return _reject("malformed-commitment")
    r = t.response
    if not isinstance(r, WeightVector) or len(r) != public.n or r.width_bits != 8:
        return _reject("malformed-response")
    expect = t.commitment if t.challenge == 0 else t.commitment ^ public.alpha.at(i)
    if commitment_b(public, r, i).elements != expect.elements:
        return _reject("fingerprint-mismatch")
    return ACCEPT


# ---------------------------------------------------------------------------
# State machines
# ---------------------------------------------------------------------------

class Prover:
    """One prover per session.  ``commit`` and ``respond`` must alternate."""

    scheme = "?"

    def __init__(self, rng: random.Random | None = None, mode: str = SCALAR):
        self.rng = rng or make_rng()
        self.mode = mode
        self._state = None
        self.round_index = 0

    def commit(self) -> tuple[Union[int, WeightVector], Optional[int]]:
        """Start the next round; return ``(commitment, series_index)``."""
        if self._state is not None:
            raise ProtocolError("commit called twice without a response")
        self.round_index += 1
        state, commitment, series_index = self._commit()
        self._state = state
        return commitment, series_index

    def respond(self, challenge: int):
        if self._state is None:
            raise ProtocolError("respond called before commit")
        _check_challenge(challenge)
        state, self._state = self._state, None
        return self._respond(state, challenge)

    def close(self):
        """Drop per-round and secret state."""
        self._state = None

    def _commit(self):
        raise NotImplementedError

    def _respond(self, state, challenge):
        raise NotImplementedError


class ProverA(Prover):
    scheme = "A"

    def __init__(self, keypair: KeyPairA, rng=None, mode: str = SCALAR):
        super().__init__(rng, mode)
        self.keypair = keypair

    def _commit(self):
        R, c = prover_commit_a(self.keypair, self.rng, self.mode)
        return R, c, None

    def _respond(self, R, challenge):
        return prover_respond_a(self.keypair, R, challenge)

    def close(self):
        super().close()
        self.keypair = None


class ProverB(Prover):
    scheme = "B"

    def __init__(self, keypair: KeyPairB, rng=None, mode: str = SCALAR):
        super().__init__(rng, mode)
        self.keypair = keypair

    def _commit(self):
        R, i, gamma = prover_commit_b(self.keypair, self.round_index, self.rng)
        return R, gamma, i

    def _respond(self, R, challenge):
        return prover_respond_b(self.keypair, R, challenge)

    def close(self):
        super().close()
        self.keypair = None


class Verifier:
    """Draws challenges and checks responses, one round at a time."""

    def __init__(self, scheme: str, public, rng: random.Random | None = None, mode: str = SCALAR):
        if scheme not in ("A", "B"):
            raise ValueError(f"unknown scheme {scheme!r}")
        if mode not in MODES:
            raise ValueError(f"unknown commitment mode {mode!r}")
        self.scheme = scheme
        self.public = public
        self.rng = rng or make_rng()
        self.mode = mode
        self.round_index = 0
        self._pending = None

    def challenge(self, commitment, series_index: int | None = None) -> int:
        if self._pending is not None:
            raise ProtocolError("challenge issued twice without a response")
        self.round_index += 1
        bit = self.rng.getrandbits(1)
        self._pending = (commitment, series_index, bit)
        return bit

    def check(self, response) -> RoundTranscript:
        if self._pending is None:
            raise ProtocolError("check called before challenge")
        (commitment, series_index, bit), self._pending = self._pending, None
        t = RoundTranscript(self.scheme, self.round_index, commitment, bit, response,
                            series_index if self.scheme == "B" else None)
        return t.with_verdict(check_transcript(self.public, t, self.mode))


def check_transcript(public, t: RoundTranscript, mode: str | None = None) -> Verdict:
    if t.scheme == "A" and isinstance(public, PublicKeyA):
        return verifier_check_a(public, t, mode)
    if t.scheme == "B" and isinstance(public, PublicKeyB):
        return verifier_check_b(public, t)
    return _reject("scheme-mismatch")


# ---------------------------------------------------------------------------
# Sessions
# ---------------------------------------------------------------------------

@dataclass
class SessionPolicy:
    rounds: int = 80
    mode: str = SCALAR
    timeout: float = 30.0
    seed: Optional[int] = None

    def __post_init__(self):
        if self.rounds < 1:
            raise ValueError("a session needs at least one round")
        if self.mode not in MODES:
            raise ValueError(f"unknown commitment mode {self.mode!r}")


EXIT_ACCEPT = 0
EXIT_REJECT = 1
EXIT_USAGE = 2
EXIT_ABORT = 3


@dataclass
class SessionOutcome:
    accepted: bool
    transcripts: list = field(default_factory=list)
    aborted: bool = False
    reason: str = ""

    @property
    def exit_code(self) -> int:
        if self.aborted:
            return EXIT_ABORT
        return EXIT_ACCEPT if self.accepted else EXIT_REJECT


def run_local_session(prover: Prover, verifier: Verifier, rounds: int) -> SessionOutcome:
    """Play *rounds* rounds in-process, no transport."""
    transcripts = []
    for _ in range(rounds):
        commitment, series_index = prover.commit()
        bit = verifier.challenge(commitment, series_index)
        transcripts.append(verifier.check(prover.respond(bit)))
    prover.close()
    return SessionOutcome(all(t.verdict.accepted for t in transcripts), transcripts)


class ChannelError(Exception):
    """Transport failure: the peer vanished, a read timed out, or a frame was unreadable."""


def _abort(channel, reason: wire.AbortReason, detail: str) -> SessionOutcome:
    try:
        channel.send(wire.Abort(reason, detail))
    except Exception:  # noqa: BLE001 - best effort on a failing channel
        pass
    return SessionOutcome(False, aborted=True, reason=detail)


def _expect(channel, cls):
    msg = channel.recv()
    if isinstance(msg, wire.Abort):
        raise _PeerAbort(msg)
    if not isinstance(msg, cls):
        raise ProtocolError(f"expected {cls.__name__}, got {type(msg).__name__}")
    return msg


class _PeerAbort(Exception):
    def __init__(self, msg: wire.Abort):
        self.msg = msg
        super().__init__(f"peer aborted: {msg.reason.name} {msg.detail}".strip())


def run_verifier(verifier: Verifier, channel, policy: SessionPolicy,
                 on_round: Callable[[RoundTranscript], None] | None = None) -> SessionOutcome:
    transcripts = []
    verifier.mode = policy.mode
    try:
        hello = _expect(channel, wire.Hello)
        if hello.scheme != verifier.scheme:
            return _abort(channel, wire.AbortReason.SCHEME_MISMATCH,
                          f"verifier runs scheme {verifier.scheme}, prover asked for {hello.scheme}")
        channel.send(wire.Hello(verifier.scheme, policy.mode, policy.rounds))
        for r in range(1, policy.rounds + 1):
            commit = _expect(channel, wire.Commit)
            series_index = commit.series_index if verifier.scheme == "B" else None
            bit = verifier.challenge(commit.commitment, series_index)
            channel.send(wire.Challenge(bit))
            t = verifier.check(_expect(channel, wire.Response).response)
            transcripts.append(t)
            if on_round is not None:
                on_round(t)
            channel.send(wire.RoundResult(r, t.verdict.accepted))
        accepted = all(t.verdict.accepted for t in transcripts)
        channel.send(wire.SessionResult(accepted, policy.rounds))
        return SessionOutcome(accepted, transcripts)
    except _PeerAbort as e:
        return SessionOutcome(False, transcripts, aborted=True, reason=str(e))
    except wire.FrameError as e:
        return _abort_with(channel, transcripts, wire.AbortReason.DECODE_ERROR, str(e))
    except ProtocolError as e:
        return _abort_with(channel, transcripts, wire.AbortReason.UNEXPECTED_MESSAGE, str(e))
    except (ChannelError, OSError, TimeoutError) as e:
        return SessionOutcome(False, transcripts, aborted=True, reason=f"transport: {e}")


def _abort_with(channel, transcripts, reason, detail) -> SessionOutcome:
    out = _abort(channel, reason, detail)
    out.transcripts = transcripts
    return out


def run_prover(prover: Prover, channel) -> SessionOutcome:
    """Drive the prover side until the verifier reports the session result."""
    results = []
    try:
        channel.send(wire.Hello(prover.scheme, prover.mode, 0))
        hello = _expect(channel, wire.Hello)
        if hello.scheme != prover.scheme:
            return _abort(channel, wire.AbortReason.SCHEME_MISMATCH, "verifier answered with another scheme")
        prover.mode = hello.mode
        for _ in range(hello.rounds):
            commitment, series_index = prover.commit()
            channel.send(wire.Commit(commitment, series_index or 0))
            bit = _expect(channel, wire.Challenge).bit
            channel.send(wire.Response(prover.respond(bit)))
            results.append(_expect(channel, wire.RoundResult))
        final = _expect(channel, wire.SessionResult)
        return SessionOutcome(final.accepted, results)
    except _PeerAbort as e:
        return SessionOutcome(False, results, aborted=True, reason=str(e))
    except wire.FrameError as e:
        return _abort_with(channel, results, wire.AbortReason.DECODE_ERROR, str(e))
    except ProtocolError as e:
        return _abort_with(channel, results, wire.AbortReason.UNEXPECTED_MESSAGE, str(e))
    except (ChannelError, OSError, TimeoutError) as e:
        return SessionOutcome(False, results, aborted=True, reason=f"transport: {e}")
    finally:
        prover.close()


def run_session(role: str, channel, policy: SessionPolicy, *, prover: Prover | None = None,
                verifier: Verifier | None = None, on_round=None) -> SessionOutcome:
    if role == "prover":
        if prover is None:
            raise ValueError("prover role needs a Prover")
        return run_prover(prover, channel)
    if role == "verifier":
        if verifier is None:
            raise ValueError("verifier role needs a Verifier")
        return run_verifier(verifier, channel, policy, on_round)
    raise ValueError(f"unknown role {role!r}")
