"""Provers that do not hold the secret.

The one-sided cheaters prepare for a single challenge value and therefore
pass about half of all rounds.  The forgers go further: they derive, from the
public key alone, enough to answer both challenges.

* Scheme A publishes ``B`` and ``C = sigma(B)``, which hold the same multiset
  of weights.  Any permutation lining ``C`` up with ``B`` (found by matching
  equal values) works in place of ``sigma⁻¹``.
* Scheme B's XOR difference map is linear with the constant vectors as its
  kernel.  Integrating ``alpha_1`` and undoing ``pi`` recovers ``X`` up to a
  constant byte, and every such candidate satisfies all published entries.
"""

from __future__ import annotations

import random
from collections import defaultdict

from .fingerprint import DiffVector, WeightVector, diff_vector_xor
from .perm import Permutation
from .protocol import (SCALAR, ProtocolError, Prover, PublicKeyA, PublicKeyB, commitment_a,
                       commitment_b)

GUESS_0 = "guess-0"
GUESS_1 = "guess-1"
STRATEGIES = (GUESS_0, GUESS_1)


class CheatingProverA(Prover):
    """Commits for one anticipated challenge: ``R(B)`` for guess-0, ``Z(C)`` for guess-1."""

    scheme = "A"

    def __init__(self, public: PublicKeyA, rng: random.Random | None = None, strategy: str = GUESS_0,
                 mode: str = SCALAR):
        if strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy {strategy!r}")
        super().__init__(rng, mode)
        self.public = public
        self.strategy = strategy

    def _commit(self):
        Z = Permutation.random(self.public.n, self.rng)
        target = self.public.B if self.strategy == GUESS_0 else self.public.C
        return Z, commitment_a(Z.apply(target), self.mode), None

    def _respond(self, Z, challenge):
        return Z


class CheatingProverB(Prover):
    """guess-0 commits honestly to a random ``R``; guess-1 commits to ``gamma(Z) ^ alpha_i`` and answers ``Z``."""

    scheme = "B"

    def __init__(self, public: PublicKeyB, rng: random.Random | None = None, strategy: str = GUESS_0):
        if strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy {strategy!r}")
        super().__init__(rng)
        self.public = public
        self.strategy = strategy

    def _commit(self):
        i = self.public.series_index(self.round_index)
        Z = WeightVector.from_bytes(self.rng.randbytes(self.public.n))
        gamma = commitment_b(self.public, Z, i)
        if self.strategy == GUESS_1:
            gamma = gamma ^ self.public.alpha.at(i)
        return Z, gamma, i

    def _respond(self, Z, challenge):
        return Z


def align(source: WeightVector, target: WeightVector) -> Permutation:
    """A permutation ``rho`` with ``rho.apply(source) == target``.

    Raises ``ValueError`` when the two vectors are not rearrangements of each other.
    """
    if len(source) != len(target):
        raise ValueError("vectors differ in length")
    slots = defaultdict(list)
    for j, x in enumerate(source):
        slots[x].append(j)
    mapping = []
    for x in target:
        if not slots[x]:
            raise ValueError("vectors are not rearrangements of each other")
        mapping.append(slots[x].pop())
    return Permutation(tuple(mapping))


class ForgingProverA(Prover):
    """Passes both challenges of scheme A without ``pi``."""

    scheme = "A"

    def __init__(self, public: PublicKeyA, rng: random.Random | None = None, mode: str = SCALAR):
        super().__init__(rng, mode)
        self.public = public
        self.rho = align(public.C, public.B)

    def _commit(self):
        R = Permutation.random(self.public.n, self.rng)
        return R, commitment_a(R.apply(self.public.B), self.mode), None

    def _respond(self, R, challenge):
        return R if challenge == 0 else R.compose(self.rho)


def integrate_xor_differences(d: DiffVector, start: int = 0) -> WeightVector:
    """Inverse of ``diff_vector_xor`` fixing ``out[0] = start``."""
    if d.xor_total != 0:
        raise ValueError("difference vector does not telescope to zero")
    out = [start]
    for x in d.elements[:-1]:
        out.append(out[-1] ^ x)
    return WeightVector(tuple(out), d.width_bits)


def recover_secret_b(public: PublicKeyB, offset: int = 0) -> WeightVector:
    """A vector equivalent to ``X`` for verification purposes, from the public key only.

    The true secret is one of the 256 values of ``offset``.
    """
    y = integrate_xor_differences(public.alpha.at(1), offset)
    return public.pi.inverse().apply(y)


class ForgingProverB(Prover):
    """Passes both challenges of scheme B without the password."""

    scheme = "B"

    def __init__(self, public: PublicKeyB, rng: random.Random | None = None):
        super().__init__(rng)
        self.public = public
        self.X = recover_secret_b(public)
        if any(diff_vector_xor(public.powers[i].apply(self.X)).elements != public.alpha.at(i).elements
               for i in range(1, public.length + 1)):
            raise ProtocolError("public key is not internally consistent")

    def _commit(self):
        i = self.public.series_index(self.round_index)
        R = WeightVector.from_bytes(self.rng.randbytes(self.public.n))
        return R, commitment_b(self.public, R, i), i

    def _respond(self, R, challenge):
        return R if challenge == 0 else R ^ self.X
