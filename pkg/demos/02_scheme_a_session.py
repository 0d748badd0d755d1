#!/usr/bin/env python
# Conjugation scheme: the prover knows pi with C = (pi Pi pi^-1)(B).
import random

from permauth import keyfile
from permauth.protocol import FULL_VECTOR, ProverA, Verifier, keygen_a, run_local_session

rng = random.Random(2024)
kp = keygen_a(64, width_bits=8, rng=rng)
print(keyfile.format_public_a(kp.public)[:160], "...\n")

out = run_local_session(ProverA(kp, rng), Verifier("A", kp.public, rng), rounds=80)
print("80-round session accepted:", out.accepted)
t = out.transcripts[0]
print("round 1: commitment", t.commitment, "challenge", t.challenge, "verdict", t.verdict)

# Committing to the whole vector R(B) instead of its difference sum.
out = run_local_session(ProverA(kp, rng, FULL_VECTOR), Verifier("A", kp.public, rng, FULL_VECTOR), 80)
print("full-vector session accepted:", out.accepted)

# Two answers to the same full-vector commitment reveal sigma = tau^-1 R.
from permauth.protocol import prover_commit_a, prover_respond_a
R, c = prover_commit_a(kp, rng, FULL_VECTOR)
tau = prover_respond_a(kp, R, 1)
print("tau^-1 ∘ R == sigma:", tau.inverse().compose(R) == kp.sigma)
