#!/usr/bin/env python
# Neither scheme survives an adversary holding only the public key.
import random

from permauth.adversary import ForgingProverA, ForgingProverB, align, recover_secret_b
from permauth.protocol import Verifier, keygen_a, keygen_b, run_local_session

rng = random.Random(99)

# Scheme A: C is a rearrangement of B, so matching equal weights gives a stand-in for sigma^-1.
kp = keygen_a(64, 8, rng)
rho = align(kp.public.C, kp.public.B)
print("rho(C) == B:", rho.apply(kp.public.C) == kp.public.B)
out = run_local_session(ForgingProverA(kp.public, rng), Verifier("A", kp.public, rng), 80)
print("forged scheme A session accepted:", out.accepted)

# Scheme B: integrate alpha_1 and undo pi; X is one of 256 candidates.
kb = keygen_b(b"a long and careful passphrase", rng)
hits = [c for c in range(256) if recover_secret_b(kb.public, c) == kb.X]
print("true X found at offset", hits)
out = run_local_session(ForgingProverB(kb.public, rng), Verifier("B", kb.public, rng), 80)
print("forged scheme B session accepted:", out.accepted)
