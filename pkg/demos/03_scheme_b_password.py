#!/usr/bin/env python
# Password scheme: X = SHA-512(password), never stored.
import random

from permauth.protocol import ProverB, Verifier, keygen_b, run_local_session

rng = random.Random(7)
kp = keygen_b(b"correct horse battery staple", rng)
pub = kp.public
print("public permutation order:", pub.pi.order(), " alpha entries:", len(pub.alpha))

# Logging in later: rebuild the key from the password and the published permutation.
again = keygen_b(b"correct horse battery staple", pi=pub.pi)
print("re-derived alpha matches:", again.public.alpha == pub.alpha)

out = run_local_session(ProverB(again, rng), Verifier("B", pub, rng), rounds=80)
print("80 rounds accepted:", out.accepted)
print("series indices used:", sorted({t.series_index for t in out.transcripts})[:8], "...")

wrong = keygen_b(b"Tr0ub4dor&3", pi=pub.pi)
out = run_local_session(ProverB(wrong, rng), Verifier("B", pub, rng), rounds=20)
print("wrong password accepted:", out.accepted,
      f"({sum(t.verdict.accepted for t in out.transcripts)}/20 rounds, the challenge-0 ones)")
