#!/usr/bin/env python
# Permutations act on vectors by "pull": slot i receives v[p[i]].
import random

from permauth.fingerprint import (WeightVector, diff_sum, diff_vector_xor, matrix_fingerprint, series,
                                  string_fingerprint, XOR_VECTOR)
from permauth.perm import Permutation, rotation

rng = random.Random(1)

p = Permutation((2, 0, 1))
print("p =", p, " p([10,20,30]) =", p.apply([10, 20, 30]))
print("p∘p⁻¹ is identity:", p.compose(p.inverse()).is_identity())

q = Permutation.random(64, rng)
print("random degree-64 permutation: cycle type", q.cycle_type()[:6], "... order", q.order())

# The integer fingerprint: sum of |differences| around the cycle.
w = WeightVector((9, 2, 7, 4))
print("\ndiff_sum", list(w), "=", diff_sum(w))
print("a rotation keeps every adjacency, so the sum is unchanged:", diff_sum(rotation(4).apply(w)))
print("a swap usually does not:", diff_sum(Permutation((1, 0, 2, 3)).apply(w)))

# XOR differences keep the whole vector and are linear over GF(2).
u = WeightVector.from_bytes(bytes([1, 2, 4, 8]))
d = diff_vector_xor(u)
print("\nxor differences of", list(u), "->", list(d), " total", d.xor_total)

# Series: the same permutation applied again and again.
base = WeightVector.random(8, 24, rng)
s = series(base, Permutation.random(8, rng), 5)
print("\nint-sum series over 5 powers:", list(s.entries))
print("first xor-vector entry:", list(series(base, rotation(8), 1, XOR_VECTOR).entries[0])[:4], "...")

# Edge-label strings and 2x2 matrix products are order sensitive without any series.
print("\nstring fingerprint ABCD under (1,2,3,0):", string_fingerprint("ABCD", rotation(4)))
A, B = ((1, 1), (0, 1)), ((1, 0), (1, 1))
print("matrix fingerprint [A, B]:", matrix_fingerprint([A, B], Permutation((0, 1))))
