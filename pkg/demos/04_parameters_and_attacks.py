#!/usr/bin/env python
# Counting arguments, parameter sizing and small-scale brute force.
import random

from permauth.analysis import (brute_force_recover, collision_stats, graph_probability_report, n_partitions,
                               parameter_report)
from permauth.fingerprint import WeightVector, series
from permauth.perm import Permutation

print("N(4,2) =", n_partitions(4, 2).count, " N(3,2) =", n_partitions(3, 2).count)
print("bits in N(2^30-1, 63):", n_partitions((1 << 30) - 1, 63).bit_length)

for key, value, note in parameter_report(64, 24, 30).rows():
    print(f"  {key:>22} = {value}   {note}")

g = graph_probability_report(64, 30)
print("log2 P(random edge set is a graph) =", g.graph_exponent_bits)
print("log2 P(contains a partition and is a graph) =", round(g.combined_exponent_bits, 1))

# Recovering a degree-6 permutation from three difference sums.
rng = random.Random(3)
base = WeightVector.random(6, 24, rng)
secret = Permutation.random(6, rng)
res = brute_force_recover(base, series(base, secret, 3))
print(f"\nbrute force: {len(res)} of {res.trials} permutations fit the series; secret among them: {secret in res}")
for L in (1, 2, 3, 4):
    r = collision_stats(6, 8, L, 2000, random.Random(5))
    print(f"  n=6, 8-bit weights, L={L}: series collision rate {r.series_rate:.4f}")
