"""Counting arguments, parameter sizing and desk-scale attacks.

Counts are exact Python integers; logarithms are doubles, which is plenty for
reporting bit exponents.
"""

from __future__ import annotations

import itertools
import math
import random
import time
from dataclasses import dataclass

import numpy as np

from .fingerprint import INT_SUM, XOR_VECTOR, Series, WeightVector, series
from .perm import Permutation, make_rng

BRUTE_FORCE_MAX_DEGREE = 10

# Reference figures, printed next to the recomputed values.
QUOTED = {
    "keyspace_bits_n64": 300,
    "partition_bits_x30_n64": 1600,
    "birthday_bits_n64": (22, 24),
    "containment_probability_x30": 0.014176,
    "existing_graph_probability_x30": "1/56960 bit = 1e-17088",
}


@dataclass(frozen=True)
class PartitionCount:
    p: int
    q: int
    count: int

    @property
    def bit_length(self) -> int:
        return self.count.bit_length()


def n_partitions(p: int, q: int) -> PartitionCount:
    """Ordered ways to write *p* as a sum of *q* positive integers: ``C(p-1, q-1)``."""
    if p < 1 or q < 1:
        raise ValueError("p and q must be positive")
    return PartitionCount(p, q, math.comb(p - 1, q - 1) if p >= q else 0)


def log2_int(x: int) -> float:
    return math.log2(x) if x > 0 else float("-inf")


def series_length_required(keyspace_bits: float, sum_bits: float) -> int:
    return math.ceil(keyspace_bits / sum_bits)


def birthday_weight_bits(edge_count: int) -> int:
    return math.ceil(2 * math.log2(edge_count))


@dataclass(frozen=True)
class ParameterReport:
    n: int
    edge_count: int
    keyspace_bits: float
    weight_bits: int
    sum_bits: int
    series_length_required: int
    birthday_weight_bits: int

    @property
    def transmitted_bits(self) -> int:
        return self.series_length_required * self.sum_bits

    def rows(self) -> list[tuple[str, object, str]]:
        return [
            ("n", self.n, "vertices"),
            ("edges", self.edge_count, "n(n-1)/2"),
            ("keyspace_bits", f"{self.keyspace_bits:.3f}", f"log2(n!); quoted ~{QUOTED['keyspace_bits_n64']} at n=64"),
            ("weight_bits", self.weight_bits, "vertex weight width"),
            ("sum_bits", self.sum_bits, "difference-sum width"),
            ("series_len", self.series_length_required, "ceil(keyspace_bits / sum_bits)"),
            ("transmitted_bits", self.transmitted_bits, "series_len * sum_bits"),
            ("birthday_weight_bits", self.birthday_weight_bits,
             "ceil(2 log2 edges); quoted 22 and 24 at n=64"),
        ]


def parameter_report(n: int, weight_bits: int = 24, sum_bits: int = 30) -> ParameterReport:
    if n < 2:
        raise ValueError("n must be at least 2")
    edges = n * (n - 1) // 2
    keyspace = log2_int(math.factorial(n))
    return ParameterReport(n, edges, keyspace, weight_bits, sum_bits,
                           series_length_required(keyspace, sum_bits), birthday_weight_bits(edges))


@dataclass(frozen=True)
class GraphProbabilityReport:
    """Log2 exponents of the edge-set probabilities for ``n`` vertices and ``x_bits``-bit distances.

    ``log2_partitions`` is ``log2 N(2**x_bits - 1, n - 1)``.
    """

    n: int
    x_bits: int
    edge_count: int
    log2_partitions: float
    graph_exponent_bits: float
    containment_exponent_bits: float
    combined_exponent_bits: float
    existing_graph_exponent_bits: float

    @property
    def degenerate(self) -> bool:
        # with no more edges than vertices every edge set is trivially a graph
        return self.graph_exponent_bits >= 0

    def rows(self) -> list[tuple[str, object, str]]:
        return [
            ("n", self.n, "vertices"),
            ("x_bits", self.x_bits, "distance width"),
            ("edges", self.edge_count, "n(n-1)/2"),
            ("log2_partitions", f"{self.log2_partitions:.3f}", "log2 A, A = N(2^x_bits - 1, n - 1)"),
            ("graph_exp", f"{self.graph_exponent_bits:.1f}", "log2 x^n / x^edges"),
            ("containment_exp", f"{self.containment_exponent_bits:.1f}", "log2 A / x^edges"),
            ("combined_exp", f"{self.combined_exponent_bits:.1f}", "log2 A / x^(2 edges - n)"),
            ("existing_graph_exp", f"{self.existing_graph_exponent_bits:.1f}", "log2 A / x^(edges - n)"),
            ("degenerate", int(self.degenerate), "1 when edges <= vertices"),
        ]


def graph_probability_report(n: int, x_bits: int) -> GraphProbabilityReport:
    if n < 2:
        raise ValueError("n must be at least 2")
    edges = n * (n - 1) // 2
    log2_a = log2_int(n_partitions((1 << x_bits) - 1, n - 1).count)
    graph = (n - edges) * x_bits
    containment = log2_a - edges * x_bits
    return GraphProbabilityReport(n, x_bits, edges, log2_a, graph, containment,
                                  containment + graph, log2_a + graph)


# ---------------------------------------------------------------------------
# Brute force
# ---------------------------------------------------------------------------

@dataclass
class AttackResult:
    candidates: list[Permutation]
    trials: int
    elapsed: float

    def __contains__(self, p: Permutation) -> bool:
        return p in self.candidates

    def __len__(self):
        return len(self.candidates)


def _series_matrix(base: np.ndarray, perms: np.ndarray, length: int, kind: str) -> np.ndarray:
    """Fingerprint series for every row of *perms*; shape (m, length) or (m, length, n)."""
    cur = np.broadcast_to(base, perms.shape)
    out = []
    for _ in range(length):
        cur = np.take_along_axis(cur, perms, axis=1)
        nxt = np.roll(cur, -1, axis=1)
        if kind == INT_SUM:
            out.append(np.abs(nxt - cur).sum(axis=1))
        else:
            out.append(nxt ^ cur)
    return np.stack(out, axis=1)


def brute_force_recover(base: WeightVector, observed: Series, kind: str | None = None,
                        chunk: int = 1 << 16) -> AttackResult:
    """Every permutation whose series over *base* reproduces *observed*."""
    kind = kind or observed.kind
    n = len(base)
    if n > BRUTE_FORCE_MAX_DEGREE:
        raise ValueError(f"refusing to enumerate {n}! permutations; brute force is limited to n <= {BRUTE_FORCE_MAX_DEGREE}")
    if kind not in (INT_SUM, XOR_VECTOR):
        raise ValueError(f"unknown series kind {kind!r}")
    length = len(observed)
    b = np.asarray(base.elements, dtype=np.int64)
    if kind == INT_SUM:
        target = np.asarray(observed.entries, dtype=np.int64)
    else:
        target = np.asarray([e.elements for e in observed.entries], dtype=np.int64)
    start = time.perf_counter()
    found = []
    total = 0
    it = itertools.permutations(range(n))
    while True:
        block = list(itertools.islice(it, chunk))
        if not block:
            break
        perms = np.asarray(block, dtype=np.intp)
        total += len(perms)
        s = _series_matrix(b, perms, length, kind)
        hit = (s == target).reshape(len(perms), -1).all(axis=1)
        found.extend(Permutation(tuple(row)) for row in perms[hit])
    return AttackResult(found, total, time.perf_counter() - start)


# ---------------------------------------------------------------------------
# Collisions
# ---------------------------------------------------------------------------

def pair_collides(base, p: Permutation, q: Permutation, length: int,
                  kind: str = INT_SUM) -> tuple[bool, bool]:
    """``(first entries equal, whole series equal)`` for the two permutations."""
    sp = series(base, p, length, kind)
    sq = series(base, q, length, kind)
    return sp.entries[0] == sq.entries[0], sp.entries == sq.entries


@dataclass
class CollisionReport:
    n: int
    weight_bits: int
    length: int
    trials: int
    single_collisions: int = 0
    series_collisions: int = 0
    elapsed: float = 0.0

    @property
    def single_rate(self) -> float:
        return self.single_collisions / self.trials

    @property
    def series_rate(self) -> float:
        return self.series_collisions / self.trials

    def rows(self):
        return [
            ("n", self.n, ""),
            ("weight_bits", self.weight_bits, ""),
            ("series_len", self.length, ""),
            ("trials", self.trials, "random pairs of distinct permutations"),
            ("single_collisions", self.single_collisions, "equal first difference sum"),
            ("series_collisions", self.series_collisions, "equal whole series"),
            ("single_rate", f"{self.single_rate:.6f}", ""),
            ("series_rate", f"{self.series_rate:.6f}", ""),
        ]


def _weights(n: int, weight_bits: int, rng: random.Random) -> tuple[int, ...]:
    return tuple(rng.getrandbits(weight_bits) for _ in range(n))


def collision_stats(n: int, weight_bits: int, length: int, trials: int,
                    rng: random.Random | None = None) -> CollisionReport:
    """Draw a fresh base and two distinct permutations per trial and compare their series.

    Trial ``i`` runs on its own generator seeded from *rng*, so results do not
    depend on how trials are scheduled.  *weight_bits* may be any positive
    width here, including widths too small for a ``WeightVector``.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    if n < 2:
        raise ValueError("n must be at least 2")
    rng = rng or make_rng()
    seeds = [rng.getrandbits(64) for _ in range(trials)]
    report = CollisionReport(n, weight_bits, length, trials)
    start = time.perf_counter()
    for s in seeds:
        r = random.Random(s)
        base = _weights(n, weight_bits, r)
        p = Permutation.random(n, r)
        q = Permutation.random(n, r)
        while q == p:
            q = Permutation.random(n, r)
        single, whole = pair_collides(base, p, q, length)
        report.single_collisions += single
        report.series_collisions += whole
    report.elapsed = time.perf_counter() - start
    return report
