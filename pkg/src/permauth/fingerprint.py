"""Order-sensitive fingerprints of a labelled cycle.

The vertices of a complete graph carry weights; a permutation picks the order
in which the perimeter visits them.  Each fingerprint here summarises the
perimeter so that reordering the vertices generally changes the result.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

from .perm import Permutation

WIDTHS = (8, 16, 24, 32)
MATRIX_MODULUS = 1 << 16

INT_SUM = "int-sum"
XOR_VECTOR = "xor-vector"
KINDS = (INT_SUM, XOR_VECTOR)


@dataclass(frozen=True)
class WeightVector:
    """Vertex weights of fixed bit width."""

    elements: tuple[int, ...]
    width_bits: int = 8

    def __post_init__(self):
        els = tuple(int(x) for x in self.elements)
        if self.width_bits not in WIDTHS:
            raise ValueError(f"width_bits must be one of {WIDTHS}, got {self.width_bits}")
        if len(els) < 2:
            raise ValueError("a weight vector needs at least 2 elements")
        limit = 1 << self.width_bits
        for x in els:
            if not 0 <= x < limit:
                raise ValueError(f"element {x} does not fit in {self.width_bits} bits")
        object.__setattr__(self, "elements", els)

    @classmethod
    def random(cls, n: int, width_bits: int, rng: random.Random) -> "WeightVector":
        return cls(tuple(rng.getrandbits(width_bits) for _ in range(n)), width_bits)

    @classmethod
    def from_bytes(cls, data: bytes) -> "WeightVector":
        return cls(tuple(data), 8)

    def __len__(self):
        return len(self.elements)

    def __getitem__(self, i):
        return self.elements[i]

    def __iter__(self):
        return iter(self.elements)

    def reordered(self, mapping: Sequence[int]):
        return type(self)(tuple(self.elements[j] for j in mapping), self.width_bits)

    def __xor__(self, other: "WeightVector"):
        if len(other) != len(self) or other.width_bits != self.width_bits:
            raise ValueError("xor needs vectors of equal length and width")
        return type(self)(tuple(a ^ b for a, b in zip(self.elements, other.elements)), self.width_bits)

    def reversed(self):
        return type(self)(self.elements[::-1], self.width_bits)

    def to_bytes(self) -> bytes:
        """Big-endian fixed-width concatenation of the elements."""
        k = self.width_bits // 8
        return b"".join(x.to_bytes(k, "big") for x in self.elements)

    @classmethod
    def from_raw(cls, data: bytes, width_bits: int):
        k = width_bits // 8
        if width_bits not in WIDTHS:
            raise ValueError(f"width_bits must be one of {WIDTHS}, got {width_bits}")
        if len(data) % k:
            raise ValueError(f"{len(data)} bytes is not a whole number of {width_bits}-bit elements")
        return cls(tuple(int.from_bytes(data[i:i + k], "big") for i in range(0, len(data), k)), width_bits)

    def to_text(self) -> str:
        return f"wv:{self.width_bits}:{self.to_bytes().hex()}"

    @classmethod
    def from_text(cls, s: str):
        parts = s.strip().split(":")
        if len(parts) != 3 or parts[0] != "wv":
            raise ValueError(f"not a weight-vector encoding: {s!r}")
        return cls.from_raw(bytes.fromhex(parts[2]), int(parts[1]))


class DiffVector(WeightVector):
    """Cyclic XOR differences of a weight vector; components always XOR to zero."""

    @property
    def xor_total(self) -> int:
        t = 0
        for x in self.elements:
            t ^= x
        return t


@dataclass(frozen=True)
class Series:
    """Fingerprints of ``base`` under ``p**1 .. p**L``; ``entries[0]`` is exponent 1."""

    kind: str
    entries: tuple

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown series kind {self.kind!r}")
        if len(self.entries) < 1:
            raise ValueError("a series has at least one entry")
        object.__setattr__(self, "entries", tuple(self.entries))

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def at(self, exponent: int):
        """Entry for ``p**exponent``, 1-based."""
        if not 1 <= exponent <= len(self.entries):
            raise IndexError(f"series index {exponent} outside 1..{len(self.entries)}")
        return self.entries[exponent - 1]


def _values(w) -> tuple[int, ...]:
    vals = tuple(w.elements) if isinstance(w, WeightVector) else tuple(w)
    if len(vals) < 2:
        raise ValueError("the perimeter needs at least 2 vertices")
    return vals


def diff_sum(w) -> int:
    """Sum of absolute differences between cyclically adjacent weights."""
    v = _values(w)
    return sum(abs(b - a) for a, b in zip(v, v[1:] + v[:1]))


def diff_vector_xor(w) -> DiffVector:
    """``out[i] = w[i+1] ^ w[i]`` around the cycle."""
    v = _values(w)
    width = w.width_bits if isinstance(w, WeightVector) else 8
    return DiffVector(tuple(b ^ a for a, b in zip(v, v[1:] + v[:1])), width)


def fingerprint(w, kind: str = INT_SUM):
    if kind == INT_SUM:
        return diff_sum(w)
    if kind == XOR_VECTOR:
        return diff_vector_xor(w)
    raise ValueError(f"unknown fingerprint kind {kind!r}")


def string_fingerprint(labels: Sequence[str], p: Permutation) -> str:
    """Concatenate the two-symbol edge labels around the permuted cycle."""
    labels = list(labels)
    if len(set(labels)) != len(labels):
        raise ValueError("vertex labels must be pairwise distinct")
    seq = p.apply(labels)
    n = len(seq)
    return "".join(seq[i] + seq[(i + 1) % n] for i in range(n))


Matrix = tuple[tuple[int, int], tuple[int, int]]


def _matmul(a, b) -> Matrix:
    m = MATRIX_MODULUS
    return (
        ((a[0][0] * b[0][0] + a[0][1] * b[1][0]) % m, (a[0][0] * b[0][1] + a[0][1] * b[1][1]) % m),
        ((a[1][0] * b[0][0] + a[1][1] * b[1][0]) % m, (a[1][0] * b[0][1] + a[1][1] * b[1][1]) % m),
    )


def matrix_fingerprint(mats: Sequence, p: Permutation) -> Matrix:
    """Sum of products of cyclically adjacent 2x2 matrices, entries mod 2**16."""
    if len(mats) < 2:
        raise ValueError("the perimeter needs at least 2 vertices")
    seq = p.apply(list(mats))
    n = len(seq)
    acc = [[0, 0], [0, 0]]
    for i in range(n):
        prod = _matmul(seq[i], seq[(i + 1) % n])
        for r in range(2):
            for c in range(2):
                acc[r][c] = (acc[r][c] + prod[r][c]) % MATRIX_MODULUS
    return (tuple(acc[0]), tuple(acc[1]))


def series(base, p: Permutation, length: int, kind: str = INT_SUM) -> Series:
    """Fingerprints of ``apply(p**i, base)`` for ``i = 1..length``."""
    if length < 1:
        raise ValueError("series length must be at least 1")
    if len(base) != p.degree:
        raise ValueError(f"length mismatch: base has {len(base)} elements, permutation degree {p.degree}")
    out = []
    cur = base
    for _ in range(length):
        cur = p.apply(cur)
        out.append(fingerprint(cur, kind))
    return Series(kind, tuple(out))
