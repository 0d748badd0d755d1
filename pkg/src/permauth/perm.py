"""Permutation arithmetic.

A :class:`Permutation` of degree ``n`` acts on length-``n`` sequences by the
*pull* convention: ``apply(p, v)[i] == v[p.mapping[i]]``.  Composition is
defined so that ``apply(compose(p, q), v) == apply(p, apply(q, v))``.
"""

from __future__ import annotations

import math
import os
import random
import struct
from dataclasses import dataclass
from functools import reduce

MAX_DEGREE = 0xFFFF


def make_rng(seed: int | None = None) -> random.Random:
    """Return a seeded ``random.Random``, or OS entropy when no seed is known.

    ``PERMAUTH_SEED`` (decimal) is consulted when *seed* is None.
    """
    if seed is None:
        env = os.environ.get("PERMAUTH_SEED")
        if env is not None and env.strip():
            seed = int(env)
    if seed is None:
        return random.SystemRandom()
    return random.Random(seed)


@dataclass(frozen=True)
class Permutation:
    mapping: tuple[int, ...]

    def __post_init__(self):
        m = tuple(int(x) for x in self.mapping)
        n = len(m)
        if n < 1:
            raise ValueError("permutation degree must be at least 1")
        if n > MAX_DEGREE:
            raise ValueError(f"permutation degree {n} exceeds {MAX_DEGREE}")
        if sorted(m) != list(range(n)):
            raise ValueError(f"mapping is not a bijection on 0..{n - 1}")
        object.__setattr__(self, "mapping", m)

    @property
    def degree(self) -> int:
        return len(self.mapping)

    def __len__(self):
        return len(self.mapping)

    def __iter__(self):
        return iter(self.mapping)

    def __getitem__(self, i):
        return self.mapping[i]

    def __repr__(self):
        return f"Permutation({list(self.mapping)})"

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        if n < 1:
            raise ValueError("invalid degree: permutation degree must be at least 1")
        return cls(tuple(range(n)))

    @classmethod
    def random(cls, n: int, rng: random.Random) -> "Permutation":
        """Uniform permutation by Fisher-Yates.

        ``randrange`` draws by rejection on ``getrandbits``, so each swap index
        is exactly uniform (no modulo bias).
        """
        if n < 1:
            raise ValueError("invalid degree: permutation degree must be at least 1")
        m = list(range(n))
        for i in range(n - 1, 0, -1):
            j = rng.randrange(i + 1)
            m[i], m[j] = m[j], m[i]
        return cls(tuple(m))

    def is_identity(self) -> bool:
        return all(i == x for i, x in enumerate(self.mapping))

    def compose(self, other: "Permutation") -> "Permutation":
        """``self ∘ other``: *other* acts first, then *self*."""
        if other.degree != self.degree:
            raise ValueError(f"degree mismatch: {self.degree} vs {other.degree}")
        q = other.mapping
        return Permutation(tuple(q[j] for j in self.mapping))

    def __matmul__(self, other: "Permutation") -> "Permutation":
        return self.compose(other)

    def inverse(self) -> "Permutation":
        inv = [0] * self.degree
        for i, j in enumerate(self.mapping):
            inv[j] = i
        return Permutation(tuple(inv))

    def apply(self, v):
        """Reorder *v*; the element landing in slot ``i`` is ``v[mapping[i]]``.

        Objects providing ``reordered(mapping)`` (weight vectors) handle the
        reordering themselves and keep their type.  Strings come back as
        strings, lists as lists, and any other sequence as a tuple.
        """
        if len(v) != self.degree:
            raise ValueError(f"length mismatch: vector has {len(v)} elements, permutation degree {self.degree}")
        reordered = getattr(v, "reordered", None)
        if reordered is not None:
            return reordered(self.mapping)
        if isinstance(v, str):
            return "".join(v[j] for j in self.mapping)
        out = [v[j] for j in self.mapping]
        return out if isinstance(v, list) else tuple(out)

    def __call__(self, v):
        return self.apply(v)

    def power(self, k: int) -> "Permutation":
        if k < 0:
            return self.inverse().power(-k)
        result = Permutation.identity(self.degree)
        base = self
        while k:
            if k & 1:
                result = result.compose(base)
            base = base.compose(base)
            k >>= 1
        return result

    def __pow__(self, k: int) -> "Permutation":
        return self.power(k)

    def cycles(self) -> list[tuple[int, ...]]:
        """Disjoint cycles, fixed points included, each starting at its smallest index."""
        seen = [False] * self.degree
        out = []
        for start in range(self.degree):
            if seen[start]:
                continue
            cyc = []
            i = start
            while not seen[i]:
                seen[i] = True
                cyc.append(i)
                i = self.mapping[i]
            out.append(tuple(cyc))
        return out

    def cycle_type(self) -> list[int]:
        return sorted((len(c) for c in self.cycles()), reverse=True)

    def order(self) -> int:
        return reduce(math.lcm, (len(c) for c in self.cycles()), 1)

    # -- encodings --

    def to_text(self) -> str:
        return f"perm:{self.degree}:" + ",".join(map(str, self.mapping))

    @classmethod
    def from_text(cls, s: str) -> "Permutation":
        parts = s.strip().split(":")
        if len(parts) != 3 or parts[0] != "perm":
            raise ValueError(f"not a permutation encoding: {s!r}")
        n = int(parts[1])
        mapping = tuple(int(x) for x in parts[2].split(",")) if parts[2] else ()
        if len(mapping) != n:
            raise ValueError(f"declared degree {n} but {len(mapping)} indices given")
        return cls(mapping)

    def to_bytes(self) -> bytes:
        return struct.pack(f">H{self.degree}H", self.degree, *self.mapping)

    @classmethod
    def from_bytes(cls, data: bytes) -> "Permutation":
        perm, rest = cls.read_bytes(data)
        if rest:
            raise ValueError(f"{len(rest)} trailing bytes after permutation")
        return perm

    @classmethod
    def read_bytes(cls, data: bytes) -> tuple["Permutation", bytes]:
        """Decode one binary permutation from the front of *data*; return it and the remainder."""
        if len(data) < 2:
            raise ValueError("truncated permutation header")
        (n,) = struct.unpack_from(">H", data)
        end = 2 + 2 * n
        if len(data) < end:
            raise ValueError("truncated permutation body")
        mapping = struct.unpack_from(f">{n}H", data, 2)
        return cls(mapping), data[end:]


# Functional spellings used throughout the package.

def identity(n: int) -> Permutation:
    return Permutation.identity(n)


def random_permutation(n: int, rng: random.Random) -> Permutation:
    return Permutation.random(n, rng)


def compose(p: Permutation, q: Permutation) -> Permutation:
    return p.compose(q)


def inverse(p: Permutation) -> Permutation:
    return p.inverse()


def apply(p: Permutation, v):
    return p.apply(v)


def power(p: Permutation, k: int) -> Permutation:
    return p.power(k)


def order(p: Permutation) -> int:
    return p.order()


def rotation(n: int, shift: int = 1) -> Permutation:
    """Cyclic rotation: ``apply(rotation(n, s), v)[i] == v[(i + s) % n]``."""
    return Permutation(tuple((i + shift) % n for i in range(n)))
