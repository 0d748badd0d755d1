"""Permutation-based identification: secret permutations, public byte vectors and difference-sum fingerprints."""

from .perm import Permutation, make_rng
from .fingerprint import (DiffVector, Series, WeightVector, diff_sum, diff_vector_xor, matrix_fingerprint,
                          series, string_fingerprint)
from .protocol import (KeyPairA, KeyPairB, ProverA, ProverB, PublicKeyA, PublicKeyB, RoundTranscript,
                       SessionPolicy, Verifier, keygen_a, keygen_b, run_local_session)

__version__ = "0.1.0"

__all__ = [
    "Permutation", "make_rng",
    "WeightVector", "DiffVector", "Series", "diff_sum", "diff_vector_xor", "matrix_fingerprint", "series",
    "string_fingerprint",
    "KeyPairA", "KeyPairB", "ProverA", "ProverB", "PublicKeyA", "PublicKeyB", "RoundTranscript",
    "SessionPolicy", "Verifier", "keygen_a", "keygen_b", "run_local_session",
]
