"""Exit criteria for the package, one test per criterion, each at its pinned tolerance."""

import math
import random
import socket
import threading
import time

from permauth import wire
from permauth.adversary import CheatingProverA, CheatingProverB
from permauth.analysis import (brute_force_recover, collision_stats, n_partitions, parameter_report,
                               series_length_required)
from permauth.fingerprint import DiffVector, WeightVector, diff_vector_xor, series
from permauth.net import SocketChannel, VerifierServer
from permauth.perm import Permutation, random_permutation
from permauth.protocol import (ProverA, ProverB, SessionPolicy, Verifier, draw_scheme_b_permutation, keygen_a,
                               keygen_b, run_local_session, run_prover)
from permauth.transcript import format_line, verify_lines


def compositions(p, q):
    if q == 1:
        return 1
    return sum(compositions(p - first, q - 1) for first in range(1, p - q + 2))


def test_counting_exactness(criterion):
    t0 = time.perf_counter()
    ok = n_partitions(4, 2).count == 3 and n_partitions(3, 2).count == 2
    ok &= all(n_partitions(p, q).count == compositions(p, q) for p in range(1, 13) for q in range(1, p + 1))
    dt = time.perf_counter() - t0
    criterion("counting exactness", ok and dt < 1.0, f"N(4,2)=3, N(3,2)=2, oracle p<=12 agrees; {dt:.3f}s")


def test_parameter_reproduction(criterion):
    t0 = time.perf_counter()
    r = parameter_report(64, 24, 30)
    L = series_length_required(300, 30)
    ok = (r.edge_count == 2016 and 295.9 <= r.keyspace_bits <= 296.1 and L == 10 and L * 30 == 300
          and r.birthday_weight_bits == 22)
    dt = time.perf_counter() - t0
    criterion("parameter reproduction", ok and dt < 1.0,
              f"edges={r.edge_count} keyspace_bits={r.keyspace_bits:.3f} (quoted ~300) series_len={L} "
              f"transmitted={L * 30} birthday_bits={r.birthday_weight_bits}; {dt:.3f}s")


def test_big_count_tolerance(criterion):
    t0 = time.perf_counter()
    count = n_partitions(1073741823, 63).count
    bits = count.bit_length()
    ok = count == math.comb(1073741822, 62) and abs(bits - 1600) <= 0.05 * 1600
    dt = time.perf_counter() - t0
    criterion("big-count tolerance", ok and dt < 1.0, f"bit_length={bits} vs quoted 1600 (5% band); {dt:.3f}s")


def test_completeness(criterion):
    rng = random.Random(1001)
    t0 = time.perf_counter()
    kp = keygen_a(64, 8, rng)
    out_a = run_local_session(ProverA(kp, rng), Verifier("A", kp.public, rng), 2000)
    kb = keygen_b(b"completeness", rng)
    out_b = run_local_session(ProverB(kb, rng), Verifier("B", kb.public, rng), 2000)
    dt = time.perf_counter() - t0
    acc_a = sum(t.verdict.accepted for t in out_a.transcripts)
    acc_b = sum(t.verdict.accepted for t in out_b.transcripts)
    indices = {t.series_index for t in out_b.transcripts}
    challenges = {t.challenge for t in out_a.transcripts + out_b.transcripts}
    ok = acc_a == acc_b == 2000 and indices == set(range(1, 33)) and challenges == {0, 1}
    criterion("completeness", ok and dt < 5.0,
              f"A {acc_a}/2000, B {acc_b}/2000, B series indices hit {len(indices)}/32; {dt:.2f}s")


def test_soundness_statistics(criterion):
    rng = random.Random(2002)
    t0 = time.perf_counter()
    kp = keygen_a(64, 8, rng)
    kb = keygen_b(b"soundness", rng)
    rates = {}
    for strategy in ("guess-0", "guess-1"):
        for scheme, prover, pub in (("A", CheatingProverA(kp.public, rng, strategy), kp.public),
                                    ("B", CheatingProverB(kb.public, rng, strategy), kb.public)):
            out = run_local_session(prover, Verifier(scheme, pub, rng), 10_000)
            rates[f"{scheme}/{strategy}"] = sum(t.verdict.accepted for t in out.transcripts) / 10_000
    session_accepts = 0
    for k in range(1000):
        strategy = ("guess-0", "guess-1")[k % 2]
        session_accepts += run_local_session(CheatingProverA(kp.public, rng, strategy),
                                             Verifier("A", kp.public, rng), 20).accepted
        session_accepts += run_local_session(CheatingProverB(kb.public, rng, strategy),
                                             Verifier("B", kb.public, rng), 20).accepted
    dt = time.perf_counter() - t0
    ok = all(0.48 <= r <= 0.52 for r in rates.values()) and session_accepts == 0
    detail = " ".join(f"{k}={v:.4f}" for k, v in rates.items())
    criterion("soundness statistics", ok and dt < 60.0,
              f"{detail}; 20-round cheating sessions accepted {session_accepts}/2000; {dt:.1f}s")


def test_xor_linearity_invariant(criterion):
    rng = random.Random(3003)
    t0 = time.perf_counter()
    linear = telescoped = 0
    for _ in range(1000):
        p = random_permutation(64, rng)
        i = rng.randrange(1, 33)
        pi = p.power(i)
        R = WeightVector.from_bytes(rng.randbytes(64))
        X = WeightVector.from_bytes(rng.randbytes(64))
        linear += diff_vector_xor(pi.apply(R ^ X)) == diff_vector_xor(pi.apply(R)) ^ diff_vector_xor(pi.apply(X))
    for _ in range(1000):
        w = WeightVector.from_bytes(rng.randbytes(rng.randrange(2, 200)))
        telescoped += diff_vector_xor(w).xor_total == 0
    dt = time.perf_counter() - t0
    criterion("xor linearity and telescoping", linear == telescoped == 1000 and dt < 2.0,
              f"linearity {linear}/1000, telescoping {telescoped}/1000; {dt:.2f}s")


def test_scheme_b_keygen_invariant(criterion):
    rng = random.Random(4004)
    orders = []
    same_alpha = True
    for k in range(100):
        kb = keygen_b(f"password-{k}".encode(), rng)
        orders.append(kb.public.pi.order())
        same_alpha &= keygen_b(f"password-{k}".encode(), pi=kb.public.pi).public.alpha == kb.public.alpha
    draws = [draw_scheme_b_permutation(rng)[1] for _ in range(100)]
    ok = min(orders) >= 32 and same_alpha
    criterion("scheme B keygen invariant", ok,
              f"min order {min(orders)} over 100 keys, alpha re-derivable={same_alpha}, "
              f"mean draws {sum(draws) / 100:.2f}")


def test_attack_oracle_validation(criterion):
    rng = random.Random(5005)
    t0 = time.perf_counter()
    hits, sizes = 0, []
    for _ in range(100):
        base = WeightVector.random(6, 24, rng)
        secret = random_permutation(6, rng)
        result = brute_force_recover(base, series(base, secret, 3))
        hits += secret in result
        sizes.append(len(result))
    dt = time.perf_counter() - t0
    criterion("attack oracle validation", hits == 100 and dt < 120.0,
              f"true permutation recovered {hits}/100, mean candidate-set size {sum(sizes) / 100:.2f} "
              f"(min {min(sizes)}, max {max(sizes)}); {dt:.2f}s")


def test_collision_statistics(criterion):
    r = collision_stats(64, 24, 10, 10_000, random.Random(6006))
    criterion("collision statistics", r.series_collisions == 0,
              f"{r.series_collisions} series collisions, {r.single_collisions} single-sum collisions "
              f"in {r.trials} pairs; {r.elapsed:.1f}s")


def _random_message(rng):
    def value():
        kind = rng.randrange(4)
        if kind == 0:
            return rng.getrandbits(64)
        if kind == 1:
            w = rng.choice([8, 16, 24, 32])
            return WeightVector(tuple(rng.getrandbits(w) for _ in range(rng.randrange(2, 70))), w)
        if kind == 2:
            return diff_vector_xor(WeightVector.from_bytes(rng.randbytes(rng.randrange(2, 70))))
        return random_permutation(rng.randrange(1, 70), rng)

    return rng.choice([
        lambda: wire.Hello(rng.choice("AB"), rng.choice(["scalar", "full-vector"]), rng.getrandbits(32)),
        lambda: wire.Commit(value(), rng.randrange(256)),
        lambda: wire.Challenge(rng.getrandbits(1)),
        lambda: wire.Response(value()),
        lambda: wire.RoundResult(rng.getrandbits(32), bool(rng.getrandbits(1))),
        lambda: wire.SessionResult(bool(rng.getrandbits(1)), rng.getrandbits(32)),
        lambda: wire.Abort(rng.choice(list(wire.AbortReason)), "detail" * rng.randrange(3)),
    ])()


def test_wire_robustness(criterion):
    rng = random.Random(7007)
    roundtrip = sum(wire.decode_frame(wire.encode_frame(m)) == m for m in (_random_message(rng) for _ in range(1000)))
    crashes = 0
    for k in range(1000):
        if k % 2:
            data = rng.randbytes(rng.randrange(64))
        else:
            data = bytearray(wire.encode_frame(_random_message(rng)))
            data[rng.randrange(len(data))] = rng.randrange(256)
            data = bytes(data[:rng.randrange(1, len(data) + 1)])
        try:
            wire.decode_frame(data)
        except wire.FrameError:
            pass
        except Exception:  # noqa: BLE001 - anything else is a decoder crash
            crashes += 1

    kp = keygen_a(64, 8, rng)
    policy = SessionPolicy(rounds=80, timeout=10.0)
    logged = []
    server = VerifierServer(("127.0.0.1", 0), lambda: Verifier("A", kp.public, random.Random(8)), policy,
                            on_round=lambda t: logged.append(format_line(t, policy.mode)))
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    try:
        sock = socket.create_connection(server.server_address, timeout=10)
        prover_out = run_prover(ProverA(kp, random.Random(9)), SocketChannel(sock, 10.0))
        sock.close()
        deadline = time.time() + 10
        while not server.outcomes and time.time() < deadline:
            time.sleep(0.01)
    finally:
        server.shutdown()
        server.server_close()
    live = server.outcomes[0]
    offline = verify_lines(kp.public, logged)
    ok = (roundtrip == 1000 and crashes == 0 and live.accepted and prover_out.accepted
          and len(live.transcripts) == 80 and offline.rounds == 80 and offline.accepted == live.accepted)
    criterion("wire robustness", ok,
              f"round-trip {roundtrip}/1000, decoder crashes {crashes}/1000, localhost session "
              f"{sum(t.verdict.accepted for t in live.transcripts)}/80 accepted, offline re-verification "
              f"{'accept' if offline.accepted else 'reject'}")
