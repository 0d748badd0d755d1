"""Command-line entry point: ``permauth <subcommand> ...``.

Exit codes: 0 accept/success, 1 reject, 2 usage error, 3 transport failure or abort.
"""

from __future__ import annotations

import argparse
import getpass
import logging
import random
import sys
import threading
from pathlib import Path

from . import analysis, keyfile
from .fingerprint import INT_SUM, KINDS, WeightVector, series
from .net import VerifierServer, connect
from .perm import Permutation, make_rng
from .protocol import (EXIT_ABORT, EXIT_ACCEPT, EXIT_REJECT, EXIT_USAGE, MODES, SCALAR, KeyPairA,
                       KeyPairB, ProverA, ProverB, PublicKeyA, PublicKeyB, SessionPolicy, Verifier,
                       alpha_series, derive_secret_b, keygen_a, keygen_b, run_prover)
from .transcript import TranscriptLog, verify_log

log = logging.getLogger("permauth")


class UsageError(Exception):
    pass


def _print_rows(rows, out=None):
    out = out or sys.stdout
    width = max(len(f"{k}={v}") for k, v, _ in rows)
    for k, v, note in rows:
        cell = f"{k}={v}"
        print(f"{cell:<{width}}  # {note}" if note else cell, file=out)


def _read_password(args) -> bytes:
    if args.password_stdin:
        pw = sys.stdin.buffer.readline().rstrip(b"\r\n")
    else:
        pw = getpass.getpass("password: ").encode("utf-8")
    if not pw:
        raise UsageError("empty password")
    return pw


def _write(path, text):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


# -- subcommands -------------------------------------------------------------

def cmd_keygen(args) -> int:
    rng = make_rng(args.seed)
    if args.scheme == "a":
        kp = keygen_a(args.n, args.width, rng)
        _write(args.pub, keyfile.format_public_a(kp.public))
        if args.sec is None:
            raise UsageError("scheme A keygen needs --sec for the secret key file")
        _write(args.sec, keyfile.format_secret_a(kp))
        return EXIT_ACCEPT
    pi = keyfile.load_permutation(args.pi_file) if args.pi_file else None
    kp = keygen_b(_read_password(args), rng, pi)
    _write(args.pub, keyfile.format_public_b(kp.public))
    if args.cache_secret:
        _write(args.cache_secret, keyfile.format_secret_b(kp.X))
    return EXIT_ACCEPT


def _load_public(path):
    pub = keyfile.load(path)
    if not isinstance(pub, (PublicKeyA, PublicKeyB)):
        raise UsageError(f"{path} is not a public key file")
    return pub


def cmd_serve(args) -> int:
    pub = _load_public(args.public_key)
    scheme = "A" if isinstance(pub, PublicKeyA) else "B"
    policy = SessionPolicy(args.rounds, args.mode, args.timeout, args.seed)
    base_rng = make_rng(args.seed)
    lock = threading.Lock()

    def make_verifier():
        # a seeded run derives one sub-seed per session; otherwise challenges come from the OS
        if isinstance(base_rng, random.SystemRandom):
            return Verifier(scheme, pub, base_rng, policy.mode)
        with lock:
            rng = random.Random(base_rng.getrandbits(64))
        return Verifier(scheme, pub, rng, policy.mode)

    tlog = TranscriptLog(args.log, policy.mode) if args.log else None
    done = threading.Event()
    outcomes = []

    def on_session(outcome):
        outcomes.append(outcome)
        if args.once:
            done.set()

    server = VerifierServer((args.host, args.port), make_verifier, policy,
                            on_round=tlog.write if tlog else None, on_session=on_session)
    host, port = server.server_address[:2]
    if args.port_file:
        Path(args.port_file).write_text(f"{port}\n")
    print(f"listening on {host}:{port} scheme={scheme} rounds={policy.rounds} mode={policy.mode}",
          file=sys.stderr, flush=True)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    try:
        if args.once:
            done.wait()
        else:
            thread.join()
    except KeyboardInterrupt:
        pass
    finally:
        server.shutdown()
        server.server_close()
        if tlog:
            tlog.close()
    if not outcomes:
        return EXIT_ABORT
    last = outcomes[-1]
    print(f"session: {'aborted' if last.aborted else ('accept' if last.accepted else 'reject')} "
          f"({sum(t.verdict.accepted for t in last.transcripts)}/{len(last.transcripts)} rounds accepted)"
          + (f" {last.reason}" if last.reason else ""), file=sys.stderr)
    return last.exit_code


def cmd_prove(args) -> int:
    pub = _load_public(args.public_key)
    rng = make_rng(args.seed)
    if isinstance(pub, PublicKeyA):
        if not args.secret_key:
            raise UsageError("scheme A needs --secret-key")
        pi = keyfile.load(args.secret_key)
        if not isinstance(pi, Permutation) or pi.degree != pub.n:
            raise UsageError(f"{args.secret_key} is not a matching scheme A secret key")
        prover = ProverA(KeyPairA(pi, pub), rng)
    else:
        if args.secret_key:
            X = keyfile.load(args.secret_key)
            if not isinstance(X, WeightVector):
                raise UsageError(f"{args.secret_key} is not a scheme B secret file")
        else:
            X = derive_secret_b(_read_password(args))
        kp = KeyPairB(X, pub)
        if _alpha_mismatch(kp):
            print("password does not match the public key", file=sys.stderr)
            return EXIT_REJECT
        prover = ProverB(kp, rng)
    channel = connect(args.host, args.port, args.timeout)
    try:
        outcome = run_prover(prover, channel)
    finally:
        channel.close()
    state = "aborted" if outcome.aborted else ("accept" if outcome.accepted else "reject")
    print(f"session: {state} ({sum(r.accepted for r in outcome.transcripts)}/{len(outcome.transcripts)} rounds accepted)"
          + (f" {outcome.reason}" if outcome.reason else ""), file=sys.stderr)
    return outcome.exit_code


def _alpha_mismatch(kp: KeyPairB) -> bool:
    expect = alpha_series(kp.public.pi, kp.X, kp.public.length)
    return [a.elements for a in expect.entries] != [a.elements for a in kp.public.alpha.entries]


def cmd_verify_transcript(args) -> int:
    pub = _load_public(args.public_key)
    check = verify_log(pub, args.log)
    if check.rounds == 0:
        print(f"{args.log}: no rounds", file=sys.stderr)
        return EXIT_USAGE
    for r, reason in check.failing:
        print(f"round {r}: reject ({reason})")
    print(f"{check.rounds - len(check.failing)}/{check.rounds} rounds accepted")
    return EXIT_ACCEPT if check.accepted else EXIT_REJECT


def cmd_analyze(args) -> int:
    if args.what == "params":
        _print_rows(analysis.parameter_report(args.n, args.weight_bits, args.sum_bits).rows())
    elif args.what == "partitions":
        pc = analysis.n_partitions(args.p, args.q)
        _print_rows([("p", pc.p, ""), ("q", pc.q, ""), ("count", pc.count, "C(p-1, q-1)"),
                     ("bit_length", pc.bit_length, "")])
    else:
        _print_rows(analysis.graph_probability_report(args.n, args.x_bits).rows())
    return EXIT_ACCEPT


def cmd_attack(args) -> int:
    if args.n > analysis.BRUTE_FORCE_MAX_DEGREE:
        raise UsageError(f"--n {args.n} exceeds the brute-force bound {analysis.BRUTE_FORCE_MAX_DEGREE}")
    rng = make_rng(args.seed)
    hits, sizes = 0, []
    for _ in range(args.trials):
        base = WeightVector.random(args.n, args.weight_bits, rng)
        secret = Permutation.random(args.n, rng)
        result = analysis.brute_force_recover(base, series(base, secret, args.length, args.kind))
        hits += secret in result
        sizes.append(len(result))
    _print_rows([
        ("n", args.n, ""), ("weight_bits", args.weight_bits, ""), ("series_len", args.length, ""),
        ("trials", args.trials, ""), ("recovered", hits, "true permutation among candidates"),
        ("mean_candidates", f"{sum(sizes) / len(sizes):.3f}", ""),
        ("max_candidates", max(sizes), ""),
    ])
    return EXIT_ACCEPT if hits == args.trials else EXIT_REJECT


def cmd_collide(args) -> int:
    report = analysis.collision_stats(args.n, args.weight_bits, args.length, args.trials, make_rng(args.seed))
    _print_rows(report.rows())
    return EXIT_ACCEPT


# -- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="permauth", description="Permutation-based identification protocols.")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("keygen", help="generate a key pair")
    p.add_argument("--scheme", choices=("a", "b"), required=True)
    p.add_argument("--n", type=int, default=64, help="degree (scheme A)")
    p.add_argument("--width", type=int, default=8, choices=(8, 16, 24, 32), help="weight width (scheme A)")
    p.add_argument("--pub", help="public key output file (default stdout)")
    p.add_argument("--sec", help="secret key output file (scheme A)")
    p.add_argument("--password-stdin", action="store_true", help="read the password from stdin (scheme B)")
    p.add_argument("--pi-file", help="reuse a published permutation (scheme B)")
    p.add_argument("--cache-secret", metavar="FILE", help="also write the derived secret X (scheme B)")
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_keygen)

    p = sub.add_parser("serve", help="run a verifier on host:port")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=7421)
    p.add_argument("--public-key", required=True)
    p.add_argument("--rounds", type=int, default=80)
    p.add_argument("--mode", choices=MODES, default=SCALAR)
    p.add_argument("--timeout", type=float, default=30.0)
    p.add_argument("--log", help="append round transcripts to this file")
    p.add_argument("--once", action="store_true", help="exit after one session with its verdict")
    p.add_argument("--port-file", help="write the bound port here (useful with --port 0)")
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("prove", help="authenticate against a verifier")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=7421)
    p.add_argument("--public-key", required=True)
    p.add_argument("--secret-key", help="scheme A secret file, or a cached scheme B secret")
    p.add_argument("--password-stdin", action="store_true")
    p.add_argument("--timeout", type=float, default=30.0)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_prove)

    p = sub.add_parser("verify-transcript", help="re-check a logged session offline")
    p.add_argument("--public-key", required=True)
    p.add_argument("log")
    p.set_defaults(func=cmd_verify_transcript)

    p = sub.add_parser("analyze", help="counting formulas and parameter sizing")
    asub = p.add_subparsers(dest="what", required=True)
    q = asub.add_parser("params")
    q.add_argument("--n", type=int, default=64)
    q.add_argument("--weight-bits", type=int, default=24)
    q.add_argument("--sum-bits", type=int, default=30)
    q = asub.add_parser("partitions")
    q.add_argument("--p", type=int, required=True)
    q.add_argument("--q", type=int, required=True)
    q = asub.add_parser("graph-prob")
    q.add_argument("--n", type=int, default=64)
    q.add_argument("--x-bits", type=int, default=30)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("attack", help="brute-force recovery of a permutation from its series")
    p.add_argument("--n", type=int, default=6)
    p.add_argument("--weight-bits", type=int, default=24, choices=(8, 16, 24, 32))
    p.add_argument("--length", type=int, default=3)
    p.add_argument("--kind", choices=KINDS, default=INT_SUM)
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_attack)

    p = sub.add_parser("collide", help="series collision statistics")
    p.add_argument("--n", type=int, default=64)
    p.add_argument("--weight-bits", type=int, default=24)
    p.add_argument("--length", type=int, default=10)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_collide)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (UsageError, keyfile.KeyFileError, ValueError) as e:
        print(f"permauth: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (ConnectionError, TimeoutError, OSError) as e:
        print(f"permauth: transport failure: {e}", file=sys.stderr)
        return EXIT_ABORT


if __name__ == "__main__":
    sys.exit(main())
