import subprocess
import sys
import time
from pathlib import Path

import pytest

from permauth.cli import main

PY = [sys.executable, "-m", "permauth"]


def run(*args, stdin=None, timeout=60):
    return subprocess.run(PY + list(args), input=stdin, capture_output=True, timeout=timeout)


def test_analyze_params(capsys):
    assert main(["analyze", "params", "--n", "64", "--weight-bits", "24", "--sum-bits", "30"]) == 0
    out = capsys.readouterr().out
    assert "edges=2016" in out and "series_len=10" in out and "birthday_weight_bits=22" in out


def test_analyze_partitions_and_graph(capsys):
    assert main(["analyze", "partitions", "--p", "4", "--q", "2"]) == 0
    assert "count=3" in capsys.readouterr().out
    assert main(["analyze", "graph-prob", "--n", "64", "--x-bits", "30"]) == 0
    assert "graph_exp=-58560.0" in capsys.readouterr().out


def test_usage_errors(capsys):
    assert main(["analyze", "params", "--bogus"]) == 2
    assert "usage" in capsys.readouterr().err
    assert main([]) == 2
    assert main(["attack", "--n", "11"]) == 2


def test_attack_and_collide(capsys):
    assert main(["attack", "--n", "5", "--trials", "3", "--seed", "1"]) == 0
    assert "recovered=3" in capsys.readouterr().out
    assert main(["collide", "--n", "4", "--weight-bits", "2", "--length", "1", "--trials", "200", "--seed", "1"]) == 0
    assert "series_collisions=" in capsys.readouterr().out


def test_keygen_b_deterministic(tmp_path):
    assert run("keygen", "--scheme", "b", "--password-stdin", "--pub", str(tmp_path / "first.pub"),
               stdin=b"swordfish\n").returncode == 0
    pi_file = tmp_path / "first.pub"
    outs = []
    for k in range(2):
        r = run("keygen", "--scheme", "b", "--password-stdin", "--pi-file", str(pi_file),
                "--pub", str(tmp_path / f"b{k}.pub"), stdin=b"swordfish\n")
        assert r.returncode == 0, r.stderr
        outs.append([l for l in (tmp_path / f"b{k}.pub").read_text().splitlines() if l.startswith("alpha.")])
    assert outs[0] == outs[1] and len(outs[0]) == 32
    assert outs[0] == [l for l in pi_file.read_text().splitlines() if l.startswith("alpha.")]


def test_keygen_a_seeded(tmp_path):
    for k in range(2):
        assert main(["keygen", "--scheme", "a", "--n", "16", "--seed", "9",
                     "--pub", str(tmp_path / f"a{k}.pub"), "--sec", str(tmp_path / f"a{k}.sec")]) == 0
    assert (tmp_path / "a0.pub").read_text() == (tmp_path / "a1.pub").read_text()
    assert (tmp_path / "a0.sec").read_text() == (tmp_path / "a1.sec").read_text()


def _serve(tmp_path, pub, *extra):
    port_file = tmp_path / "port"
    log = tmp_path / "session.log"
    proc = subprocess.Popen(PY + ["serve", "--port", "0", "--port-file", str(port_file), "--public-key", str(pub),
                                  "--once", "--log", str(log), *extra],
                            stdout=subprocess.PIPE, stderr=subprocess.PIPE)
    deadline = time.time() + 20
    while not port_file.exists() or not port_file.read_text().strip():
        if time.time() > deadline or proc.poll() is not None:
            proc.kill()
            raise RuntimeError(proc.stderr.read().decode())
        time.sleep(0.05)
    return proc, int(port_file.read_text()), log


def test_end_to_end_scheme_a(tmp_path):
    pub, sec = tmp_path / "a.pub", tmp_path / "a.sec"
    assert main(["keygen", "--scheme", "a", "--n", "64", "--pub", str(pub), "--sec", str(sec)]) == 0
    proc, port, log = _serve(tmp_path, pub, "--rounds", "80")
    prover = run("prove", "--port", str(port), "--public-key", str(pub), "--secret-key", str(sec))
    assert proc.wait(30) == 0
    assert prover.returncode == 0, prover.stderr
    lines = log.read_text().splitlines()
    assert len(lines) == 80 and all(l.endswith("verdict=accept") for l in lines)
    assert run("verify-transcript", "--public-key", str(pub), str(log)).returncode == 0

    mutated = tmp_path / "mutated.log"
    head, resp = lines[10].split("response=")
    hexpart, rest = resp.split(" ", 1)
    lines[10] = f"{head}response={hexpart[:-1]}{'0' if hexpart[-1] != '0' else '1'} {rest}"
    mutated.write_text("\n".join(lines) + "\n")
    r = run("verify-transcript", "--public-key", str(pub), str(mutated))
    assert r.returncode == 1 and b"round 11" in r.stdout

    empty = tmp_path / "empty.log"
    empty.write_text("")
    assert run("verify-transcript", "--public-key", str(pub), str(empty)).returncode == 2


def test_end_to_end_scheme_b_password(tmp_path):
    pub = tmp_path / "b.pub"
    assert run("keygen", "--scheme", "b", "--password-stdin", "--pub", str(pub), stdin=b"opensesame\n").returncode == 0
    proc, port, log = _serve(tmp_path, pub, "--rounds", "33")
    prover = run("prove", "--port", str(port), "--public-key", str(pub), "--password-stdin", stdin=b"opensesame\n")
    assert proc.wait(30) == 0 and prover.returncode == 0, prover.stderr
    assert run("verify-transcript", "--public-key", str(pub), str(log)).returncode == 0
    wrong = run("prove", "--port", str(port), "--public-key", str(pub), "--password-stdin", stdin=b"guess\n")
    assert wrong.returncode == 1


def test_prove_without_server(tmp_path):
    pub, sec = tmp_path / "a.pub", tmp_path / "a.sec"
    main(["keygen", "--scheme", "a", "--n", "8", "--pub", str(pub), "--sec", str(sec)])
    assert main(["prove", "--port", "1", "--public-key", str(pub), "--secret-key", str(sec), "--timeout", "2"]) == 3


def test_scheme_mismatch_exit_3(tmp_path):
    pa, sa, pb = tmp_path / "a.pub", tmp_path / "a.sec", tmp_path / "b.pub"
    main(["keygen", "--scheme", "a", "--n", "8", "--pub", str(pa), "--sec", str(sa)])
    assert run("keygen", "--scheme", "b", "--password-stdin", "--pub", str(pb), stdin=b"x\n").returncode == 0
    proc, port, _ = _serve(tmp_path, pb, "--rounds", "3")
    prover = run("prove", "--port", str(port), "--public-key", str(pa), "--secret-key", str(sa))
    assert prover.returncode == 3
    assert proc.wait(30) == 3
