"""Line-oriented text key files.

Each file starts with a header line such as ``permauth-a-pub v1``; the
remaining lines are ``name=value`` pairs.  Blank lines and ``#`` comments are
ignored.
"""

from __future__ import annotations

from pathlib import Path

from .fingerprint import DiffVector, Series, WeightVector, XOR_VECTOR
from .perm import Permutation
from .protocol import KeyPairA, PublicKeyA, PublicKeyB

A_PUB = "permauth-a-pub v1"
A_SEC = "permauth-a-sec v1"
B_PUB = "permauth-b-pub v1"
B_SEC = "permauth-b-sec v1"


class KeyFileError(ValueError):
    pass


def parse(text: str) -> tuple[str, dict[str, str]]:
    header = None
    fields: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if header is None:
            header = line
            continue
        if "=" not in line:
            raise KeyFileError(f"line {lineno}: expected name=value")
        k, v = line.split("=", 1)
        k = k.strip()
        if k in fields:
            raise KeyFileError(f"line {lineno}: duplicate field {k!r}")
        fields[k] = v.strip()
    if header is None:
        raise KeyFileError("empty key file")
    return header, fields


def _need(fields, name):
    try:
        return fields[name]
    except KeyError:
        raise KeyFileError(f"missing field {name!r}") from None


def format_public_a(pub: PublicKeyA) -> str:
    return "\n".join([
        A_PUB,
        f"n={pub.n}",
        f"width={pub.width_bits}",
        f"Pi={pub.Pi.to_text()}",
        f"B={pub.B.to_text()}",
        f"C={pub.C.to_text()}",
    ]) + "\n"


def format_secret_a(kp: KeyPairA) -> str:
    return f"{A_SEC}\npi={kp.pi.to_text()}\n"


def format_public_b(pub: PublicKeyB) -> str:
    lines = [B_PUB, f"pi={pub.pi.to_text()}"]
    lines += [f"alpha.{i}={a.to_text()}" for i, a in enumerate(pub.alpha.entries, 1)]
    return "\n".join(lines) + "\n"


def format_secret_b(X: WeightVector) -> str:
    return f"# cached password-derived secret; anyone holding this file can authenticate\n{B_SEC}\nX={X.to_text()}\n"


def _public_a(fields) -> PublicKeyA:
    try:
        pub = PublicKeyA(Permutation.from_text(_need(fields, "Pi")),
                         WeightVector.from_text(_need(fields, "B")),
                         WeightVector.from_text(_need(fields, "C")))
    except KeyFileError:
        raise
    except ValueError as e:
        raise KeyFileError(str(e)) from None
    if "n" in fields and int(fields["n"]) != pub.n:
        raise KeyFileError(f"n={fields['n']} disagrees with the key material (degree {pub.n})")
    if "width" in fields and int(fields["width"]) != pub.width_bits:
        raise KeyFileError(f"width={fields['width']} disagrees with the key material")
    return pub


def _public_b(fields) -> PublicKeyB:
    alphas = []
    i = 1
    while f"alpha.{i}" in fields:
        alphas.append(DiffVector.from_text(fields[f"alpha.{i}"]))
        i += 1
    if not alphas:
        raise KeyFileError("no alpha.* lines")
    try:
        return PublicKeyB(Permutation.from_text(_need(fields, "pi")), Series(XOR_VECTOR, tuple(alphas)))
    except KeyFileError:
        raise
    except ValueError as e:
        raise KeyFileError(str(e)) from None


def loads(text: str):
    """Parse any key file; returns ``PublicKeyA``, ``PublicKeyB``, a secret ``Permutation`` or ``WeightVector``."""
    header, fields = parse(text)
    try:
        if header == A_PUB:
            return _public_a(fields)
        if header == B_PUB:
            return _public_b(fields)
        if header == A_SEC:
            return Permutation.from_text(_need(fields, "pi"))
        if header == B_SEC:
            return WeightVector.from_text(_need(fields, "X"))
    except KeyFileError:
        raise
    except ValueError as e:
        raise KeyFileError(str(e)) from None
    raise KeyFileError(f"unknown key file header {header!r}")


def load(path) -> object:
    return loads(Path(path).read_text())


def load_keypair_a(public_path, secret_path) -> KeyPairA:
    pub, pi = load(public_path), load(secret_path)
    if not isinstance(pub, PublicKeyA) or not isinstance(pi, Permutation):
        raise KeyFileError("expected a scheme A public key and a scheme A secret key")
    if pi.degree != pub.n:
        raise KeyFileError("secret and public key degrees differ")
    return KeyPairA(pi, pub)


def load_permutation(path) -> Permutation:
    """Read a permutation from a bare ``perm:...`` file or from the ``pi=`` line of a scheme B public key."""
    text = Path(path).read_text()
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line.startswith("perm:"):
            return Permutation.from_text(line)
    obj = loads(text)
    if isinstance(obj, PublicKeyB):
        return obj.pi
    if isinstance(obj, Permutation):
        return obj
    raise KeyFileError(f"{path}: no permutation found")
