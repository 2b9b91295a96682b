"""Password hashing schemes and salt generation.

Two schemes are supported behind one interface:

* ``md5-compat`` -- plain MD5 over salt || password, 16-byte output.  MD5
  is cryptographically broken; this scheme exists only so the historical
  demo fixture (unsalted MD5 digests) stays reproducible bit for bit.
* ``strong-kdf`` -- scrypt over the password with the salt as KDF salt,
  32-byte output.  The cost profile (n=2**11, r=8, p=1, 2 MiB) is sized so
  that the ten-thousand-sample distinctness property stays testable on a
  single core; the scheme interface is the extension point for heavier
  profiles.

Each scheme also fixes the plain hash used for audit-chain digests so the
chain's digest width always matches the scheme's output length.
"""

from __future__ import annotations

import hashlib
import os
from dataclasses import dataclass

from .core import GENERATED_SALT_LEN, secret_bytes

_SCRYPT_N = 2**11
_SCRYPT_R = 8
_SCRYPT_P = 1


@dataclass(frozen=True)
class HashScheme:
    """A named, fixed hashing profile; the name is recorded in persistence."""

    name: str
    output_length: int

    def digest(self, salt: bytes, secret: bytes) -> bytes:
        if self.name == "md5-compat":
            return hashlib.md5(salt + secret).digest()
        return hashlib.scrypt(
            secret, salt=salt, n=_SCRYPT_N, r=_SCRYPT_R, p=_SCRYPT_P,
            dklen=self.output_length,
        )

    def hash_bytes(self, data: bytes) -> bytes:
        """Plain (unsalted) hash with this scheme's output length."""
        if self.name == "md5-compat":
            return hashlib.md5(data).digest()
        return hashlib.sha256(data).digest()


MD5_COMPAT = HashScheme("md5-compat", 16)
STRONG_KDF = HashScheme("strong-kdf", 32)

SCHEMES = {s.name: s for s in (MD5_COMPAT, STRONG_KDF)}
DEFAULT_SCHEME = STRONG_KDF


def scheme_by_name(name: str) -> HashScheme:
    try:
        return SCHEMES[name]
    except KeyError:
        raise ValueError(f"unknown hash scheme: {name!r}") from None


def encrypt(scheme: HashScheme, salt: bytes, secret: bytes | str) -> bytes:
    """Hash a salted secret; deterministic and total.

    The salt is prepended: md5-compat hashes the byte concatenation
    salt || secret, and strong-kdf feeds the salt to the KDF directly.
    """
    return scheme.digest(salt, secret_bytes(secret))


def generate_salt() -> bytes:
    """16 uniformly random bytes from the OS entropy source."""
    return os.urandom(GENERATED_SALT_LEN)
