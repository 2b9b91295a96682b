"""Shared vocabulary types for the gateway.

Everything here is an immutable value, safe to share between concurrent
activities.  Reports are the only values that ever cross the wire from
this module; their textual rendering is the canonical form.
"""

from __future__ import annotations

import enum
import unicodedata
from dataclasses import dataclass

MAX_USERNAME_LEN = 64
GENERATED_SALT_LEN = 16


class Report(enum.Enum):
    """Outcome of an operation: exactly two values, rendered verbatim."""

    SUCCESS = "Success"
    FAILURE = "Failure"


def render_report(r: Report) -> str:
    return r.value


def parse_report(text: str) -> Report:
    for r in Report:
        if r.value == text:
            return r
    raise ValueError(f"not a report: {text!r}")


class Role(enum.Enum):
    """Authorisation role attached to each registered user."""

    END_USER = "EndUser"
    ADMINISTRATOR = "Administrator"


def parse_role(text: str) -> Role:
    for r in Role:
        if r.value == text:
            return r
    raise ValueError(f"not a role: {text!r}")


def valid_user_id(value: str) -> bool:
    """Usernames are non-empty, at most 64 characters, no control characters.

    Equality on usernames is exact string equality; no case folding.
    """
    if not isinstance(value, str) or not value or len(value) > MAX_USERNAME_LEN:
        return False
    for ch in value:
        if unicodedata.category(ch) == "Cc":
            return False
    return True


@dataclass(frozen=True)
class UserId:
    value: str

    def __post_init__(self) -> None:
        if not valid_user_id(self.value):
            raise ValueError(f"invalid username: {self.value!r}")


@dataclass(frozen=True)
class Secret:
    """A cleartext password or other secret byte string; never empty."""

    value: bytes

    def __post_init__(self) -> None:
        if not isinstance(self.value, bytes) or len(self.value) < 1:
            raise ValueError("secret must be at least one byte")


@dataclass(frozen=True)
class Salt:
    """Per-user random bytes mixed into password hashing.

    Salts generated by this system are 16 bytes; stored salts may have any
    length, including zero, which the demo fixture uses.
    """

    value: bytes

    def __post_init__(self) -> None:
        if not isinstance(self.value, bytes):
            raise ValueError("salt must be bytes")


@dataclass(frozen=True)
class Digest:
    """Hash output; hex rendering is lowercase with no separators."""

    value: bytes

    def __post_init__(self) -> None:
        if not isinstance(self.value, bytes) or not self.value:
            raise ValueError("digest must be non-empty bytes")

    def hex(self) -> str:
        return self.value.hex()


def secret_bytes(pwd: bytes | str) -> bytes:
    """Normalise a password-like input to bytes; total over all str/bytes."""
    if isinstance(pwd, bytes):
        return pwd
    return str(pwd).encode("utf-8", "surrogatepass")
