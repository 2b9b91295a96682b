"""Local authentication: the credential table and its operations.

The table maps each registered username to a salted password digest and a
role.  All operations are total: every input, however malformed, yields a
``Success``/``Failure`` outcome, and a ``Failure`` never changes the table
(operations return the input table object unchanged).  Tables are values;
mutating operations return a new table.

Failure reasons are kept as an internal ``detail`` and must never reach
the wire: a login failure looks the same for an unknown username and a
wrong password, and the digest comparison is constant-time, so the
service cannot be used to probe which usernames exist.
"""

from __future__ import annotations

import enum
import hmac
from dataclasses import dataclass
from typing import Mapping

from .core import Report, Role, secret_bytes, valid_user_id
from .hashing import MD5_COMPAT, HashScheme, encrypt, generate_salt

_DUMMY_SALT = bytes(16)


class Detail(enum.Enum):
    """Internal failure classification; only the Report is ever exposed."""

    OK = "Ok"
    INVALID_CREDENTIAL = "InvalidCredential"
    USER_ID_NOT_IN_USE = "UserIDNotInUse"
    USER_ID_IN_USE = "UserIDInUse"


@dataclass(frozen=True)
class AuthOutcome:
    report: Report
    detail: Detail

    def __post_init__(self) -> None:
        if (self.report is Report.SUCCESS) != (self.detail is Detail.OK):
            raise ValueError("report and detail disagree")


_OK = AuthOutcome(Report.SUCCESS, Detail.OK)
_INVALID = AuthOutcome(Report.FAILURE, Detail.INVALID_CREDENTIAL)
_UNKNOWN = AuthOutcome(Report.FAILURE, Detail.USER_ID_NOT_IN_USE)
_IN_USE = AuthOutcome(Report.FAILURE, Detail.USER_ID_IN_USE)


@dataclass(frozen=True)
class Entry:
    digest: bytes
    salt: bytes
    role: Role


@dataclass(frozen=True)
class CredentialTable:
    """Registered users with their salted digests; a plain immutable value."""

    scheme: HashScheme
    entries: Mapping[str, Entry]

    @property
    def registered_users(self) -> frozenset[str]:
        return frozenset(self.entries)

    def role_of(self, username: str) -> Role | None:
        entry = self.entries.get(username)
        return entry.role if entry else None

    def validate(self) -> None:
        """Raise ValueError naming the first violated table invariant."""
        for username, entry in self.entries.items():
            if not valid_user_id(username):
                raise ValueError(f"invalid username in table: {username!r}")
            if len(entry.digest) != self.scheme.output_length:
                raise ValueError(
                    "digest length invariant violated: user "
                    f"{username!r} has {len(entry.digest)} bytes, scheme "
                    f"{self.scheme.name!r} requires {self.scheme.output_length}"
                )
            if not isinstance(entry.salt, bytes):
                raise ValueError(f"salt invariant violated for {username!r}")

    def _with(self, username: str, entry: Entry) -> "CredentialTable":
        new = dict(self.entries)
        new[username] = entry
        return CredentialTable(self.scheme, new)

    def _without(self, username: str) -> "CredentialTable":
        new = dict(self.entries)
        del new[username]
        return CredentialTable(self.scheme, new)


def empty_table(scheme: HashScheme) -> CredentialTable:
    return CredentialTable(scheme, {})


def _check_password(table: CredentialTable, username, pwd) -> AuthOutcome:
    """Constant-time credential check shared by login and change_password.

    Unknown and malformed usernames hash a dummy entry so that timing does
    not reveal whether the username exists.
    """
    secret = secret_bytes(pwd)
    if isinstance(username, str) and username in table.entries:
        entry = table.entries[username]
        computed = encrypt(table.scheme, entry.salt, secret)
        if hmac.compare_digest(computed, entry.digest):
            return _OK
        return _INVALID
    computed = encrypt(table.scheme, _DUMMY_SALT, secret)
    hmac.compare_digest(computed, bytes(table.scheme.output_length))
    return _UNKNOWN


def login(table: CredentialTable, username, pwd) -> AuthOutcome:
    """Check a username/password pair; never modifies the table."""
    return _check_password(table, username, pwd)


def change_password(
    table: CredentialTable, username, oldpwd, newpwd
) -> tuple[CredentialTable, AuthOutcome]:
    """Replace a user's password after verifying the old one.

    A fresh salt is generated internally; callers never supply salts.
    """
    outcome = _check_password(table, username, oldpwd)
    if outcome.report is not Report.SUCCESS:
        return table, outcome
    new_secret = secret_bytes(newpwd)
    if not new_secret:
        return table, _INVALID
    salt = generate_salt()
    entry = table.entries[username]
    updated = Entry(encrypt(table.scheme, salt, new_secret), salt, entry.role)
    return table._with(username, updated), _OK


def add_credential(
    table: CredentialTable, username, pwd, role: Role
) -> tuple[CredentialTable, AuthOutcome]:
    """Register a new user; fails if the username is already in use."""
    if not isinstance(username, str) or not valid_user_id(username):
        return table, _INVALID
    if username in table.entries:
        return table, _IN_USE
    secret = secret_bytes(pwd)
    if not secret or not isinstance(role, Role):
        return table, _INVALID
    salt = generate_salt()
    entry = Entry(encrypt(table.scheme, salt, secret), salt, role)
    return table._with(username, entry), _OK


def remove_credential(table: CredentialTable, username) -> tuple[CredentialTable, AuthOutcome]:
    """Delete a user's entry; fails if the username is not registered."""
    if not isinstance(username, str) or username not in table.entries:
        return table, _UNKNOWN
    return table._without(username), _OK


def reset_password(
    table: CredentialTable, username, newpwd
) -> tuple[CredentialTable, AuthOutcome]:
    """Set a new password without knowing the old one (administrative)."""
    if not isinstance(username, str) or username not in table.entries:
        return table, _UNKNOWN
    secret = secret_bytes(newpwd)
    if not secret:
        return table, _INVALID
    salt = generate_salt()
    entry = table.entries[username]
    updated = Entry(encrypt(table.scheme, salt, secret), salt, entry.role)
    return table._with(username, updated), _OK


#: Demo passwords matching the fixture digests below.
FIXTURE_PASSWORDS = {"ali": "pwdx", "mark": "mrk3000", "john": "wnd1980"}
FIXTURE_ADMIN = "root"
FIXTURE_ADMIN_PASSWORD = "rootpw"


def paper_init() -> CredentialTable:
    """The three-user demo table: unsalted MD5 digests, end users only.

    The third digest is stored as the full 32-digit MD5 of "wnd1980"; the
    demo table this fixture mirrors prints only 31 digits for it, so the
    recomputed value is authoritative here.
    """
    entries = {
        user: Entry(encrypt(MD5_COMPAT, b"", pwd), b"", Role.END_USER)
        for user, pwd in FIXTURE_PASSWORDS.items()
    }
    return CredentialTable(MD5_COMPAT, entries)


def init_fixture() -> CredentialTable:
    """The demo table plus one administrator, so role-gated operations
    are exercisable out of the box."""
    table = paper_init()
    table, outcome = add_credential(
        table, FIXTURE_ADMIN, FIXTURE_ADMIN_PASSWORD, Role.ADMINISTRATOR
    )
    assert outcome.report is Report.SUCCESS
    # The admin entry gets a real random salt; the three demo entries keep
    # their historical empty salts.
    return table
