"""Certificate repository: long-lived project certificates and issued proxies.

Certificates are minimal self-describing records carrying an Ed25519
public key and a real signature over a canonical byte encoding; they are
deliberately not X.509/DER.  The repository keeps, for each project
certificate, its private key and project association, and for each issued
proxy its private key, signer, and the user it is attributed to, so every
proxy in existence can be traced back to a responsible user.

Like the credential table, the repository is a value: operations return a
new repository and a report, and a ``Failure`` returns the input object
unchanged.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field, replace
from typing import Mapping

from cryptography.exceptions import InvalidSignature
from cryptography.hazmat.primitives.asymmetric.ed25519 import (
    Ed25519PrivateKey,
    Ed25519PublicKey,
)

from .canon import canonical_json
from .core import Report, valid_user_id

MAX_PROXY_LIFETIME = 86400
SIG_ALG = "ed25519"

_KEY_PAIR_CHALLENGE = b"acd key pair check v1"


def generate_key_pair() -> tuple[bytes, bytes]:
    """Fresh Ed25519 key pair as (public, private) raw 32-byte strings."""
    priv = Ed25519PrivateKey.generate()
    pub = priv.public_key()
    return pub.public_bytes_raw(), priv.private_bytes_raw()


def sign(private_key: bytes, message: bytes) -> bytes:
    return Ed25519PrivateKey.from_private_bytes(private_key).sign(message)


def verify(public_key: bytes, message: bytes, signature: bytes) -> bool:
    try:
        Ed25519PublicKey.from_public_bytes(public_key).verify(signature, message)
        return True
    except (InvalidSignature, ValueError, TypeError):
        return False


def valid_pki_key_pair(public_key, private_key) -> bool:
    """True iff the private key signs a challenge the public key verifies.

    Malformed key encodings yield False, never an exception.
    """
    try:
        signature = sign(private_key, _KEY_PAIR_CHALLENGE)
    except (ValueError, TypeError):
        return False
    if not isinstance(public_key, bytes):
        return False
    return verify(public_key, _KEY_PAIR_CHALLENGE, signature)


@dataclass(frozen=True)
class Certificate:
    serial: int
    subject: str
    issuer: str
    public_key: bytes
    sig_alg: str
    not_before: int
    not_after: int
    is_proxy: bool
    signature: bytes

    def to_be_signed(self) -> bytes:
        fields = {
            "serial": self.serial,
            "subject": self.subject,
            "issuer": self.issuer,
            "public_key": self.public_key.hex(),
            "sig_alg": self.sig_alg,
            "not_before": self.not_before,
            "not_after": self.not_after,
            "is_proxy": self.is_proxy,
        }
        return canonical_json(fields).encode("ascii")

    def to_dict(self) -> dict:
        return {
            "serial": self.serial,
            "subject": self.subject,
            "issuer": self.issuer,
            "public_key": self.public_key.hex(),
            "sig_alg": self.sig_alg,
            "not_before": self.not_before,
            "not_after": self.not_after,
            "is_proxy": self.is_proxy,
            "signature": self.signature.hex(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Certificate":
        return cls(
            serial=int(data["serial"]),
            subject=str(data["subject"]),
            issuer=str(data["issuer"]),
            public_key=bytes.fromhex(data["public_key"]),
            sig_alg=str(data["sig_alg"]),
            not_before=int(data["not_before"]),
            not_after=int(data["not_after"]),
            is_proxy=bool(data["is_proxy"]),
            signature=bytes.fromhex(data["signature"]),
        )

    def signature_valid_under(self, signer_public_key: bytes) -> bool:
        return verify(signer_public_key, self.to_be_signed(), self.signature)


def make_self_signed(
    subject: str,
    ca_name: str,
    lifetime_seconds: int,
    *,
    serial: int = 1,
    now: int | None = None,
) -> tuple[Certificate, bytes]:
    """Build a self-signed project certificate; returns (cert, private key)."""
    now = int(time.time()) if now is None else int(now)
    public, private = generate_key_pair()
    cert = Certificate(
        serial=serial,
        subject=subject,
        issuer=ca_name,
        public_key=public,
        sig_alg=SIG_ALG,
        not_before=now,
        not_after=now + int(lifetime_seconds),
        is_proxy=False,
        signature=b"",
    )
    cert = replace(cert, signature=sign(private, cert.to_be_signed()))
    return cert, private


@dataclass(frozen=True)
class ProxyHandle:
    """Public view of a freshly issued proxy."""

    serial: int
    certificate: Certificate


@dataclass(frozen=True)
class CertificateRepository:
    certificates: Mapping[int, Certificate] = field(default_factory=dict)
    proxy_certificates: Mapping[int, Certificate] = field(default_factory=dict)
    project_names: frozenset[str] = frozenset()
    resource_names: frozenset[str] = frozenset()
    key_association: Mapping[int, bytes] = field(default_factory=dict)
    cert_association: Mapping[str, int] = field(default_factory=dict)
    issued_proxies: Mapping[int, int] = field(default_factory=dict)
    proxy_issuer: Mapping[int, int] = field(default_factory=dict)
    proxy_secret_key: Mapping[int, bytes] = field(default_factory=dict)
    user_proxy: Mapping[int, str] = field(default_factory=dict)
    serial_counter: int = 1

    def validate(self) -> None:
        """Raise ValueError naming the first violated repository invariant."""
        for serial, cert in self.certificates.items():
            if cert.serial != serial or cert.is_proxy:
                raise ValueError(f"certificate set malformed at serial {serial}")
            if serial not in self.key_association:
                raise ValueError(
                    f"certificate {serial} has no associated private key"
                )
        for serial in self.cert_association.values():
            if serial not in self.key_association:
                raise ValueError(
                    f"certificate association targets unknown key {serial}"
                )
        known_names = self.project_names | self.resource_names
        for name in self.cert_association:
            if name not in known_names:
                raise ValueError(f"association name {name!r} is not registered")
        for serial, cert in self.proxy_certificates.items():
            if cert.serial != serial or not cert.is_proxy:
                raise ValueError(f"proxy set malformed at serial {serial}")
            if serial not in self.proxy_secret_key:
                raise ValueError(f"proxy {serial} has no secret key")
        domains = {
            "proxy_secret_key": set(self.proxy_secret_key),
            "proxy_issuer": set(self.proxy_issuer),
            "user_proxy": set(self.user_proxy),
            "issued_proxies": set(self.issued_proxies),
        }
        expected = set(self.proxy_certificates)
        for name, dom in domains.items():
            if dom != expected:
                raise ValueError(f"{name} domain does not match the proxy set")
        for serial, issuer_serial in self.proxy_issuer.items():
            if issuer_serial not in self.certificates:
                raise ValueError(
                    f"proxy {serial} names signer {issuer_serial}, not held"
                )
        all_serials = list(self.certificates) + list(self.proxy_certificates)
        if len(all_serials) != len(set(all_serials)):
            raise ValueError("serial numbers are not unique")
        for cert in list(self.certificates.values()) + list(
            self.proxy_certificates.values()
        ):
            if not cert.not_before < cert.not_after:
                raise ValueError(f"certificate {cert.serial} validity is empty")

    def _next_serial(self) -> int:
        highest = max(
            [self.serial_counter - 1, *self.certificates, *self.proxy_certificates,
             *self.key_association, *self.proxy_secret_key],
            default=0,
        )
        return highest + 1


def empty_repository() -> CertificateRepository:
    return CertificateRepository()


def add_certificate(
    repo: CertificateRepository,
    cert: Certificate,
    secret_key,
    project: str,
) -> tuple[CertificateRepository, Report]:
    """Store a project certificate with its private key.

    Fails if the certificate (or its serial) is already held, the key pair
    does not match, the validity window is empty, or the project name is
    unusable.  The project name is registered implicitly.
    """
    if not isinstance(cert, Certificate) or cert.is_proxy:
        return repo, Report.FAILURE
    if not isinstance(project, str) or not project or "\n" in project:
        return repo, Report.FAILURE
    if not isinstance(cert.serial, int) or cert.serial < 0:
        return repo, Report.FAILURE
    if cert.serial in repo.certificates or cert.serial in repo.proxy_certificates:
        return repo, Report.FAILURE
    if cert.serial in repo.key_association or cert.serial in repo.proxy_secret_key:
        return repo, Report.FAILURE
    if not cert.not_before < cert.not_after:
        return repo, Report.FAILURE
    if not valid_pki_key_pair(cert.public_key, secret_key):
        return repo, Report.FAILURE
    certificates = dict(repo.certificates)
    certificates[cert.serial] = cert
    key_association = dict(repo.key_association)
    key_association[cert.serial] = secret_key
    cert_association = dict(repo.cert_association)
    cert_association[project] = cert.serial
    return (
        replace(
            repo,
            certificates=certificates,
            key_association=key_association,
            cert_association=cert_association,
            project_names=repo.project_names | {project},
        ),
        Report.SUCCESS,
    )


def remove_certificate(
    repo: CertificateRepository, cert: Certificate
) -> tuple[CertificateRepository, Report]:
    """Drop a held certificate, its key, its project associations, and any
    live proxies it issued."""
    if not isinstance(cert, Certificate):
        return repo, Report.FAILURE
    if repo.certificates.get(cert.serial) != cert:
        return repo, Report.FAILURE
    certificates = {s: c for s, c in repo.certificates.items() if s != cert.serial}
    key_association = {
        s: k for s, k in repo.key_association.items() if s != cert.serial
    }
    cert_association = {
        name: s for name, s in repo.cert_association.items() if s != cert.serial
    }
    new = replace(
        repo,
        certificates=certificates,
        key_association=key_association,
        cert_association=cert_association,
    )
    # Cascade: a proxy whose signer is gone would dangle.
    for serial, issuer_serial in list(repo.proxy_issuer.items()):
        if issuer_serial == cert.serial:
            new, _ = revoke_proxy(new, serial)
    return new, Report.SUCCESS


def create_proxy(
    repo: CertificateRepository,
    user: str,
    project: str,
    lifetime_seconds,
    *,
    now: int | None = None,
) -> tuple[CertificateRepository, ProxyHandle | Report]:
    """Issue a short-lived proxy certificate under a project's certificate.

    The proxy gets a fresh key pair and serial, a subject derived from the
    issuer's, and a lifetime capped at one day; it is signed by the project
    certificate's private key and attributed to ``user``.
    """
    now = int(time.time()) if now is None else int(now)
    if not isinstance(user, str) or not valid_user_id(user):
        return repo, Report.FAILURE
    if not isinstance(lifetime_seconds, int) or lifetime_seconds <= 0:
        return repo, Report.FAILURE
    issuer_serial = repo.cert_association.get(project) if isinstance(project, str) else None
    if issuer_serial is None:
        return repo, Report.FAILURE
    issuer = repo.certificates.get(issuer_serial)
    if issuer is None:
        return repo, Report.FAILURE
    if not issuer.not_before <= now < issuer.not_after:
        return repo, Report.FAILURE
    lifetime = min(lifetime_seconds, MAX_PROXY_LIFETIME)
    serial = repo._next_serial()
    public, private = generate_key_pair()
    proxy = Certificate(
        serial=serial,
        subject=issuer.subject + "/CN=proxy",
        issuer=issuer.subject,
        public_key=public,
        sig_alg=SIG_ALG,
        not_before=now,
        not_after=now + lifetime,
        is_proxy=True,
        signature=b"",
    )
    proxy = replace(
        proxy, signature=sign(repo.key_association[issuer_serial], proxy.to_be_signed())
    )
    proxy_certificates = dict(repo.proxy_certificates)
    proxy_certificates[serial] = proxy
    new = replace(
        repo,
        proxy_certificates=proxy_certificates,
        proxy_secret_key={**repo.proxy_secret_key, serial: private},
        proxy_issuer={**repo.proxy_issuer, serial: issuer_serial},
        issued_proxies={**repo.issued_proxies, serial: issuer_serial},
        user_proxy={**repo.user_proxy, serial: user},
        serial_counter=serial + 1,
    )
    return new, ProxyHandle(serial, proxy)


def revoke_proxy(
    repo: CertificateRepository, serial
) -> tuple[CertificateRepository, Report]:
    """Remove a live proxy and all bookkeeping attached to its serial."""
    if not isinstance(serial, int) or serial not in repo.proxy_certificates:
        return repo, Report.FAILURE
    new = replace(
        repo,
        proxy_certificates={
            s: c for s, c in repo.proxy_certificates.items() if s != serial
        },
        proxy_secret_key={
            s: k for s, k in repo.proxy_secret_key.items() if s != serial
        },
        proxy_issuer={s: i for s, i in repo.proxy_issuer.items() if s != serial},
        issued_proxies={s: i for s, i in repo.issued_proxies.items() if s != serial},
        user_proxy={s: u for s, u in repo.user_proxy.items() if s != serial},
    )
    return new, Report.SUCCESS
