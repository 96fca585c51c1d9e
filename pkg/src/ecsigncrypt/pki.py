"""Key pairs, a minimal in-process certificate authority, and certificate checks.

The CA signs with a Schnorr signature over the protocol curve:
``A = aG, e = H(enc(A) || payload) mod n, z = a + e*w mod n``; a verifier
recomputes ``A' = zG - eW`` and compares challenges.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Optional, Tuple

from .ec import (
    DomainParams,
    Point,
    ValidationReport,
    encode_point,
    point_add,
    point_neg,
    scalar_mul,
    validate_point,
)
from .errors import InvalidPublicKey, InvalidValidityWindow
from .rng import RandomSource, random_scalar, system_rng

Signature = Tuple[int, int]


@dataclass(frozen=True)
class KeyPair:
    id: str
    private: int
    public: Point

    def __repr__(self) -> str:
        return f"KeyPair(id={self.id!r}, public={self.public!r})"


def keypair_from_private(id: str, private: int, params: DomainParams) -> KeyPair:
    if not 1 <= private < params.n:
        raise ValueError("private key out of [1, n-1]")
    return KeyPair(id, private, scalar_mul(private, params.G, params))


def keygen(id: str, params: DomainParams, rng: RandomSource = system_rng) -> KeyPair:
    return keypair_from_private(id, random_scalar(rng, params), params)


def _challenge(A: Point, payload: bytes, params: DomainParams) -> int:
    digest = hashlib.sha256(encode_point(A, params) + payload).digest()
    return int.from_bytes(digest, "big") % params.n


def ca_sign(payload: bytes, ca: KeyPair, params: DomainParams, rng: RandomSource = system_rng) -> Signature:
    a = random_scalar(rng, params)
    e = _challenge(scalar_mul(a, params.G, params), payload, params)
    z = (a + e * ca.private) % params.n
    return e, z


def ca_verify(payload: bytes, sig: Signature, ca_public: Point, params: DomainParams) -> bool:
    try:
        e, z = sig
        if not (isinstance(e, int) and isinstance(z, int) and 0 <= e < params.n and 0 <= z < params.n):
            return False
        if not validate_point(ca_public, params):
            return False
        A = point_add(scalar_mul(z, params.G, params), point_neg(scalar_mul(e, ca_public, params), params), params)
        return _challenge(A, payload, params) == e
    except (TypeError, ValueError):
        return False


def certificate_payload(
    serial: int, subject_id: str, subject_public: Point, not_before: int, not_after: int, params: DomainParams
) -> bytes:
    sid = subject_id.encode("utf-8")
    return (
        serial.to_bytes(8, "big")
        + len(sid).to_bytes(2, "big")
        + sid
        + encode_point(subject_public, params)
        + not_before.to_bytes(8, "big")
        + not_after.to_bytes(8, "big")
    )


@dataclass(frozen=True)
class Certificate:
    serial: int
    subject_id: str
    subject_public: Point
    not_before: int
    not_after: int
    ca_signature: Signature

    def payload(self, params: DomainParams) -> bytes:
        return certificate_payload(
            self.serial, self.subject_id, self.subject_public, self.not_before, self.not_after, params
        )


@dataclass(frozen=True)
class RevocationList:
    """Revoked serials with their revocation times, sorted by serial."""

    entries: Tuple[Tuple[int, int], ...] = ()
    issued_at: int = 0

    def __contains__(self, serial: int) -> bool:
        return any(s == serial for s, _ in self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def revoked_at(self, serial: int) -> Optional[int]:
        for s, t in self.entries:
            if s == serial:
                return t
        return None


def revoke(crl: RevocationList, serial: int, when: int) -> RevocationList:
    if serial in crl:
        return crl
    entries = tuple(sorted(crl.entries + ((serial, when),)))
    return RevocationList(entries, max(crl.issued_at, when))


@dataclass
class CertificateAuthority:
    """Issuing state. Not thread-safe: callers serialize issuance."""

    keypair: KeyPair
    params: DomainParams
    next_serial: int = 1

    @property
    def public(self) -> Point:
        return self.keypair.public

    def issue(
        self,
        subject_id: str,
        subject_public: Point,
        validity: Tuple[int, int],
        rng: RandomSource = system_rng,
        proof_private: Optional[int] = None,
    ) -> Certificate:
        params = self.params
        if not validate_point(subject_public, params):
            raise InvalidPublicKey(f"public key for {subject_id!r} failed validation")
        # possession check stands in for a zero-knowledge proof
        if proof_private is not None and scalar_mul(proof_private, params.G, params) != subject_public:
            raise InvalidPublicKey(f"{subject_id!r} does not hold the private key for this public key")
        t0, t1 = validity
        if not 0 <= t0 < t1:
            raise InvalidValidityWindow(f"not_before {t0} must precede not_after {t1}")
        serial = self.next_serial
        self.next_serial += 1
        payload = certificate_payload(serial, subject_id, subject_public, t0, t1, params)
        return Certificate(serial, subject_id, subject_public, t0, t1, ca_sign(payload, self.keypair, params, rng))


def issue_certificate(
    subject: str,
    subject_public: Point,
    validity: Tuple[int, int],
    ca: CertificateAuthority,
    rng: RandomSource = system_rng,
    proof_private: Optional[int] = None,
) -> Certificate:
    return ca.issue(subject, subject_public, validity, rng=rng, proof_private=proof_private)


def validate_certificate(
    cert: Certificate, ca_public: Point, crl: RevocationList, now: int, params: DomainParams
) -> ValidationReport:
    report = ValidationReport()
    try:
        payload = cert.payload(params)
    except (OverflowError, ValueError, AttributeError) as exc:
        report.add("signature", False, f"unencodable certificate: {exc}")
    else:
        report.add("signature", ca_verify(payload, cert.ca_signature, ca_public, params), "CA signature")
    report.add(
        "expiry",
        cert.not_before <= now <= cert.not_after,
        f"valid {cert.not_before}..{cert.not_after}, now {now}",
    )
    revoked = crl.revoked_at(cert.serial)
    report.add("revocation", revoked is None, "not revoked" if revoked is None else f"revoked at {revoked}")
    pv = validate_point(cert.subject_public, params)
    report.add("public_key", pv.ok, pv.detail or "subject key is a valid curve point")
    return report
