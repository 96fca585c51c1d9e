"""Timestamped (replay-resistant) and directly public-verifiable modes."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable, Optional

from .ec import DomainParams, OpCounters, Point, validate_point
from .errors import ReplayWindowViolation
from .pki import Certificate, KeyPair, RevocationList
from .rng import RandomSource, system_rng
from .signcrypt import (
    SigncryptedMessage,
    Variant,
    _open,
    compute_public_tag,
    require_valid_certificate,
    signature_holds,
    signcrypt,
)

Clock = Callable[[], int]

DEFAULT_OMEGA = 300


def system_clock() -> int:
    return int(time.time())


def fixed_clock(t: int) -> Clock:
    return lambda: t


@dataclass(frozen=True)
class ReplayPolicy:
    omega: int = DEFAULT_OMEGA
    clock: Clock = field(default=system_clock, compare=False)

    def __post_init__(self) -> None:
        if not isinstance(self.omega, int) or self.omega <= 0:
            raise ValueError("omega must be a positive number of seconds")

    def accepts(self, t_a: int, t_b: int) -> bool:
        return 0 < t_b - t_a < self.omega


def select_variant(timestamped: bool = False, public_verifiable: bool = False) -> Variant:
    if timestamped and public_verifiable:
        raise ValueError("the timestamped and public-verifiable modes cannot be combined")
    if timestamped:
        return Variant.TIMESTAMPED
    if public_verifiable:
        return Variant.PUBLIC_VERIFIABLE
    return Variant.STANDARD


def signcrypt_ts(
    M: bytes,
    sender: KeyPair,
    sender_cert: Certificate,
    recipient_cert: Certificate,
    *,
    policy: ReplayPolicy,
    ca_public: Point,
    crl: RevocationList,
    params: DomainParams,
    rng: RandomSource = system_rng,
    counters: Optional[OpCounters] = None,
) -> SigncryptedMessage:
    """Signcrypt with T_A = policy.clock() bound into the KDF and the tag."""
    t_a = policy.clock()
    return signcrypt(
        M, sender, sender_cert, recipient_cert,
        ca_public=ca_public, crl=crl, now=t_a, params=params, rng=rng,
        variant=Variant.TIMESTAMPED, timestamp=t_a, counters=counters,
    )


def unsigncrypt_ts(
    msg: SigncryptedMessage,
    recipient: KeyPair,
    recipient_cert: Certificate,
    sender_cert: Certificate,
    *,
    policy: ReplayPolicy,
    ca_public: Point,
    crl: RevocationList,
    params: DomainParams,
    counters: Optional[OpCounters] = None,
    return_material: bool = False,
):
    if msg.variant is not Variant.TIMESTAMPED:
        raise ValueError("unsigncrypt_ts needs a timestamped message")
    t_b = policy.clock()
    # window check precedes any cryptographic work
    if not policy.accepts(msg.T_A, t_b):
        raise ReplayWindowViolation(t_b - msg.T_A, policy.omega)
    M, material = _open(msg, recipient, recipient_cert, sender_cert, ca_public, crl, t_b, params, counters)
    return (M, material) if return_material else M


def signcrypt_pv(
    M: bytes,
    sender: KeyPair,
    sender_cert: Certificate,
    recipient_cert: Certificate,
    **kwargs,
) -> SigncryptedMessage:
    """Signcrypt with the unkeyed tag t = H(C || x_R || ID_A || y_R || ID_B)."""
    kwargs["variant"] = Variant.PUBLIC_VERIFIABLE
    return signcrypt(M, sender, sender_cert, recipient_cert, **kwargs)


def public_verify(
    msg: SigncryptedMessage,
    sender_cert: Certificate,
    *,
    ca_public: Point,
    crl: RevocationList,
    now: int,
    params: DomainParams,
) -> bool:
    """Check sG + R = tW_A from the transmitted triple and Cert_A alone.

    Raises ``CertificateInvalid`` if Cert_A fails validation and
    ``ValueError`` for messages not in public-verifiable mode.
    """
    if msg.variant is not Variant.PUBLIC_VERIFIABLE:
        raise ValueError(f"{msg.variant.value} messages are not publicly verifiable")
    require_valid_certificate(sender_cert, "sender", ca_public, crl, now, params)
    if msg.sender_id != sender_cert.subject_id:
        return False
    if not validate_point(msg.R, params) or not 0 <= msg.s < params.n:
        return False
    t = compute_public_tag(msg.C, msg.R, msg.sender_id, msg.recipient_id, params)
    return signature_holds(msg.s, msg.R, t, sender_cert.subject_public, params)
