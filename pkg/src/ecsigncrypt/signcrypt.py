"""Signcryption, unsigncryption, confirmation tags and judge verification.

Sender with (w_A, W_A), recipient with (w_B, W_B):

    R = rG,  K = (r + x~_R w_A) W_B
    (enc_key, nonce, mac_key) = KDF(x_K || ID_A || y_K || ID_B [|| T_A])
    C = AES-256-CTR(enc_key, nonce, M)
    t = HMAC(mac_key, M || x_R || ID_A || y_R || ID_B [|| T_A]) mod n
    s = t w_A - r mod n

The recipient recomputes K = w_B (R + x~_R W_A), decrypts, recomputes t and
accepts iff sG + R = tW_A.

Byte layout of the concatenations: coordinates fixed-width big-endian,
identifiers UTF-8 behind a 2-byte length, timestamps 8-byte big-endian, and
the variable-length message (or ciphertext) behind an 8-byte length.
"""

from __future__ import annotations

import enum
import hashlib
import hmac
from dataclasses import dataclass, field
from typing import Optional, Tuple

from cryptography.hazmat.primitives import hashes
from cryptography.hazmat.primitives.ciphers import Cipher, algorithms, modes
from cryptography.hazmat.primitives.kdf.x963kdf import X963KDF

from .ec import (
    INFINITY,
    DomainParams,
    FieldElement,
    OpCounters,
    Point,
    compute_x_tilde,
    point_add,
    scalar_mul,
    validate_point,
)
from .errors import (
    CertificateInvalid,
    DegenerateSharedPoint,
    InvalidEphemeralPoint,
    Rejection,
    RetryNeeded,
    SignatureInvalid,
)
from .pki import Certificate, KeyPair, RevocationList, validate_certificate
from .rng import RandomSource, random_scalar, system_rng

KEY_MATERIAL_BYTES = 80
ENC_KEY_BYTES = 32
NONCE_BYTES = 16
MAC_KEY_BYTES = 32
MAX_SENDER_ATTEMPTS = 64


class Variant(str, enum.Enum):
    STANDARD = "standard"
    TIMESTAMPED = "timestamped"
    PUBLIC_VERIFIABLE = "public-verifiable"


class MisaddressedMessage(Rejection):
    pass


@dataclass(frozen=True)
class SessionKeyMaterial:
    enc_key: bytes
    nonce: bytes
    mac_key: bytes
    K: Optional[Point] = field(default=None, compare=False)

    def to_bytes(self) -> bytes:
        return self.enc_key + self.nonce + self.mac_key

    @classmethod
    def from_bytes(cls, data: bytes, K: Optional[Point] = None) -> "SessionKeyMaterial":
        if len(data) != KEY_MATERIAL_BYTES:
            raise ValueError(f"key material must be {KEY_MATERIAL_BYTES} bytes")
        a, b = ENC_KEY_BYTES, ENC_KEY_BYTES + NONCE_BYTES
        return cls(bytes(data[:a]), bytes(data[a:b]), bytes(data[b:]), K)

    def __repr__(self) -> str:
        return "SessionKeyMaterial(<secret>)"


@dataclass(frozen=True)
class SigncryptedMessage:
    R: Point
    C: bytes
    s: int
    sender_id: str
    recipient_id: str
    variant: Variant = Variant.STANDARD
    T_A: Optional[int] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "variant", Variant(self.variant))
        if (self.T_A is not None) != (self.variant is Variant.TIMESTAMPED):
            raise ValueError("T_A must be present exactly for the timestamped variant")


@dataclass(frozen=True)
class JudgePackage:
    message: SigncryptedMessage
    plaintext: bytes
    material: SessionKeyMaterial


@dataclass(frozen=True)
class Verdict:
    sender_bound: bool
    step: Optional[int] = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.sender_bound

    def __str__(self) -> str:
        return "SENDER-BOUND" if self.sender_bound else f"BOB-WRONG {self.step}"


# Encodings
# ---------------------------------------------------------------------------


def encode_id(ident: str) -> bytes:
    raw = ident.encode("utf-8")
    if len(raw) > 0xFFFF:
        raise ValueError("identifier longer than 65535 bytes")
    return len(raw).to_bytes(2, "big") + raw


def encode_timestamp(t: int) -> bytes:
    return t.to_bytes(8, "big")


def _blob(data: bytes) -> bytes:
    return len(data).to_bytes(8, "big") + data


def _bound_tuple(body: bytes, R: Point, id_a: str, id_b: str, t_a: Optional[int], params: DomainParams) -> bytes:
    w = params.field_bytes
    out = _blob(body) + R.x.to_bytes(w, "big") + encode_id(id_a) + R.y.to_bytes(w, "big") + encode_id(id_b)
    if t_a is not None:
        out += encode_timestamp(t_a)
    return out


# Primitives
# ---------------------------------------------------------------------------


def kdf(
    x_K: FieldElement,
    id_a: str,
    y_K: FieldElement,
    id_b: str,
    t_a: Optional[int] = None,
    counters: Optional[OpCounters] = None,
) -> SessionKeyMaterial:
    """Expand x_K || ID_A || y_K || ID_B [|| T_A] to 80 bytes (counter-mode SHA-256)."""
    if x_K.modulus != y_K.modulus:
        raise ValueError("shared point coordinates under different moduli")
    z = x_K.to_bytes() + encode_id(id_a) + y_K.to_bytes() + encode_id(id_b)
    if t_a is not None:
        z += encode_timestamp(t_a)
    if counters is not None:
        counters.hash += 1
    stream = X963KDF(algorithm=hashes.SHA256(), length=KEY_MATERIAL_BYTES, sharedinfo=None).derive(z)
    return SessionKeyMaterial.from_bytes(stream, K=Point(x_K.value, y_K.value))


def derive_material(K: Point, id_a: str, id_b: str, params: DomainParams, t_a: Optional[int] = None,
                    counters: Optional[OpCounters] = None) -> SessionKeyMaterial:
    return kdf(params.fe(K.x), id_a, params.fe(K.y), id_b, t_a, counters)


def _aes_ctr(material: SessionKeyMaterial, data: bytes) -> bytes:
    ctx = Cipher(algorithms.AES(material.enc_key), modes.CTR(material.nonce)).encryptor()
    return ctx.update(data) + ctx.finalize()


def encrypt(material: SessionKeyMaterial, plaintext: bytes) -> bytes:
    return _aes_ctr(material, plaintext)


def decrypt(material: SessionKeyMaterial, ciphertext: bytes) -> bytes:
    return _aes_ctr(material, ciphertext)


def compute_tag(
    material: SessionKeyMaterial,
    M: bytes,
    R: Point,
    id_a: str,
    id_b: str,
    params: DomainParams,
    t_a: Optional[int] = None,
    counters: Optional[OpCounters] = None,
) -> int:
    """HMAC-SHA256 under mac_key over the bound tuple, as an integer mod n."""
    if counters is not None:
        counters.hash += 1
    mac = hmac.new(material.mac_key, _bound_tuple(M, R, id_a, id_b, t_a, params), hashlib.sha256).digest()
    return int.from_bytes(mac, "big") % params.n


def compute_public_tag(
    C: bytes, R: Point, id_a: str, id_b: str, params: DomainParams, counters: Optional[OpCounters] = None
) -> int:
    """Unkeyed SHA-256 over the ciphertext-bound tuple, mod n."""
    if counters is not None:
        counters.hash += 1
    digest = hashlib.sha256(_bound_tuple(C, R, id_a, id_b, None, params)).digest()
    return int.from_bytes(digest, "big") % params.n


def _tag(msg_variant: Variant, material, M, C, R, id_a, id_b, params, t_a, counters) -> int:
    if msg_variant is Variant.PUBLIC_VERIFIABLE:
        return compute_public_tag(C, R, id_a, id_b, params, counters)
    return compute_tag(material, M, R, id_a, id_b, params, t_a, counters)


def sender_shared_point(
    r: int, w_a: int, W_b: Point, params: DomainParams, counters: Optional[OpCounters] = None
) -> Tuple[Point, Point]:
    R = scalar_mul(r, params.G, params, counters)
    e = compute_x_tilde(R.x, params) * w_a % params.n
    e = (r + e) % params.n
    if counters is not None:
        counters.mod_mul += 1
        counters.mod_add += 1
    K = scalar_mul(e, W_b, params, counters)
    if K.is_infinity:
        raise RetryNeeded("shared point is O; draw a fresh r")
    return R, K


def recipient_shared_point(
    R: Point, W_a: Point, w_b: int, params: DomainParams, counters: Optional[OpCounters] = None
) -> Point:
    xW = scalar_mul(compute_x_tilde(R.x, params), W_a, params, counters)
    K = scalar_mul(w_b, point_add(R, xW, params, counters), params, counters)
    if K.is_infinity:
        raise DegenerateSharedPoint("shared point is O")
    return K


def signature_holds(s: int, R: Point, t: int, W_a: Point, params: DomainParams,
                    counters: Optional[OpCounters] = None) -> bool:
    """sG + R == tW_A."""
    lhs = point_add(scalar_mul(s, params.G, params, counters), R, params, counters)
    return lhs == scalar_mul(t, W_a, params, counters)


def make_confirmation(material: SessionKeyMaterial, M_conf: bytes) -> bytes:
    return hmac.new(material.mac_key, M_conf, hashlib.sha256).digest()


def check_confirmation(material: SessionKeyMaterial, M_conf: bytes, tag: bytes) -> bool:
    return hmac.compare_digest(make_confirmation(material, M_conf), bytes(tag))


# Protocol
# ---------------------------------------------------------------------------


def require_valid_certificate(cert: Certificate, which: str, ca_public: Point, crl: RevocationList,
                              now: int, params: DomainParams) -> None:
    report = validate_certificate(cert, ca_public, crl, now, params)
    if not report.passed:
        raise CertificateInvalid(which, report)


def _require_owner(key: KeyPair, cert: Certificate, role: str) -> None:
    if key.id != cert.subject_id or key.public != cert.subject_public:
        raise ValueError(f"{role} key pair does not match its certificate")


def signcrypt(
    M: bytes,
    sender: KeyPair,
    sender_cert: Certificate,
    recipient_cert: Certificate,
    *,
    ca_public: Point,
    crl: RevocationList,
    now: int,
    params: DomainParams,
    rng: RandomSource = system_rng,
    variant: Variant = Variant.STANDARD,
    timestamp: Optional[int] = None,
    counters: Optional[OpCounters] = None,
) -> SigncryptedMessage:
    variant = Variant(variant)
    if (timestamp is not None) != (variant is Variant.TIMESTAMPED):
        raise ValueError("a timestamp is required for, and only for, the timestamped variant")
    require_valid_certificate(recipient_cert, "recipient", ca_public, crl, now, params)
    require_valid_certificate(sender_cert, "sender", ca_public, crl, now, params)
    _require_owner(sender, sender_cert, "sender")

    id_a, id_b = sender.id, recipient_cert.subject_id
    n = params.n
    for _ in range(MAX_SENDER_ATTEMPTS):
        r = random_scalar(rng, params)
        try:
            R, K = sender_shared_point(r, sender.private, recipient_cert.subject_public, params, counters)
            break
        except RetryNeeded:
            continue
    else:
        raise RetryNeeded(f"shared point was O for {MAX_SENDER_ATTEMPTS} draws")

    material = derive_material(K, id_a, id_b, params, timestamp, counters)
    C = encrypt(material, M)
    t = _tag(variant, material, M, C, R, id_a, id_b, params, timestamp, counters)
    s = (t * sender.private % n - r) % n
    if counters is not None:
        counters.mod_mul += 1
        counters.mod_add += 1
    del r, material
    return SigncryptedMessage(R, C, s, id_a, id_b, variant, timestamp)


def _open(
    msg: SigncryptedMessage,
    recipient: KeyPair,
    recipient_cert: Certificate,
    sender_cert: Certificate,
    ca_public: Point,
    crl: RevocationList,
    now: int,
    params: DomainParams,
    counters: Optional[OpCounters],
) -> Tuple[bytes, SessionKeyMaterial]:
    if msg.recipient_id != recipient.id:
        raise MisaddressedMessage(f"message is for {msg.recipient_id!r}, not {recipient.id!r}")
    if msg.sender_id != sender_cert.subject_id:
        raise MisaddressedMessage(f"message claims sender {msg.sender_id!r}, certificate is for {sender_cert.subject_id!r}")
    require_valid_certificate(sender_cert, "sender", ca_public, crl, now, params)
    require_valid_certificate(recipient_cert, "recipient", ca_public, crl, now, params)
    _require_owner(recipient, recipient_cert, "recipient")

    check = validate_point(msg.R, params)
    if not check:
        raise InvalidEphemeralPoint(check.condition, check.detail)
    if not 0 <= msg.s < params.n:
        raise SignatureInvalid("s out of range")

    W_a = sender_cert.subject_public
    K = recipient_shared_point(msg.R, W_a, recipient.private, params, counters)
    material = derive_material(K, msg.sender_id, msg.recipient_id, params, msg.T_A, counters)
    M = decrypt(material, msg.C)
    t = _tag(msg.variant, material, M, msg.C, msg.R, msg.sender_id, msg.recipient_id, params, msg.T_A, counters)
    if not signature_holds(msg.s, msg.R, t, W_a, params, counters):
        raise SignatureInvalid("sG + R != tW_A")
    return M, material


def unsigncrypt_with_material(
    msg: SigncryptedMessage,
    recipient: KeyPair,
    recipient_cert: Certificate,
    sender_cert: Certificate,
    *,
    ca_public: Point,
    crl: RevocationList,
    now: int,
    params: DomainParams,
    counters: Optional[OpCounters] = None,
) -> Tuple[bytes, SessionKeyMaterial]:
    """Like ``unsigncrypt`` but also returns the session key material."""
    if msg.variant is Variant.TIMESTAMPED:
        raise ValueError("timestamped messages go through variants.unsigncrypt_ts")
    return _open(msg, recipient, recipient_cert, sender_cert, ca_public, crl, now, params, counters)


def unsigncrypt(msg: SigncryptedMessage, recipient: KeyPair, recipient_cert: Certificate,
                sender_cert: Certificate, **kwargs) -> bytes:
    """Recover M and verify the sender's signature; raises a ``Rejection`` on failure.

    Keyword arguments are those of ``unsigncrypt_with_material``.
    """
    return unsigncrypt_with_material(msg, recipient, recipient_cert, sender_cert, **kwargs)[0]


def judge_verify(
    pkg: JudgePackage,
    sender_cert: Certificate,
    *,
    ca_public: Point,
    crl: RevocationList,
    now: int,
    params: DomainParams,
) -> Verdict:
    msg, M, material = pkg.message, pkg.plaintext, pkg.material
    report = validate_certificate(sender_cert, ca_public, crl, now, params)
    if not report.passed:
        failed = ",".join(c.name for c in report.failures())
        return Verdict(False, 1, f"sender certificate invalid: {failed}")
    if msg.sender_id != sender_cert.subject_id:
        return Verdict(False, 1, "message sender does not match certificate")

    if decrypt(material, msg.C) != M:
        return Verdict(False, 2, "M != D_k(C)")

    check = validate_point(msg.R, params)
    if not check:
        return Verdict(False, 4, f"invalid ephemeral point (condition {check.condition})")
    if not 0 <= msg.s < params.n:
        return Verdict(False, 4, "s out of range")
    t = _tag(msg.variant, material, M, msg.C, msg.R, msg.sender_id, msg.recipient_id, params, msg.T_A, None)
    if not signature_holds(msg.s, msg.R, t, sender_cert.subject_public, params):
        return Verdict(False, 4, "sG + R != tW_A")
    return Verdict(True)
