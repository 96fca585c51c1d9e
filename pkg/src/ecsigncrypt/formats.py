"""Line-oriented ``key = value`` text files for keys, certificates,
revocation lists, signcrypted messages and judge packages.

Binary values (points, scalars, ciphertext) are lowercase hex; serials and
timestamps are decimal; identifiers and labels are plain UTF-8.
"""

from __future__ import annotations

from pathlib import Path
from typing import Dict, Iterable, Tuple, Union

from .ec import DomainParams, decode_point, encode_point, encode_scalar, scalar_mul
from .pki import Certificate, CertificateAuthority, KeyPair, RevocationList
from .signcrypt import JudgePackage, SessionKeyMaterial, SigncryptedMessage, Variant

PathLike = Union[str, Path]
MESSAGE_VERSION = 1


class FormatError(ValueError):
    pass


def parse_kv(text: str) -> Dict[str, str]:
    out: Dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise FormatError(f"line {lineno}: expected 'key = value'")
        key = key.strip()
        if key in out:
            raise FormatError(f"line {lineno}: duplicate field {key!r}")
        out[key] = value.strip()
    return out


def dump_kv(items: Iterable[Tuple[str, object]]) -> str:
    return "".join(f"{k} = {v}\n" for k, v in items)


def _need(doc: Dict[str, str], *keys: str) -> None:
    missing = [k for k in keys if k not in doc]
    if missing:
        raise FormatError(f"missing field(s): {', '.join(missing)}")


def _hex(doc: Dict[str, str], key: str) -> bytes:
    try:
        return bytes.fromhex(doc[key])
    except ValueError:
        raise FormatError(f"field {key!r} is not hex") from None


def _dec(doc: Dict[str, str], key: str) -> int:
    try:
        return int(doc[key], 10)
    except ValueError:
        raise FormatError(f"field {key!r} is not a decimal integer") from None


def _check_curve(doc: Dict[str, str], params: DomainParams) -> None:
    if "curve" in doc and doc["curve"] != params.name:
        raise FormatError(f"file is for curve {doc['curve']!r}, not {params.name!r}")


def _point(doc, key, params):
    try:
        return decode_point(_hex(doc, key), params)
    except ValueError as exc:
        raise FormatError(f"field {key!r}: {exc}") from None


# Keys and CA state
# ---------------------------------------------------------------------------


def dump_key(kp: KeyPair, params: DomainParams) -> str:
    return dump_kv([
        ("curve", params.name),
        ("id", kp.id),
        ("private", encode_scalar(kp.private, params).hex()),
        ("public", encode_point(kp.public, params).hex()),
    ])


def dump_public(kp: KeyPair, params: DomainParams) -> str:
    return dump_kv([("curve", params.name), ("id", kp.id), ("public", encode_point(kp.public, params).hex())])


def load_key(text: str, params: DomainParams) -> KeyPair:
    doc = parse_kv(text)
    _need(doc, "id", "private", "public")
    _check_curve(doc, params)
    w = int.from_bytes(_hex(doc, "private"), "big")
    W = _point(doc, "public", params)
    if not 1 <= w < params.n:
        raise FormatError("private key out of range")
    if scalar_mul(w, params.G, params) != W:
        raise FormatError("public key does not match private key")
    return KeyPair(doc["id"], w, W)


def load_public(text: str, params: DomainParams):
    """Return (id, public point) from any file carrying a ``public`` field."""
    doc = parse_kv(text)
    _need(doc, "public")
    _check_curve(doc, params)
    return doc.get("id", doc.get("subject", "")), _point(doc, "public", params)


def dump_ca_state(ca: CertificateAuthority) -> str:
    return dump_key(ca.keypair, ca.params) + dump_kv([("next_serial", ca.next_serial)])


def load_ca_state(text: str, params: DomainParams) -> CertificateAuthority:
    doc = parse_kv(text)
    _need(doc, "next_serial")
    return CertificateAuthority(load_key(text, params), params, _dec(doc, "next_serial"))


# Certificates and revocation lists
# ---------------------------------------------------------------------------


def dump_certificate(cert: Certificate, params: DomainParams) -> str:
    e, z = cert.ca_signature
    return dump_kv([
        ("curve", params.name),
        ("serial", cert.serial),
        ("subject", cert.subject_id),
        ("public", encode_point(cert.subject_public, params).hex()),
        ("not_before", cert.not_before),
        ("not_after", cert.not_after),
        ("sig_e", encode_scalar(e, params).hex()),
        ("sig_z", encode_scalar(z, params).hex()),
    ])


def load_certificate(text: str, params: DomainParams) -> Certificate:
    doc = parse_kv(text)
    _need(doc, "serial", "subject", "public", "not_before", "not_after", "sig_e", "sig_z")
    _check_curve(doc, params)
    return Certificate(
        serial=_dec(doc, "serial"),
        subject_id=doc["subject"],
        subject_public=_point(doc, "public", params),
        not_before=_dec(doc, "not_before"),
        not_after=_dec(doc, "not_after"),
        ca_signature=(int.from_bytes(_hex(doc, "sig_e"), "big"), int.from_bytes(_hex(doc, "sig_z"), "big")),
    )


def dump_crl(crl: RevocationList) -> str:
    lines = [f"# issued_at = {crl.issued_at}"]
    lines += [f"{serial},{when}" for serial, when in crl.entries]
    return "\n".join(lines) + "\n"


def load_crl(text: str) -> RevocationList:
    entries = {}
    issued_at = 0
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if line.startswith("#"):
            key, _, value = line[1:].partition("=")
            if key.strip() == "issued_at" and value.strip().isdigit():
                issued_at = int(value)
            continue
        if not line:
            continue
        serial, sep, when = line.partition(",")
        try:
            serial_i, when_i = int(serial), int(when)
        except ValueError:
            raise FormatError(f"revocation line {lineno}: expected 'serial,timestamp'") from None
        if not sep:
            raise FormatError(f"revocation line {lineno}: expected 'serial,timestamp'")
        entries.setdefault(serial_i, when_i)
        issued_at = max(issued_at, when_i)
    return RevocationList(tuple(sorted(entries.items())), issued_at)


# Messages and judge packages
# ---------------------------------------------------------------------------


def _message_items(msg: SigncryptedMessage, params: DomainParams):
    items = [
        ("version", MESSAGE_VERSION),
        ("variant", msg.variant.value),
        ("sender", msg.sender_id),
        ("recipient", msg.recipient_id),
        ("R", encode_point(msg.R, params).hex()),
        ("C", msg.C.hex()),
        ("s", encode_scalar(msg.s, params).hex()),
    ]
    if msg.T_A is not None:
        items.append(("T_A", msg.T_A))
    return items


def dump_message(msg: SigncryptedMessage, params: DomainParams) -> str:
    return dump_kv(_message_items(msg, params))


def _message_from(doc: Dict[str, str], params: DomainParams) -> SigncryptedMessage:
    _need(doc, "version", "variant", "sender", "recipient", "R", "C", "s")
    if doc["version"] != str(MESSAGE_VERSION):
        raise FormatError(f"unsupported message version {doc['version']}")
    try:
        variant = Variant(doc["variant"])
    except ValueError:
        raise FormatError(f"unknown variant {doc['variant']!r}") from None
    try:
        return SigncryptedMessage(
            R=_point(doc, "R", params),
            C=_hex(doc, "C"),
            s=int.from_bytes(_hex(doc, "s"), "big"),
            sender_id=doc["sender"],
            recipient_id=doc["recipient"],
            variant=variant,
            T_A=_dec(doc, "T_A") if "T_A" in doc else None,
        )
    except ValueError as exc:
        if isinstance(exc, FormatError):
            raise
        raise FormatError(str(exc)) from None


def load_message(text: str, params: DomainParams) -> SigncryptedMessage:
    return _message_from(parse_kv(text), params)


def dump_judge_package(pkg: JudgePackage, params: DomainParams) -> str:
    return dump_kv(_message_items(pkg.message, params) + [
        ("M", pkg.plaintext.hex()),
        ("key_material", pkg.material.to_bytes().hex()),
    ])


def load_judge_package(text: str, params: DomainParams) -> JudgePackage:
    doc = parse_kv(text)
    _need(doc, "M", "key_material")
    try:
        material = SessionKeyMaterial.from_bytes(_hex(doc, "key_material"))
    except ValueError as exc:
        raise FormatError(str(exc)) from None
    return JudgePackage(_message_from(doc, params), _hex(doc, "M"), material)


def read_text(path: PathLike) -> str:
    return Path(path).read_text(encoding="utf-8")


def write_text(path: PathLike, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8")
