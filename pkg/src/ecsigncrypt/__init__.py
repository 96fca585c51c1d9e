"""Elliptic-curve signcryption with forward secrecy."""

from .curves import P192, TOY17, get_curve
from .ec import (
    INFINITY,
    DomainParams,
    FieldElement,
    OpCounters,
    Point,
    compute_x_tilde,
    mod_inverse,
    point_add,
    scalar_mul,
    validate_domain_params,
    validate_point,
)
from .pki import (
    Certificate,
    CertificateAuthority,
    KeyPair,
    RevocationList,
    ca_sign,
    ca_verify,
    issue_certificate,
    keygen,
    revoke,
    validate_certificate,
)
from .signcrypt import (
    JudgePackage,
    SessionKeyMaterial,
    SigncryptedMessage,
    Variant,
    Verdict,
    check_confirmation,
    judge_verify,
    kdf,
    make_confirmation,
    signcrypt,
    unsigncrypt,
)
from .variants import ReplayPolicy, public_verify, signcrypt_pv, signcrypt_ts, unsigncrypt_ts

__version__ = "0.1.0"
