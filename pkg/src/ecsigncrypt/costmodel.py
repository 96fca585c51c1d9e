"""Bit-operation cost model for signcryption schemes.

Primitive costs are the leading terms of the conventional-method bounds
(constant 1, lower-order terms dropped), so totals are estimates for
comparing schemes, not benchmarks. Verification and symmetric-encryption
costs are left out.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, NamedTuple, Optional

from .errors import UnknownKind, UnknownScheme, UnsupportedCoordinate

OPERATIONS = ("exp", "div", "ecpm", "ecpa", "mul", "add", "hash")

HMAC_COSTS = {"sha1": 1110, "md5": 744}
HMAC_SETUP = 32

ECPA_COORDINATES = ("affine", "jacobian")
ECPM_COORDINATES = ("jacobian-chudnovsky", "jacobian-affine-comb")
ECPM_MULS = {"jacobian-chudnovsky": 1936, "jacobian-affine-comb": 638}


def _check_zeta(zeta: int) -> None:
    if zeta < 1:
        raise ValueError("zeta must be a positive bit length")


def cost_primitive(kind: str, zeta: int) -> int:
    _check_zeta(zeta)
    if kind == "add":
        return zeta
    if kind in ("mul", "div"):
        return zeta ** 2
    if kind in ("inv", "exp"):
        return zeta ** 3
    raise UnknownKind(f"unknown primitive {kind!r}")


def cost_hmac(variant: str, n_k: float) -> float:
    """Operation count of HMAC-SHA1 or HMAC-MD5 over n_k input blocks."""
    if n_k < 0:
        raise ValueError("n_k must be non-negative")
    try:
        per_block = HMAC_COSTS[variant]
    except KeyError:
        raise UnknownKind(f"unknown HMAC variant {variant!r}") from None
    return HMAC_SETUP + per_block * (2 + n_k)


def hmac_blocks(message_bits: int, key_bits: int = 512) -> float:
    """n_k = (N + k) / 512."""
    return (message_bits + key_bits) / 512


def cost_ecpa(coordinate_system: str, zeta: int) -> int:
    _check_zeta(zeta)
    mul, add, inv = (cost_primitive(k, zeta) for k in ("mul", "add", "inv"))
    if coordinate_system == "affine":
        return 3 * mul + 6 * add + inv
    if coordinate_system == "jacobian":
        return 16 * mul + 7 * add
    raise UnsupportedCoordinate(f"no ECPA cost for {coordinate_system!r}")


def cost_ecpm(coordinate_system: str, zeta: int) -> int:
    _check_zeta(zeta)
    try:
        muls = ECPM_MULS[coordinate_system]
    except KeyError:
        raise UnsupportedCoordinate(f"no ECPM cost for {coordinate_system!r}") from None
    return muls * cost_primitive("mul", zeta) + cost_primitive("inv", zeta)


@dataclass(frozen=True)
class CostProfile:
    """Pricing inputs.

    ``zeta`` is the EC-scheme modulus length, ``zeta_exp`` the modulus of
    the exponentiation-based schemes. With ``scalar_pricing="native"``
    Exp/Div/Mul/Add are priced at each scheme's own modulus; ``"exp"``
    prices them at zeta_exp for every scheme.
    """

    zeta: int = 192
    zeta_exp: int = 1024
    ecpm_coordinates: str = "jacobian-chudnovsky"
    ecpa_coordinates: str = "jacobian"
    hmac_variant: str = "sha1"
    n_k: float = 1
    scalar_pricing: str = "native"

    def __post_init__(self) -> None:
        if self.zeta < 2 or self.zeta_exp < 2:
            raise ValueError("zeta must be at least 2")
        if self.ecpm_coordinates not in ECPM_COORDINATES:
            raise UnsupportedCoordinate(self.ecpm_coordinates)
        if self.ecpa_coordinates not in ECPA_COORDINATES:
            raise UnsupportedCoordinate(self.ecpa_coordinates)
        if self.hmac_variant not in HMAC_COSTS:
            raise UnknownKind(self.hmac_variant)
        if self.scalar_pricing not in ("native", "exp"):
            raise ValueError("scalar_pricing is 'native' or 'exp'")


class SchemeCostRow(NamedTuple):
    scheme: str
    participant: str
    exp: int = 0
    div: int = 0
    ecpm: int = 0
    ecpa: int = 0
    mul: int = 0
    add: int = 0
    hash: int = 0

    @property
    def elliptic(self) -> bool:
        return self.ecpm > 0 or self.ecpa > 0

    def counts(self) -> Dict[str, int]:
        return {op: getattr(self, op) for op in OPERATIONS}


def _rows(scheme: str, alice: tuple, bob: tuple) -> List[SchemeCostRow]:
    return [SchemeCostRow(scheme, "Alice", *alice), SchemeCostRow(scheme, "Bob", *bob)]


# columns: exp, div, ecpm, ecpa, mul, add, hash
TABLE2: List[SchemeCostRow] = [
    *_rows("Zheng 1997", (1, 1, 0, 0, 0, 1, 2), (2, 0, 0, 0, 2, 0, 2)),
    *_rows("Jung et al. 2001", (2, 1, 0, 0, 0, 1, 2), (3, 0, 0, 0, 1, 0, 2)),
    *_rows("Bao and Deng 1998", (2, 1, 0, 0, 0, 1, 3), (3, 0, 0, 0, 1, 0, 3)),
    *_rows("Gamage et al. 1999", (2, 1, 0, 0, 0, 1, 2), (3, 0, 0, 0, 1, 0, 2)),
    *_rows("Zheng and Imai 1998", (0, 1, 1, 0, 1, 1, 2), (0, 0, 2, 1, 2, 0, 2)),
    *_rows("Han et al. 2004", (0, 1, 2, 0, 2, 1, 2), (0, 1, 3, 1, 2, 0, 2)),
    *_rows("Hwang et al. 2005", (0, 0, 2, 0, 1, 1, 1), (0, 0, 3, 1, 0, 0, 1)),
    *_rows("Our Scheme", (0, 0, 2, 0, 2, 2, 2), (0, 0, 4, 2, 0, 0, 2)),
]

SCHEMES = list(dict.fromkeys(r.scheme for r in TABLE2))
OUR_SCHEME = "Our Scheme"


def _norm(name: str) -> str:
    return "".join(ch for ch in name.lower() if ch.isalnum())


def scheme_row(scheme: str, participant: str) -> SchemeCostRow:
    key, who = _norm(scheme), participant.lower()
    for row in TABLE2:
        if _norm(row.scheme) == key and row.participant.lower() == who:
            return row
    raise UnknownScheme(f"{scheme!r}/{participant!r} is not in the built-in table")


def row_total(row: SchemeCostRow, profile: CostProfile) -> float:
    zs = profile.zeta if row.elliptic and profile.scalar_pricing == "native" else profile.zeta_exp
    return (
        row.exp * cost_primitive("exp", zs)
        + row.div * cost_primitive("div", zs)
        + row.mul * cost_primitive("mul", zs)
        + row.add * cost_primitive("add", zs)
        + row.ecpm * cost_ecpm(profile.ecpm_coordinates, profile.zeta)
        + row.ecpa * cost_ecpa(profile.ecpa_coordinates, profile.zeta)
        + row.hash * cost_hmac(profile.hmac_variant, profile.n_k)
    )


def scheme_total(scheme: str, participant: str, profile: Optional[CostProfile] = None) -> float:
    return row_total(scheme_row(scheme, participant), profile or CostProfile())


class ReportRow(NamedTuple):
    scheme: str
    elliptic: bool
    signcryption: float
    unsigncryption: float

    @property
    def total(self) -> float:
        return self.signcryption + self.unsigncryption


def comparison_report(profile: Optional[CostProfile] = None) -> List[ReportRow]:
    profile = profile or CostProfile()
    out = []
    for scheme in SCHEMES:
        alice, bob = scheme_row(scheme, "Alice"), scheme_row(scheme, "Bob")
        out.append(ReportRow(scheme, alice.elliptic or bob.elliptic,
                             row_total(alice, profile), row_total(bob, profile)))
    return out


def _num(v: float) -> str:
    return str(int(v)) if float(v).is_integer() else repr(float(v))


CSV_HEADER = "scheme,participant," + ",".join(OPERATIONS) + ",total_bitops"


def table2_csv() -> str:
    lines = ["scheme,participant," + ",".join(OPERATIONS)]
    lines += [f"{r.scheme},{r.participant}," + ",".join(str(getattr(r, op)) for op in OPERATIONS) for r in TABLE2]
    return "\n".join(lines) + "\n"


def cost_csv(profile: Optional[CostProfile] = None) -> str:
    profile = profile or CostProfile()
    lines = [CSV_HEADER]
    for r in TABLE2:
        counts = ",".join(str(getattr(r, op)) for op in OPERATIONS)
        lines.append(f"{r.scheme},{r.participant},{counts},{_num(row_total(r, profile))}")
    return "\n".join(lines) + "\n"


def format_report(rows: List[ReportRow], profile: Optional[CostProfile] = None) -> str:
    profile = profile or CostProfile()
    width = max(len(r.scheme) for r in rows)
    head = f"{'scheme':<{width}}  {'kind':<4}  {'signcrypt':>14}  {'unsigncrypt':>14}  {'total':>14}"
    lines = [head, "-" * len(head)]
    for r in rows:
        kind = "EC" if r.elliptic else "exp"
        lines.append(
            f"{r.scheme:<{width}}  {kind:<4}  {r.signcryption:>14.4g}  {r.unsigncryption:>14.4g}  {r.total:>14.4g}"
        )
    lines.append("")
    lines.append(
        f"zeta_ec={profile.zeta} zeta_exp={profile.zeta_exp} ECPM={profile.ecpm_coordinates} "
        f"ECPA={profile.ecpa_coordinates} HMAC-{profile.hmac_variant.upper()} n_k={_num(profile.n_k)}"
    )
    lines.append("Note: the Div column (modular division/inverse) is priced as a division, zeta^2.")
    return "\n".join(lines)


def ordering_claims(rows: List[ReportRow]) -> Dict[str, bool]:
    """The two comparative claims: cheaper than every exponentiation scheme
    overall, and unsigncryption at least as costly as every other EC scheme."""
    ours = next(r for r in rows if r.scheme == OUR_SCHEME)
    others = [r for r in rows if r.scheme != OUR_SCHEME]
    return {
        "below_exponentiation": all(ours.total < r.total for r in others if not r.elliptic),
        "unsigncrypt_at_least_ec": all(ours.unsigncryption >= r.unsigncryption for r in others if r.elliptic),
    }
