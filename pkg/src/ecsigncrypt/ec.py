"""Prime-field short Weierstrass curve arithmetic.

Points are affine ``Point`` values; Jacobian triples ``(X, Y, Z)`` with
``x = X/Z^2, y = Y/Z^3`` are used internally by the optimized scalar
multiplication and exposed through ``jacobian_add``/``jacobian_double``.
Field elements are plain ints reduced mod q, except at the ``FieldElement``
API boundary.

Every operation that accepts ``counters`` tallies its field work into that
``OpCounters`` sink. Passing ``None`` disables counting; results are the same.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field, fields
from typing import Iterator, NamedTuple, Optional, Sequence, Tuple

import gmpy2

from .errors import ModulusMismatch, NotOnCurve, ZeroInverse

JacobianPoint = Tuple[int, int, int]

MILLER_RABIN_ROUNDS = 64
MOV_BOUND = 20


# Field elements
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FieldElement:
    """An integer residue tagged with its modulus."""

    value: int
    modulus: int

    def __post_init__(self) -> None:
        if not 0 <= self.value < self.modulus:
            raise ValueError(f"{self.value} is not a canonical residue mod {self.modulus}")

    @classmethod
    def reduce(cls, value: int, modulus: int) -> "FieldElement":
        return cls(value % modulus, modulus)

    def _peer(self, other: "FieldElement") -> int:
        if not isinstance(other, FieldElement):
            return NotImplemented
        if other.modulus != self.modulus:
            raise ModulusMismatch(f"modulus {self.modulus} vs {other.modulus}")
        return other.value

    def __add__(self, other: "FieldElement") -> "FieldElement":
        return FieldElement((self.value + self._peer(other)) % self.modulus, self.modulus)

    def __sub__(self, other: "FieldElement") -> "FieldElement":
        return FieldElement((self.value - self._peer(other)) % self.modulus, self.modulus)

    def __mul__(self, other: "FieldElement") -> "FieldElement":
        return FieldElement((self.value * self._peer(other)) % self.modulus, self.modulus)

    def __neg__(self) -> "FieldElement":
        return FieldElement(-self.value % self.modulus, self.modulus)

    def __int__(self) -> int:
        return self.value

    @property
    def byte_length(self) -> int:
        return (self.modulus.bit_length() + 7) // 8

    def to_bytes(self) -> bytes:
        return self.value.to_bytes(self.byte_length, "big")


def mod_inverse(x: FieldElement, counters: Optional["OpCounters"] = None) -> FieldElement:
    """Return y with x*y = 1 under x's (prime) modulus."""
    if x.value == 0:
        raise ZeroInverse(f"0 has no inverse mod {x.modulus}")
    if counters is not None:
        counters.field_inv += 1
    return FieldElement(pow(x.value, -1, x.modulus), x.modulus)


def _inv(x: int, m: int) -> int:
    x %= m
    if x == 0:
        raise ZeroInverse(f"0 has no inverse mod {m}")
    return pow(x, -1, m)


def is_probable_prime(n: int, rounds: int = MILLER_RABIN_ROUNDS) -> bool:
    """Miller-Rabin with ``rounds`` bases (error below 4**-rounds)."""
    if n < 2:
        return False
    return bool(gmpy2.is_prime(n, rounds))


# Points and domain parameters
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Point:
    """Affine point; ``Point()`` (both coordinates None) is the identity O."""

    x: Optional[int] = None
    y: Optional[int] = None

    @property
    def is_infinity(self) -> bool:
        return self.x is None and self.y is None

    def __repr__(self) -> str:
        return "Point(O)" if self.is_infinity else f"Point({self.x:#x}, {self.y:#x})"


INFINITY = Point()


@dataclass
class OpCounters:
    """Observational tally of work done.

    ecpm/ecpa/mod_mul/mod_add/hash are protocol-level; the field_* entries
    count field arithmetic inside the curve formulas (squarings are counted
    as multiplications, doublings and constant multiples as additions).
    A counted scalar multiplication does not add to ``ecpa``.
    """

    ecpm: int = 0
    ecpa: int = 0
    mod_mul: int = 0
    mod_add: int = 0
    hash: int = 0
    field_mul: int = 0
    field_add: int = 0
    field_inv: int = 0

    def reset(self) -> None:
        for f in fields(self):
            setattr(self, f.name, 0)

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    def protocol(self) -> dict:
        return {k: getattr(self, k) for k in ("ecpm", "ecpa", "mod_mul", "mod_add", "hash")}


@dataclass(frozen=True)
class DomainParams:
    name: str
    q: int
    a: int
    b: int
    G: Point
    n: int
    V: int = MOV_BOUND
    f: int = field(init=False)
    c: int = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "a", self.a % self.q)
        object.__setattr__(self, "b", self.b % self.q)
        object.__setattr__(self, "f", self.n.bit_length())
        object.__setattr__(self, "c", (self.f + 1) // 2)

    @property
    def field_bytes(self) -> int:
        return (self.q.bit_length() + 7) // 8

    @property
    def scalar_bytes(self) -> int:
        return (self.f + 7) // 8

    def fe(self, value: int) -> FieldElement:
        """Wrap a coordinate as a field element mod q."""
        return FieldElement.reduce(value, self.q)

    @functools.cached_property
    def _fixed_base_table(self) -> list:
        return _build_fixed_base_table(self.G, self)


def is_on_curve(P: Point, params: DomainParams) -> bool:
    if P.is_infinity:
        return True
    q = params.q
    return (P.y * P.y - (P.x * P.x * P.x + params.a * P.x + params.b)) % q == 0


def point_neg(P: Point, params: DomainParams) -> Point:
    if P.is_infinity:
        return P
    return Point(P.x, -P.y % params.q)


# Affine arithmetic
# ---------------------------------------------------------------------------


def _affine_add(P: Point, Q: Point, params: DomainParams, ctr: Optional[OpCounters]) -> Point:
    if P.is_infinity:
        return Q
    if Q.is_infinity:
        return P
    q = params.q
    x1, y1, x2, y2 = P.x, P.y, Q.x, Q.y
    if x1 == x2:
        if (y1 + y2) % q == 0:
            return INFINITY
        return _affine_double(P, params, ctr)
    lam = (y2 - y1) * _inv(x2 - x1, q) % q
    x3 = (lam * lam - x1 - x2) % q
    y3 = (lam * (x1 - x3) - y1) % q
    if ctr is not None:
        ctr.field_mul += 3
        ctr.field_add += 6
        ctr.field_inv += 1
    return Point(x3, y3)


def _affine_double(P: Point, params: DomainParams, ctr: Optional[OpCounters]) -> Point:
    if P.is_infinity or P.y == 0:
        return INFINITY
    q = params.q
    x1, y1 = P.x, P.y
    lam = (3 * x1 * x1 + params.a) * _inv(2 * y1, q) % q
    x3 = (lam * lam - 2 * x1) % q
    y3 = (lam * (x1 - x3) - y1) % q
    if ctr is not None:
        ctr.field_mul += 4
        ctr.field_add += 7
        ctr.field_inv += 1
    return Point(x3, y3)


def point_add(
    P: Point,
    Q: Point,
    params: DomainParams,
    counters: Optional[OpCounters] = None,
    strict: bool = False,
) -> Point:
    """Group law in affine coordinates; handles O, doubling and P + (-P).

    A general addition of distinct, non-inverse points costs
    3 multiplications, 6 additions and 1 inversion.
    """
    if strict:
        for pt in (P, Q):
            if not is_on_curve(pt, params):
                raise NotOnCurve(f"{pt!r} is not on {params.name}")
    if counters is not None:
        counters.ecpa += 1
    return _affine_add(P, Q, params, counters)


# Jacobian arithmetic
# ---------------------------------------------------------------------------


def to_jacobian(P: Point) -> JacobianPoint:
    if P.is_infinity:
        return (1, 1, 0)
    return (P.x, P.y, 1)


def from_jacobian(J: JacobianPoint, params: DomainParams) -> Point:
    X, Y, Z = J
    if Z == 0:
        return INFINITY
    q = params.q
    zi = _inv(Z, q)
    zi2 = zi * zi % q
    return Point(X * zi2 % q, Y * zi2 * zi % q)


def jacobian_double(J: JacobianPoint, params: DomainParams, ctr: Optional[OpCounters] = None) -> JacobianPoint:
    X, Y, Z = J
    if Z == 0 or Y == 0:
        return (1, 1, 0)
    q = params.q
    XX = X * X % q
    YY = Y * Y % q
    YYYY = YY * YY % q
    ZZ = Z * Z % q
    S = 4 * X * YY % q
    M = (3 * XX + params.a * ZZ * ZZ) % q
    X3 = (M * M - 2 * S) % q
    Y3 = (M * (S - X3) - 8 * YYYY) % q
    Z3 = 2 * Y * Z % q
    if ctr is not None:
        ctr.field_mul += 10
        ctr.field_add += 11
    return (X3, Y3, Z3)


def jacobian_add(
    J1: JacobianPoint, J2: JacobianPoint, params: DomainParams, ctr: Optional[OpCounters] = None
) -> JacobianPoint:
    """General Jacobian addition, 12M + 4S (16 multiplications) and 7 additions.

    The additive count treats the doubling 2*U1*H^2 as one addition.
    """
    X1, Y1, Z1 = J1
    X2, Y2, Z2 = J2
    if Z1 == 0:
        return J2
    if Z2 == 0:
        return J1
    q = params.q
    Z1Z1 = Z1 * Z1 % q
    Z2Z2 = Z2 * Z2 % q
    U1 = X1 * Z2Z2 % q
    U2 = X2 * Z1Z1 % q
    S1 = Y1 * (Z2 * Z2Z2 % q) % q
    S2 = Y2 * (Z1 * Z1Z1 % q) % q
    H = (U2 - U1) % q
    r = (S2 - S1) % q
    if H == 0:
        if r == 0:
            return jacobian_double(J1, params, ctr)
        return (1, 1, 0)
    HH = H * H % q
    HHH = H * HH % q
    V = U1 * HH % q
    X3 = (r * r - HHH - 2 * V) % q
    Y3 = (r * (V - X3) - S1 * HHH) % q
    Z3 = Z1 * Z2 % q * H % q
    if ctr is not None:
        ctr.field_mul += 16
        ctr.field_add += 7
    return (X3, Y3, Z3)


def _jacobian_add_affine(
    J: JacobianPoint, x2: int, y2: int, params: DomainParams, ctr: Optional[OpCounters]
) -> JacobianPoint:
    # mixed addition, 8M + 3S
    X1, Y1, Z1 = J
    if Z1 == 0:
        return (x2, y2, 1)
    q = params.q
    Z1Z1 = Z1 * Z1 % q
    U2 = x2 * Z1Z1 % q
    S2 = y2 * Z1 % q * Z1Z1 % q
    H = (U2 - X1) % q
    r = (S2 - Y1) % q
    if H == 0:
        if r == 0:
            return jacobian_double(J, params, ctr)
        return (1, 1, 0)
    HH = H * H % q
    HHH = H * HH % q
    V = X1 * HH % q
    X3 = (r * r - HHH - 2 * V) % q
    Y3 = (r * (V - X3) - Y1 * HHH) % q
    Z3 = Z1 * H % q
    if ctr is not None:
        ctr.field_mul += 11
        ctr.field_add += 7
    return (X3, Y3, Z3)


def _normalize_batch(points: Sequence[JacobianPoint], params: DomainParams) -> list:
    """Convert many Jacobian points to affine with a single inversion."""
    q = params.q
    finite = [i for i, J in enumerate(points) if J[2] != 0]
    out = [INFINITY] * len(points)
    if not finite:
        return out
    prefix = []
    acc = 1
    for i in finite:
        acc = acc * points[i][2] % q
        prefix.append(acc)
    inv = _inv(acc, q)
    for pos in range(len(finite) - 1, -1, -1):
        i = finite[pos]
        zi = inv * prefix[pos - 1] % q if pos else inv
        inv = inv * points[i][2] % q
        zi2 = zi * zi % q
        X, Y, _ = points[i]
        out[i] = Point(X * zi2 % q, Y * zi2 * zi % q)
    return out


# Scalar multiplication
# ---------------------------------------------------------------------------

WNAF_WIDTH = 5
FIXED_BASE_WINDOW = 4


def wnaf_digits(k: int, width: int = WNAF_WIDTH) -> list:
    """Width-w NAF of k, least significant digit first."""
    digits = []
    full = 1 << width
    half = full >> 1
    while k > 0:
        if k & 1:
            d = k & (full - 1)
            if d >= half:
                d -= full
            k -= d
        else:
            d = 0
        digits.append(d)
        k >>= 1
    return digits


def _mul_reference(k: int, P: Point, params: DomainParams, ctr: Optional[OpCounters]) -> Point:
    # left-to-right double-and-add, affine
    R = INFINITY
    for bit in bin(k)[2:]:
        R = _affine_double(R, params, ctr)
        if bit == "1":
            R = _affine_add(R, P, params, ctr)
    return R


def _mul_wnaf(k: int, P: Point, params: DomainParams, ctr: Optional[OpCounters], width: int = WNAF_WIDTH) -> Point:
    digits = wnaf_digits(k, width)
    q = params.q
    # odd multiples P, 3P, ..., (2^(w-1) - 1)P
    base = to_jacobian(P)
    twice = jacobian_double(base, params, ctr)
    odd = [base]
    for _ in range((1 << (width - 2)) - 1):
        odd.append(jacobian_add(odd[-1], twice, params, ctr))
    table = _normalize_batch(odd, params)
    acc: JacobianPoint = (1, 1, 0)
    for d in reversed(digits):
        acc = jacobian_double(acc, params, ctr)
        if d:
            T = table[abs(d) >> 1]
            if T.is_infinity:
                continue
            y = T.y if d > 0 else -T.y % q
            acc = _jacobian_add_affine(acc, T.x, y, params, ctr)
    return from_jacobian(acc, params)


def _build_fixed_base_table(P: Point, params: DomainParams) -> list:
    w = FIXED_BASE_WINDOW
    windows = -(-params.n.bit_length() // w)
    rows = []
    start = to_jacobian(P)
    for _ in range(windows):
        row = [start]
        for _ in range((1 << w) - 2):
            row.append(jacobian_add(row[-1], start, params))
        rows.append(row)
        for _ in range(w):
            start = jacobian_double(start, params)
    flat = _normalize_batch([J for row in rows for J in row], params)
    span = (1 << w) - 1
    return [flat[i * span:(i + 1) * span] for i in range(windows)]


def _mul_fixed_base(k: int, params: DomainParams, ctr: Optional[OpCounters]) -> Optional[Point]:
    table = params._fixed_base_table
    w = FIXED_BASE_WINDOW
    if k.bit_length() > w * len(table):
        return None
    mask = (1 << w) - 1
    acc: JacobianPoint = (1, 1, 0)
    j = 0
    while k:
        d = k & mask
        if d:
            T = table[j][d - 1]
            if not T.is_infinity:
                acc = _jacobian_add_affine(acc, T.x, T.y, params, ctr)
        k >>= w
        j += 1
    return from_jacobian(acc, params)


SCALAR_MUL_METHODS = ("auto", "reference", "wnaf", "fixed-base")


def scalar_mul(
    k: int,
    P: Point,
    params: DomainParams,
    counters: Optional[OpCounters] = None,
    method: str = "auto",
) -> Point:
    """Return k*P.

    ``reference`` is affine double-and-add; ``wnaf`` is width-5 NAF over
    Jacobian coordinates; ``fixed-base`` uses a precomputed window table
    for the base point G. ``auto`` picks fixed-base for G, wnaf otherwise.
    The scalar is never reduced mod n.
    """
    if k < 0:
        raise ValueError("negative scalar")
    if method not in SCALAR_MUL_METHODS:
        raise ValueError(f"unknown scalar multiplication method {method!r}")
    if counters is not None:
        counters.ecpm += 1
    if k == 0 or P.is_infinity:
        return INFINITY
    if method == "reference":
        return _mul_reference(k, P, params, counters)
    if method in ("auto", "fixed-base") and P == params.G:
        R = _mul_fixed_base(k, params, counters)
        if R is not None:
            return R
    elif method == "fixed-base":
        raise ValueError("fixed-base multiplication is only available for G")
    return _mul_wnaf(k, P, params, counters)


# Validation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PointValidation:
    """Outcome of ephemeral/public point validation.

    ``condition`` names the first failed rule: ``a`` (R is O),
    ``b`` (coordinates not canonical residues mod q), ``c`` (off-curve).
    """

    ok: bool
    condition: Optional[str] = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.ok


def validate_point(R: Point, params: DomainParams) -> PointValidation:
    if not isinstance(R, Point) or R.is_infinity:
        return PointValidation(False, "a", "point is the identity O")
    q = params.q
    for label, v in (("x", R.x), ("y", R.y)):
        if not isinstance(v, int) or isinstance(v, bool) or not 0 <= v < q:
            return PointValidation(False, "b", f"{label} is not a residue in [0, q)")
    if not is_on_curve(R, params):
        return PointValidation(False, "c", "point does not satisfy the curve equation")
    return PointValidation(True)


class Check(NamedTuple):
    name: str
    passed: bool
    detail: str = ""


@dataclass
class ValidationReport:
    checks: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def __bool__(self) -> bool:
        return self.passed

    def __iter__(self) -> Iterator[Check]:
        return iter(self.checks)

    def add(self, name: str, passed: bool, detail: str = "") -> None:
        self.checks.append(Check(name, bool(passed), detail))

    def failures(self) -> list:
        return [c for c in self.checks if not c.passed]

    def format(self) -> str:
        return "\n".join(f"{'PASS' if c.passed else 'FAIL'} {c.name}" + (f": {c.detail}" if c.detail else "")
                         for c in self.checks)


def validate_domain_params(params: DomainParams) -> ValidationReport:
    """Run every domain-parameter rule and report each one; never raises."""
    report = ValidationReport()
    q, a, b, n, G = params.q, params.a, params.b, params.n, params.G

    report.add("q_prime", is_probable_prime(q), f"q = {q:#x}")
    report.add("non_singular", (4 * a ** 3 + 27 * b ** 2) % q != 0, "4a^3 + 27b^2 != 0 mod q")
    g_ok = not G.is_infinity and validate_point(G, params).ok
    report.add("G_on_curve", g_ok, "G is a finite point satisfying the curve equation")
    report.add("n_prime", is_probable_prime(n), f"n = {n:#x}")
    try:
        order_ok = not G.is_infinity and scalar_mul(n, G, params, method="reference").is_infinity
        detail = "n*G = O"
    except ZeroDivisionError as exc:
        order_ok, detail = False, f"n*G failed: {exc}"
    report.add("n_times_G_is_O", order_ok, detail)
    report.add("n_gt_4_sqrt_q", n > 0 and n * n > 16 * q, "n > 4*sqrt(q)")
    report.add("n_ne_q", n != q, "n != q")
    bad = [i for i in range(1, params.V + 1) if n > 1 and pow(q, i, n) == 1]
    report.add(
        "mov_condition",
        not bad,
        f"n does not divide q^i - 1 for 1 <= i <= {params.V}" + (f"; divides for i = {bad}" if bad else ""),
    )
    return report


def compute_x_tilde(x_R: int, params: DomainParams) -> int:
    """2^c + (x_R mod 2^c) with c = ceil(f/2)."""
    c = params.c
    return (1 << c) + (int(x_R) & ((1 << c) - 1))


# Encoding
# ---------------------------------------------------------------------------


def encode_point(P: Point, params: DomainParams) -> bytes:
    if P.is_infinity:
        return b"\x00"
    w = params.field_bytes
    return b"\x04" + P.x.to_bytes(w, "big") + P.y.to_bytes(w, "big")


def decode_point(data: bytes, params: DomainParams) -> Point:
    """Parse the wire encoding. The result is NOT validated."""
    if data == b"\x00":
        return INFINITY
    w = params.field_bytes
    if len(data) != 1 + 2 * w or data[0] != 0x04:
        raise ValueError("malformed point encoding")
    return Point(int.from_bytes(data[1:1 + w], "big"), int.from_bytes(data[1 + w:], "big"))


def encode_scalar(k: int, params: DomainParams) -> bytes:
    return k.to_bytes(params.scalar_bytes, "big")


def decode_scalar(data: bytes, params: DomainParams) -> int:
    if len(data) != params.scalar_bytes:
        raise ValueError("malformed scalar encoding")
    return int.from_bytes(data, "big")
