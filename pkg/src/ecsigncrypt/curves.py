"""Built-in domain parameters and curve-file loading."""

from __future__ import annotations

import sys
from pathlib import Path
from typing import Union

from .ec import DomainParams, Point

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

# FIPS 186-2, Appendix 6, curve P-192
P192 = DomainParams(
    name="P-192",
    q=2**192 - 2**64 - 1,
    a=-3,
    b=0x64210519E59C80E70FA7E9AB72243049FEB8DEECC146B9B1,
    G=Point(
        0x188DA80EB03090F67CBF20EB43A18800F4FF0AFD82FF1012,
        0x07192B95FFC8DA78631011ED6B24CDD573F977A11E794811,
    ),
    n=0xFFFFFFFFFFFFFFFFFFFFFFFF99DEF836146BC9B1B4D22831,
)

# y^2 = x^3 + 2x + 2 over F_17; G = (5, 1) generates the whole group of order 19.
# Test oracle only.
TOY17 = DomainParams(name="toy-17", q=17, a=2, b=2, G=Point(5, 1), n=19)

CURVES = {"p192": P192, "P-192": P192, "toy-17": TOY17}


def get_curve(name: str) -> DomainParams:
    try:
        return CURVES[name]
    except KeyError:
        raise KeyError(f"unknown curve {name!r}; choose from p192, toy-17") from None


def _int(v: Union[int, str]) -> int:
    if isinstance(v, int):
        return v
    return int(v, 0)


def load_curve_file(path: Union[str, Path]) -> DomainParams:
    """Read a TOML file with keys name, q, a, b, gx, gy, n (ints or 0x-strings)."""
    with open(path, "rb") as fh:
        doc = tomllib.load(fh)
    try:
        return DomainParams(
            name=str(doc.get("name", Path(path).stem)),
            q=_int(doc["q"]),
            a=_int(doc["a"]),
            b=_int(doc["b"]),
            G=Point(_int(doc["gx"]), _int(doc["gy"])),
            n=_int(doc["n"]),
            V=int(doc.get("V", 20)),
        )
    except KeyError as exc:
        raise ValueError(f"curve file missing key {exc}") from None
