"""Randomness sources.

A randomness source is any callable ``rng(nbytes) -> bytes``.
"""

from __future__ import annotations

import random
import secrets
from typing import Callable

from .ec import DomainParams
from .errors import RandomnessFailure

RandomSource = Callable[[int], bytes]

MAX_DRAWS = 256


def system_rng(nbytes: int) -> bytes:
    return secrets.token_bytes(nbytes)


def seeded_rng(seed: bytes) -> RandomSource:
    """Deterministic stream for reproducible test vectors. Not for real keys."""
    gen = random.Random(int.from_bytes(seed, "big") if seed else 0)
    return gen.randbytes


def scripted_rng(values) -> RandomSource:
    """Yield the given integers, one scalar-width draw each (test helper)."""
    it = iter(values)

    def draw(nbytes: int) -> bytes:
        try:
            return next(it).to_bytes(nbytes, "big")
        except StopIteration:
            raise RandomnessFailure("scripted randomness exhausted") from None

    return draw


def random_scalar(rng: RandomSource, params: DomainParams) -> int:
    """Rejection-sample a uniform integer in [1, n-1]."""
    nbytes = params.scalar_bytes
    mask = (1 << params.f) - 1
    for _ in range(MAX_DRAWS):
        try:
            raw = rng(nbytes)
        except OSError as exc:
            raise RandomnessFailure(str(exc)) from exc
        if not isinstance(raw, (bytes, bytearray)) or len(raw) != nbytes:
            raise RandomnessFailure(f"randomness source returned {len(raw) if raw else 0} of {nbytes} bytes")
        k = int.from_bytes(raw, "big") & mask
        if 1 <= k < params.n:
            return k
    raise RandomnessFailure(f"no scalar in range after {MAX_DRAWS} draws")
