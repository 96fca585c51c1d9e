"""Time the scalar-multiplication paths and one signcrypt/unsigncrypt round trip on P-192.

    python3 benchmarks/bench_scalar_mul.py [-n 200]
"""

import argparse
import random
import timeit

from ecsigncrypt.curves import P192
from ecsigncrypt.ec import scalar_mul
from ecsigncrypt.pki import CertificateAuthority, RevocationList, keygen
from ecsigncrypt.rng import seeded_rng
from ecsigncrypt.signcrypt import signcrypt, unsigncrypt

NOW = 1_700_000_000


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("-n", type=int, default=200)
    args = ap.parse_args()
    rnd = random.Random(1)
    ks = [rnd.randrange(1, P192.n) for _ in range(args.n)]
    P = scalar_mul(rnd.randrange(1, P192.n), P192.G, P192)

    for method, base in (("reference", P), ("wnaf", P), ("fixed-base", P192.G)):
        it = iter(ks * 2)
        secs = timeit.timeit(lambda: scalar_mul(next(it), base, P192, method=method), number=args.n)
        print(f"{method:<11} {secs / args.n * 1e3:8.3f} ms/op")

    rng = seeded_rng(b"bench")
    ca = CertificateAuthority(keygen("CA", P192, rng), P192)
    alice, bob = keygen("alice", P192, rng), keygen("bob", P192, rng)
    ac = ca.issue("alice", alice.public, (NOW - 1, NOW + 10), proof_private=alice.private)
    bc = ca.issue("bob", bob.public, (NOW - 1, NOW + 10), proof_private=bob.private)
    trust = dict(ca_public=ca.public, crl=RevocationList(), now=NOW, params=P192)

    def trip():
        msg = signcrypt(b"x" * 1024, alice, ac, bc, rng=rng, **trust)
        unsigncrypt(msg, bob, bc, ac, **trust)

    rounds = max(args.n // 4, 1)
    secs = timeit.timeit(trip, number=rounds)
    print(f"round trip  {secs / rounds * 1e3:8.3f} ms (1 KiB, certificate checks included)")


if __name__ == "__main__":
    main()
