import random
import re
from dataclasses import dataclass

import pytest

from ecsigncrypt.curves import P192, TOY17
from ecsigncrypt.pki import CertificateAuthority, KeyPair, RevocationList, keygen
from ecsigncrypt.rng import seeded_rng

NOW = 1_700_000_000
VALIDITY = (NOW - 86_400, NOW + 365 * 86_400)


def brute_force_group(q, a, b, G):
    """Oracle: every curve point by exhaustive search, and the chain G, 2G, ...

    Uses textbook affine formulas with its own inversion so it shares no
    code with the library.
    """

    def inv(x):
        for y in range(1, q):
            if x * y % q == 1:
                return y
        raise ZeroDivisionError

    def add(P, Q):
        if P is None:
            return Q
        if Q is None:
            return P
        (x1, y1), (x2, y2) = P, Q
        if x1 == x2 and (y1 + y2) % q == 0:
            return None
        if P == Q:
            lam = (3 * x1 * x1 + a) * inv(2 * y1 % q) % q
        else:
            lam = (y2 - y1) * inv((x2 - x1) % q) % q
        x3 = (lam * lam - x1 - x2) % q
        return (x3, (lam * (x1 - x3) - y1) % q)

    points = [(x, y) for x in range(q) for y in range(q) if (y * y - x ** 3 - a * x - b) % q == 0]
    chain = [None, G]
    while chain[-1] is not None:
        chain.append(add(chain[-1], G))
    return points, chain[:-1], add


@pytest.fixture(scope="session")
def toy():
    return TOY17


@pytest.fixture(scope="session")
def p192():
    return P192


@pytest.fixture(scope="session")
def toy_group():
    """(all affine points, [O, G, 2G, ..., 18G], oracle add) for the toy curve."""
    return brute_force_group(17, 2, 2, (5, 1))


@dataclass
class World:
    params: object
    ca: CertificateAuthority
    alice: KeyPair
    bob: KeyPair
    alice_cert: object
    bob_cert: object
    crl: RevocationList
    now: int

    @property
    def trust(self):
        return dict(ca_public=self.ca.public, crl=self.crl, now=self.now, params=self.params)

    def fresh(self, id, rng=None):
        kp = keygen(id, self.params, rng) if rng else keygen(id, self.params)
        return kp, self.ca.issue(id, kp.public, VALIDITY, proof_private=kp.private)


def make_world(params, seed=b"world"):
    rng = seeded_rng(seed)
    ca = CertificateAuthority(keygen("CA", params, rng), params)
    alice = keygen("alice", params, rng)
    bob = keygen("bob", params, rng)
    ac = ca.issue("alice", alice.public, VALIDITY, rng=rng, proof_private=alice.private)
    bc = ca.issue("bob", bob.public, VALIDITY, rng=rng, proof_private=bob.private)
    return World(params, ca, alice, bob, ac, bc, RevocationList(), NOW)


@pytest.fixture(scope="module")
def world():
    return make_world(P192)


@pytest.fixture(scope="module")
def toy_world():
    return make_world(TOY17)


@pytest.fixture
def rnd():
    return random.Random(0xC0FFEE)


# acceptance summary: one line per criterion
_criteria = []


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    marker = report.user_properties and dict(report.user_properties).get("criterion")
    if marker:
        _criteria.append((marker, report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    groups = {}
    for name, outcome in _criteria:
        groups.setdefault(re.match(r"AC\d+", name).group(), []).append((name, outcome == "passed"))
    for key in sorted(groups, key=lambda k: int(k[2:])):
        parts = groups[key]
        ok = all(p for _, p in parts)
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {key}")
        for name, passed in parts:
            terminalreporter.write_line(f"      {'pass' if passed else 'FAIL'}  {name}")
