"""Command-line front end.

Exit status: 0 accepted, 1 cryptographic rejection, 2 I/O failure,
3 parameter/format validation failure.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path
from typing import List, Optional

from . import costmodel, formats
from .curves import get_curve, load_curve_file
from .ec import decode_point, encode_point, validate_domain_params, validate_point
from .errors import Rejection, SigncryptError
from .formats import FormatError, read_text, write_text
from .pki import CertificateAuthority, RevocationList, keygen, revoke
from .rng import seeded_rng, system_rng
from .signcrypt import JudgePackage, Variant, judge_verify, signcrypt, unsigncrypt_with_material
from .variants import DEFAULT_OMEGA, ReplayPolicy, fixed_clock, public_verify, select_variant, unsigncrypt_ts

EXIT_OK, EXIT_REJECT, EXIT_IO, EXIT_INVALID = 0, 1, 2, 3
DEFAULT_VALIDITY = 365 * 24 * 3600


class ValidationFailed(Exception):
    pass


# Context helpers
# ---------------------------------------------------------------------------


def _params(args):
    if args.curve_file:
        params = load_curve_file(args.curve_file)
        report = validate_domain_params(params)
        if not report.passed:
            raise ValidationFailed("curve file failed validation:\n" + report.format())
        return params
    try:
        return get_curve(args.curve)
    except KeyError as exc:
        raise ValidationFailed(str(exc.args[0])) from None


def _rng(args):
    return seeded_rng(bytes.fromhex(args.seed_hex)) if args.seed_hex else system_rng


def _now(args) -> int:
    return args.now if args.now is not None else int(time.time())


def _crl(path: Optional[str]) -> RevocationList:
    if not path:
        return RevocationList()
    p = Path(path)
    if not p.exists():
        return RevocationList()
    return formats.load_crl(read_text(p))


def _ca_public(args, params):
    return formats.load_public(read_text(args.ca), params)[1]


def _cert(path, params):
    return formats.load_certificate(read_text(path), params)


def _key(path, params):
    return formats.load_key(read_text(path), params)


# Commands
# ---------------------------------------------------------------------------


def cmd_keygen(args) -> int:
    params = _params(args)
    kp = keygen(args.id, params, _rng(args))
    write_text(args.out, formats.dump_key(kp, params))
    if args.pub_out:
        write_text(args.pub_out, formats.dump_public(kp, params))
    print(encode_point(kp.public, params).hex())
    return EXIT_OK


def cmd_ca_init(args) -> int:
    params = _params(args)
    ca = CertificateAuthority(keygen(args.id, params, _rng(args)), params)
    write_text(args.out, formats.dump_ca_state(ca))
    if args.pub_out:
        write_text(args.pub_out, formats.dump_public(ca.keypair, params))
    print(encode_point(ca.public, params).hex())
    return EXIT_OK


def cmd_ca_issue(args) -> int:
    params = _params(args)
    ca = formats.load_ca_state(read_text(args.ca_state), params)
    subject = _key(args.key, params)
    now = _now(args)
    t0 = args.not_before if args.not_before is not None else now
    t1 = args.not_after if args.not_after is not None else t0 + DEFAULT_VALIDITY
    cert = ca.issue(subject.id, subject.public, (t0, t1), rng=_rng(args), proof_private=subject.private)
    write_text(args.out, formats.dump_certificate(cert, params))
    write_text(args.ca_state, formats.dump_ca_state(ca))
    print(f"issued serial {cert.serial} to {cert.subject_id}")
    return EXIT_OK


def cmd_ca_revoke(args) -> int:
    if args.serial is None and not args.cert:
        raise ValidationFailed("give --serial or --cert")
    serial = args.serial
    if serial is None:
        serial = _cert(args.cert, _params(args)).serial
    crl = revoke(_crl(args.crl), serial, _now(args))
    write_text(args.crl, formats.dump_crl(crl))
    print(f"revoked serial {serial}")
    return EXIT_OK


def cmd_signcrypt(args) -> int:
    params = _params(args)
    variant = select_variant(args.timestamp, args.public_verifiable)
    now = _now(args)
    msg = signcrypt(
        Path(args.infile).read_bytes(),
        _key(args.key, params),
        _cert(args.cert, params),
        _cert(args.to, params),
        ca_public=_ca_public(args, params),
        crl=_crl(args.crl),
        now=now,
        params=params,
        rng=_rng(args),
        variant=variant,
        timestamp=now if variant is Variant.TIMESTAMPED else None,
    )
    write_text(args.out, formats.dump_message(msg, params))
    return EXIT_OK


def cmd_unsigncrypt(args) -> int:
    params = _params(args)
    msg = formats.load_message(read_text(args.infile), params)
    common = dict(ca_public=_ca_public(args, params), crl=_crl(args.crl), params=params)
    recipient, recipient_cert, sender_cert = _key(args.key, params), _cert(args.cert, params), _cert(args.sender, params)
    if msg.variant is Variant.TIMESTAMPED:
        policy = ReplayPolicy(args.omega, fixed_clock(_now(args)))
        M, material = unsigncrypt_ts(msg, recipient, recipient_cert, sender_cert, policy=policy,
                                     return_material=True, **common)
    else:
        M, material = unsigncrypt_with_material(msg, recipient, recipient_cert, sender_cert,
                                                now=_now(args), **common)
    Path(args.out).write_bytes(M)
    if args.judge_out:
        write_text(args.judge_out, formats.dump_judge_package(JudgePackage(msg, M, material), params))
    return EXIT_OK


def cmd_judge(args) -> int:
    params = _params(args)
    pkg = formats.load_judge_package(read_text(args.package), params)
    verdict = judge_verify(pkg, _cert(args.sender, params), ca_public=_ca_public(args, params),
                           crl=_crl(args.crl), now=_now(args), params=params)
    print(verdict)
    if not verdict:
        print(f"judge: step {verdict.step}: {verdict.reason}", file=sys.stderr)
        return EXIT_REJECT
    return EXIT_OK


def cmd_verify_public(args) -> int:
    params = _params(args)
    msg = formats.load_message(read_text(args.infile), params)
    ok = public_verify(msg, _cert(args.sender, params), ca_public=_ca_public(args, params),
                       crl=_crl(args.crl), now=_now(args), params=params)
    print("VALID" if ok else "INVALID")
    return EXIT_OK if ok else EXIT_REJECT


def _point_arg(value: str, params):
    p = Path(value)
    if p.exists():
        return formats.load_public(read_text(p), params)[1]
    return decode_point(bytes.fromhex(value), params)


def cmd_params_validate(args) -> int:
    if args.curve_file:
        params = load_curve_file(args.curve_file)
    else:
        params = get_curve(args.curve)
    if args.point:
        result = validate_point(_point_arg(args.point, params), params)
        if result:
            print("PASS point")
            return EXIT_OK
        print(f"FAIL point condition ({result.condition}): {result.detail}")
        return EXIT_INVALID
    report = validate_domain_params(params)
    print(f"{params.name}")
    print(report.format())
    return EXIT_OK if report.passed else EXIT_INVALID


def cmd_cost(args) -> int:
    profile = costmodel.CostProfile(
        zeta=args.zeta_ec,
        zeta_exp=args.zeta_exp,
        ecpm_coordinates=args.ecpm_coordinates,
        ecpa_coordinates=args.ecpa_coordinates,
        hmac_variant=args.hmac,
        n_k=args.n_k,
        scalar_pricing=args.scalar_pricing,
    )
    if args.format == "csv":
        sys.stdout.write(costmodel.cost_csv(profile))
    else:
        rows = costmodel.comparison_report(profile)
        print(costmodel.format_report(rows, profile))
        for claim, held in costmodel.ordering_claims(rows).items():
            print(f"{claim}: {'holds' if held else 'FAILS'}")
    return EXIT_OK


# Parser
# ---------------------------------------------------------------------------


def _global_flags(parser: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--curve", default=d("p192"), help="built-in curve: p192 or toy-17")
    parser.add_argument("--curve-file", default=d(None), help="TOML domain parameters")
    parser.add_argument("--seed-hex", default=d(None), help="deterministic randomness seed (testing only)")
    parser.add_argument("--now", type=int, default=d(None), help="override the clock (unix seconds)")
    parser.add_argument("--omega", type=int, default=d(DEFAULT_OMEGA), help="replay window in seconds")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ecsigncrypt", description=__doc__.splitlines()[0])
    _global_flags(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, suppress=True)
    sub = parser.add_subparsers(dest="command", required=True)

    def leaf(subparsers, name, func, help, **kw):
        p = subparsers.add_parser(name, parents=[common], help=help, **kw)
        p.set_defaults(func=func)
        return p

    p = leaf(sub, "keygen", cmd_keygen, "generate a key pair")
    p.add_argument("--id", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--pub-out")

    ca = sub.add_parser("ca", aliases=["cert"], help="certificate authority")
    ca_sub = ca.add_subparsers(dest="ca_command", required=True)
    p = leaf(ca_sub, "init", cmd_ca_init, "create a CA state file")
    p.add_argument("--id", default="CA")
    p.add_argument("--out", required=True)
    p.add_argument("--pub-out")
    p = leaf(ca_sub, "issue", cmd_ca_issue, "issue a certificate for a key file")
    p.add_argument("--ca-state", required=True)
    p.add_argument("--key", required=True, help="subject key file (possession is checked)")
    p.add_argument("--out", required=True)
    p.add_argument("--not-before", type=int)
    p.add_argument("--not-after", type=int)
    p = leaf(ca_sub, "revoke", cmd_ca_revoke, "add a serial to a revocation file")
    p.add_argument("--crl", required=True)
    p.add_argument("--serial", type=int)
    p.add_argument("--cert")

    def trust(p):
        p.add_argument("--ca", required=True, help="file with the CA public key")
        p.add_argument("--crl", help="revocation file")

    p = leaf(sub, "signcrypt", cmd_signcrypt, "signcrypt a file")
    p.add_argument("--key", required=True)
    p.add_argument("--cert", required=True)
    p.add_argument("--to", required=True, help="recipient certificate")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--timestamp", action="store_true")
    p.add_argument("--public-verifiable", action="store_true")
    trust(p)

    p = leaf(sub, "unsigncrypt", cmd_unsigncrypt, "recover and verify a message")
    p.add_argument("--key", required=True)
    p.add_argument("--cert", required=True)
    p.add_argument("--from", dest="sender", required=True, help="sender certificate")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--judge-out", help="also write a judge package")
    trust(p)

    p = leaf(sub, "judge", cmd_judge, "adjudicate a judge package")
    p.add_argument("--package", required=True)
    p.add_argument("--from", dest="sender", required=True)
    trust(p)

    p = leaf(sub, "verify-public", cmd_verify_public, "verify a public-verifiable message")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--from", dest="sender", required=True)
    trust(p)

    def validate_args(p):
        p.add_argument("--point", help="hex point encoding or a file with a public field")

    params = sub.add_parser("params", help="domain parameters")
    params_sub = params.add_subparsers(dest="params_command", required=True)
    validate_args(leaf(params_sub, "validate", cmd_params_validate, "validate parameters or a point"))
    validate_args(leaf(sub, "validate", cmd_params_validate, "same as 'params validate'"))

    p = leaf(sub, "cost", cmd_cost, "bit-operation cost comparison")
    p.add_argument("--zeta-ec", type=int, default=192)
    p.add_argument("--zeta-exp", type=int, default=1024)
    p.add_argument("--hmac", choices=sorted(costmodel.HMAC_COSTS), default="sha1")
    p.add_argument("--n-k", type=float, default=1)
    p.add_argument("--ecpm-coordinates", choices=costmodel.ECPM_COORDINATES, default="jacobian-chudnovsky")
    p.add_argument("--ecpa-coordinates", choices=costmodel.ECPA_COORDINATES, default="jacobian")
    p.add_argument("--scalar-pricing", choices=("native", "exp"), default="native")
    p.add_argument("--format", choices=("csv", "table"), default="csv")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except Rejection as exc:
        print(f"rejected: {exc}", file=sys.stderr)
        return EXIT_REJECT
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ValidationFailed, FormatError, SigncryptError, ValueError, KeyError) as exc:
        print(f"invalid: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
