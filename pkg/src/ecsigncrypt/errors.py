"""Exception hierarchy.

``Rejection`` subclasses mean a cryptographic check failed on otherwise
well-formed input; the CLI maps them to exit status 1.
"""


class SigncryptError(Exception):
    pass


class Rejection(SigncryptError):
    """A cryptographic check rejected the input."""


class ZeroInverse(SigncryptError, ZeroDivisionError):
    pass


class ModulusMismatch(SigncryptError, TypeError):
    pass


class NotOnCurve(SigncryptError, ValueError):
    pass


class RandomnessFailure(SigncryptError):
    pass


class InvalidPublicKey(SigncryptError, ValueError):
    pass


class InvalidValidityWindow(SigncryptError, ValueError):
    pass


class RetryNeeded(SigncryptError):
    """Sender drew an ephemeral scalar that makes the shared point O."""


class DegenerateSharedPoint(Rejection):
    pass


class InvalidEphemeralPoint(Rejection):
    def __init__(self, condition, detail=""):
        self.condition = condition
        super().__init__(f"ephemeral point failed condition ({condition}): {detail}")


class SignatureInvalid(Rejection):
    def __init__(self, detail):
        self.detail = detail
        super().__init__(f"signature check failed: {detail}")


class CertificateInvalid(Rejection):
    def __init__(self, which, report):
        self.which = which
        self.report = report
        failed = "; ".join(f"{c.name} ({c.detail})" for c in report.checks if not c.passed)
        super().__init__(f"{which} certificate invalid: {failed}")


class ReplayWindowViolation(Rejection):
    def __init__(self, delta, omega):
        self.delta = delta
        self.omega = omega
        super().__init__(f"replay window: T_B - T_A = {delta} not in (0, {omega})")


class UnknownKind(SigncryptError, ValueError):
    pass


class UnsupportedCoordinate(SigncryptError, ValueError):
    pass


class UnknownScheme(SigncryptError, KeyError):
    pass
