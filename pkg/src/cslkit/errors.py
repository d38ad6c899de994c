"""Exception types shared across cslkit."""


class CslError(Exception):
    """Base class for cslkit errors."""


class InvalidInput(CslError, ValueError):
    """Malformed or out-of-contract input (CLI exit code 2)."""


class CertificateFailure(CslError):
    """A certificate did not verify (CLI exit code 3)."""
