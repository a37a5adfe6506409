"""Exception types raised across the package."""
from __future__ import annotations


class MagicParetoError(Exception):
    pass


class ZeroVector(MagicParetoError, ValueError):
    pass


class NotUnitary(MagicParetoError, ValueError):
    pass


class DomainError(MagicParetoError, ValueError):
    pass


class ConvergenceFailure(MagicParetoError, RuntimeError):
    pass


class ClosureOverflow(MagicParetoError, RuntimeError):
    pass


class VerificationFailure(MagicParetoError):
    pass
