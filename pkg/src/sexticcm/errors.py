"""Exception hierarchy shared by every module.

The CLI maps these onto exit codes: invalid input -> 1, internal or
certification failure -> 2, not-found / no-witness -> 3.
"""


class SexticCMError(Exception):
    """Base class for all errors raised by the package."""

    exit_code = 2


class InvalidInput(SexticCMError, ValueError):
    exit_code = 1


class InternalError(SexticCMError, RuntimeError):
    """A certificate that must hold by construction did not."""

    exit_code = 2


class NotFound(SexticCMError, LookupError):
    exit_code = 3


class NoWitness(NotFound):
    exit_code = 3


class NotNormalizable(InvalidInput):
    """No permutation of the three factors makes both (1,2) and (1,3) entries nonzero."""


class BadReduction(InvalidInput):
    """Point counting requested at a prime where the model is not smooth."""

    def __init__(self, p, reason):
        super().__init__(f"bad reduction at p = {p}: {reason}")
        self.p = p
        self.reason = reason
