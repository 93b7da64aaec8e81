"""Exception types shared across the package."""


class QspecError(Exception):
    """Base class for qspec errors."""


class DimensionMismatch(QspecError):
    """Operands have incompatible dimensions."""


class ZeroDivisor(QspecError):
    """Inversion of the zero quaternion."""


class NoConvergence(QspecError):
    """The eigenvalue iteration hit its sweep cap.

    Signals pathological input (or a deliberately tiny cap); the cap is
    configurable on every entry point that can raise this.
    """


class NotAlmostConvergent(QspecError):
    """A sequence is outside the domain of the partial generalized limit."""


class SequenceBoundError(QspecError):
    """A sequence term exceeded its declared sup-norm bound."""


class UnsupportedRule(QspecError):
    """An operator rule does not support the requested construction."""


class NotCommuting(QspecError):
    """A check that requires commuting operators received a non-commuting pair."""


class ParseError(QspecError):
    """Malformed input data."""


class DimensionError(ParseError):
    """Ragged rows or otherwise inconsistent matrix shape in input data."""
