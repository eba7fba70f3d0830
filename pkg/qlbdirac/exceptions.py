"""
Errors raised by the numerical core.

Every error carries a human readable :attr:`~QLBError.msg`
and a stable :attr:`~QLBError.code` that callers can switch on.
"""


class QLBError(Exception):
    """
    Base class of all numerical errors.

    .. autoattribute:: msg
        :annotation:

    .. autoattribute:: code
        :annotation:
    """

    #: The error as a human readable string.
    msg = None

    #: The error code as a string. Use this to check the type of error.
    code = None

    default_code = 'error'

    def __init__(self, message, code=None, **kwargs):
        self.msg = message
        self.code = code or self.default_code
        super().__init__(message)
        for key, value in kwargs.items():
            setattr(self, key, value)

    def __str__(self):
        return self.msg

    def __repr__(self):
        return '<{cls}: ({code}) {msg}>'.format(
            cls=type(self).__name__, code=self.code, msg=self.msg)


class InvalidAxis(QLBError, ValueError):
    default_code = 'invalid_axis'


class InvalidGrid(QLBError, ValueError):
    default_code = 'invalid_grid'


class InvalidScatteringMatrix(QLBError):
    """
    A collision generator is not anti-Hermitian, so its exponential
    would not be unitary.
    """
    default_code = 'not_antihermitian'


class NonUnitaryMatrix(QLBError):
    default_code = 'not_unitary'


class NonFiniteDensity(QLBError):
    default_code = 'non_finite_density'


class PacketOutsideGrid(QLBError, ValueError):
    default_code = 'packet_outside_grid'


class IncommensurateWave(QLBError, ValueError):
    default_code = 'incommensurate_wave'


class UndefinedVelocity(QLBError, ValueError):
    default_code = 'undefined_velocity'


class OracleTooLarge(QLBError, ValueError):
    default_code = 'oracle_too_large'


class InvariantViolation(QLBError):
    """
    A run drifted away from a conserved quantity by more than its tolerance.
    """
    default_code = 'norm_drift'


class InvalidParameter(QLBError, ValueError):
    default_code = 'invalid_parameter'
