class QFluctError(Exception):
    """
    Base class of every error raised by qfluct
    """


class ContractViolation(QFluctError, ValueError):
    pass


class DegenerateStateError(ContractViolation):
    pass


class UnsupportedOrderError(ContractViolation):
    pass


class TruncationError(ContractViolation):
    pass


class UnsupportedOperatorError(ContractViolation):
    pass


class NonIntegrableSpectrumError(ContractViolation):
    pass


class OutOfDomainError(QFluctError, ValueError):
    """
    A closed form or estimator was asked for parameters outside its domain.
    The message names the violated condition.
    """


class DivergentEstimateError(OutOfDomainError):
    pass


class UsageError(QFluctError, ValueError):
    pass
