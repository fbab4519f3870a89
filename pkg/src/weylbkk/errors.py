"""Exception hierarchy shared by all modules."""


class WeylBKKError(Exception):
    """Base class for every error raised by this package."""


class RingMismatch(WeylBKKError):
    pass


class Mismatch(WeylBKKError):
    """Operands disagree on the number of generator pairs or on the ring."""


class DivisionByZero(WeylBKKError, ZeroDivisionError):
    pass


class NoInverse(WeylBKKError):
    pass


class NotPositiveCharacteristic(WeylBKKError):
    pass


class NotInFrobeniusImage(WeylBKKError):
    def __init__(self, value, message=None):
        self.value = value
        super().__init__(message or f"{value} is not a p-th power")


class EmptyInput(WeylBKKError):
    pass


class NotCentral(WeylBKKError):
    def __init__(self, witness, message=None):
        self.witness = witness
        super().__init__(message or f"element is not central: {witness}")


class NotDivisibleByP(WeylBKKError):
    pass


class NotCentralResult(WeylBKKError):
    pass


class RelationViolation(WeylBKKError):
    def __init__(self, i, j, witness):
        self.i, self.j, self.witness = i, j, witness
        super().__init__(f"[f(z{i + 1}), f(z{j + 1})] = {witness} violates the Weyl relations")


class NotSymplectic(WeylBKKError):
    pass


class PreconditionViolated(WeylBKKError):
    pass


class Overflow(WeylBKKError):
    pass


class ParseError(WeylBKKError):
    """Malformed expression text; ``position`` is a 0-based character offset."""

    def __init__(self, message, position=None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class IndexOutOfRange(ParseError):
    pass


class LiteralNotInRing(ParseError):
    pass
