"""Exception hierarchy.

DomainError subclasses map to CLI exit code 1, MalformedInput to exit code 2.
"""


class TropigonError(Exception):
    pass


class DomainError(TropigonError):
    pass


class FieldMismatch(DomainError):
    pass


class ZeroInput(DomainError):
    pass


class BothZero(DomainError):
    pass


class DivByZero(DomainError):
    pass


class NotProper(DomainError):
    pass


class NotLattice(DomainError):
    pass


class WrongField(DomainError):
    pass


class ZeroModule(DomainError):
    pass


class OutOfDomain(DomainError):
    pass


class InvalidSection(DomainError):
    def __init__(self, prime, message=""):
        self.prime = prime
        super().__init__(message or f"section invalid at prime over {getattr(prime, 'p', prime)}")


class MalformedInput(TropigonError):
    pass
