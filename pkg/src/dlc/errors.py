"""Shared exception types."""


class DlcError(Exception):
    pass


class FlagViolation(DlcError, TypeError):
    """A connective was used that the flag profile marks undefined."""


class ArityMismatch(DlcError, TypeError):
    pass


class TypeMismatch(DlcError, TypeError):
    pass


class IndexOutOfRange(DlcError, TypeError):
    pass


class ValidationError(DlcError, ValueError):
    pass


class ParseError(DlcError, ValueError):
    def __init__(self, msg, line=None, col=None):
        super().__init__(msg)
        self.line = line
        self.col = col


class DuplicateDeclaration(DlcError, ValueError):
    pass


class UndeclaredIdentifier(DlcError, ValueError):
    pass


class UndefinedConnective(DlcError):
    """Interpretation clause marked N.A. for the selected logic."""


class UnresolvedFunction(DlcError, KeyError):
    pass


class CarrierError(DlcError, ArithmeticError):
    """Indeterminate extended-real form or unsupported carrier feature."""


class DomainError(DlcError, ArithmeticError):
    pass


class RejectedLogic(DlcError, ValueError):
    pass


class StepError(DlcError):
    """A proof step failed to match its rule schema."""


class RuleNotInCalculus(StepError):
    pass


class SchemaMismatch(StepError):
    def __init__(self, msg, path=()):
        super().__init__(msg)
        self.path = tuple(path)


class PremiseArityMismatch(StepError):
    pass
