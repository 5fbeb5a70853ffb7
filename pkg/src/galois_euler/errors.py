"""Exception hierarchy.  The CLI maps :class:`EngineError` to exit code 3."""


class EngineError(Exception):
    pass


class NonMonicError(EngineError):
    pass


class NotSquarefreeError(EngineError):
    pass


class NotPrimeError(EngineError):
    pass


class NotAPowerOfPError(EngineError):
    pass


class OrderCapExceededError(EngineError):
    pass


class MissingCyclotomicCharacterError(EngineError):
    pass


class SizeCapExceededError(EngineError):
    pass


class NotCyclicError(EngineError):
    pass


class NotElementaryAbelianError(EngineError):
    pass


class MissingRepresentationError(EngineError):
    pass


class EmptyLedgerError(EngineError):
    pass


class UnknownClassificationError(EngineError):
    pass


class InvalidGroupError(EngineError):
    """Table, action or character fails a structural check."""


class SchemaError(Exception):
    """Scenario input does not parse; exit code 2."""
