"""Exception types shared across the toolkit."""


class NccError(Exception):
    """Base class for all toolkit errors."""


# registry
class DuplicateName(NccError):
    pass


class InvalidName(NccError):
    pass


class UnknownName(NccError):
    pass


# corpus
class MalformedRecord(NccError):
    def __init__(self, line_number: int, reason: str):
        super().__init__(f"line {line_number}: {reason}")
        self.line_number = line_number
        self.reason = reason


class EmptyCorpus(NccError):
    pass


class EmptyBatch(NccError):
    pass


# synparse
class DedentMismatch(NccError):
    def __init__(self, line: int, column: int):
        super().__init__(f"dedent to a level not on the indent stack at line {line}")
        self.line = line
        self.column = column


class UnterminatedString(NccError):
    def __init__(self, line: int):
        super().__init__(f"unterminated string literal starting at line {line}")
        self.line = line


class ColonWithoutBlock(NccError):
    pass


class UnexpectedIndent(NccError):
    pass


# ncore / models
class ShapeMismatch(NccError):
    pass


class TargetOutOfRange(NccError):
    pass


class EmptyInput(NccError):
    pass


class BatchTooSmall(NccError):
    pass


class LengthMismatch(NccError):
    pass


# trainer
class ResolveFailure(NccError):
    pass


class DataMissing(NccError):
    pass


class NonFiniteLoss(NccError):
    pass


class BadMagic(NccError):
    pass


class CorruptDirectory(NccError):
    pass
