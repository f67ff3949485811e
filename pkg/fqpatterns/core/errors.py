"""
Error hierarchy. Every error carries the CLI exit code it maps to:

- ValidationFailure   -> 2  (a documented precondition was violated)
- ResourceCapExceeded -> 3  (a configured cap would be exceeded)
- InvariantBreach     -> 4  (a self-check failed; this is a bug)
"""


class PatternError(Exception):
    exit_code = 4


class ValidationFailure(PatternError):
    exit_code = 2


class NotAPrimePower(ValidationFailure):
    pass


class DimensionMismatch(ValidationFailure):
    pass


class EmptySet(ValidationFailure):
    pass


class CharTwo(ValidationFailure):
    pass


class DuplicatePoints(ValidationFailure):
    pass


class WrongCardinality(ValidationFailure):
    pass


class BadParams(ValidationFailure):
    pass


class ResourceCapExceeded(PatternError):
    exit_code = 3


class TooLarge(ResourceCapExceeded):
    def __init__(self, what: str, value: int, cap: int, setting: str):
        self.what = what
        self.value = value
        self.cap = cap
        self.setting = setting
        super().__init__(f"{what} = {value} exceeds cap {cap} (raise FQP_{setting} to allow)")


class InvariantBreach(PatternError):
    exit_code = 4
