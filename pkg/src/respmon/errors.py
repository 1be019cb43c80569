"""Exception types shared across the pipeline.

Every error raised on purpose by this package derives from RespmonError so
callers can catch one base class at the CLI boundary. Errors that map onto a
builtin category also subclass it (FileNotFoundError, ValueError, OSError).
"""


class RespmonError(Exception):
    """Base class for all package-specific errors."""


class MissingFile(RespmonError, FileNotFoundError):
    def __init__(self, path):
        self.path = str(path)
        super().__init__(f"file not found: {self.path}")


class SchemaViolation(RespmonError, ValueError):
    def __init__(self, field, detail=""):
        self.field = field
        msg = f"manifest field invalid: {field}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class DuplicateTrial(RespmonError, ValueError):
    def __init__(self, subject_id, breathing_type):
        self.subject_id = subject_id
        self.breathing_type = breathing_type
        super().__init__(
            f"duplicate trial for subject {subject_id!r}, type {breathing_type}"
        )


class BadHeader(RespmonError, ValueError):
    def __init__(self, expected, found):
        self.expected = expected
        self.found = found
        super().__init__(f"bad CSV header: expected {expected!r}, found {found!r}")


class NonMonotoneTime(RespmonError, ValueError):
    def __init__(self, row):
        self.row = row
        super().__init__(f"time column not strictly increasing at line {row}")


class RaggedRow(RespmonError, ValueError):
    def __init__(self, row, detail=""):
        self.row = row
        msg = f"wrong column count at line {row}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class InvalidSpec(RespmonError, ValueError):
    def __init__(self, reason):
        self.reason = reason
        super().__init__(f"invalid generator settings: {reason}")


class IoFailure(RespmonError, OSError):
    def __init__(self, path, cause):
        self.path = str(path)
        self.cause = cause
        super().__init__(f"I/O failure on {self.path}: {cause}")


class AllRowsDropped(RespmonError, ValueError):
    pass


class EmptyMatrix(RespmonError, ValueError):
    pass


class DimensionMismatch(RespmonError, ValueError):
    pass


class InvalidOverlap(RespmonError, ValueError):
    pass


class NonPowerOfTwoLength(RespmonError, ValueError):
    def __init__(self, n):
        self.n = n
        super().__init__(f"length {n} is not a power of two")


class TooShort(RespmonError, ValueError):
    pass


class NonFiniteInput(RespmonError, ValueError):
    pass


class EmptyBand(RespmonError, ValueError):
    pass


class EmptyNode(RespmonError, ValueError):
    pass


class SingleClassTraining(RespmonError, ValueError):
    pass


class NonFiniteLoss(RespmonError, ArithmeticError):
    pass


class TooFewInstances(RespmonError, ValueError):
    pass


class BadK(RespmonError, ValueError):
    pass


class AllFoldsSkipped(RespmonError, RuntimeError):
    pass


class OneClassOnly(RespmonError, ValueError):
    def __init__(self, class_index):
        self.class_index = class_index
        super().__init__(
            f"class {class_index} is absent (or alone) in the labels; "
            "one-vs-rest ROC needs both positives and negatives"
        )


class EmptyInput(RespmonError, ValueError):
    pass
