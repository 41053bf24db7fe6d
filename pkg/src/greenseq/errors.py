"""Exception hierarchy. Every error the package raises derives from GreenSeqError."""


class GreenSeqError(Exception):
    pass


class InvalidQuiver(GreenSeqError, ValueError):
    pass


class QuiverParseError(InvalidQuiver):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class MutationAtFrozen(GreenSeqError, ValueError):
    pass


class NotBicolored(GreenSeqError):
    """A non-frozen vertex is both green and red, or neither."""


class NotGreen(GreenSeqError, ValueError):
    pass


class UnknownQuiverShape(GreenSeqError, ValueError):
    pass


class InternalInconsistency(GreenSeqError, AssertionError):
    """Two independent computations of the same quantity disagree."""


class NoNonzeroHom(GreenSeqError, ValueError):
    pass


class WindowTooSmall(GreenSeqError, ValueError):
    pass


class NotASlice(GreenSeqError, ValueError):
    pass


class NotASource(GreenSeqError, ValueError):
    pass


class NotComparable(GreenSeqError, ValueError):
    pass


class RankTooSmall(GreenSeqError, ValueError):
    pass
