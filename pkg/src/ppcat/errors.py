"""Exception types shared across the package."""


class PpcatError(Exception):
    """Base class for all library errors."""


class DimensionMismatch(PpcatError):
    pass


class NotASubspace(PpcatError):
    pass


class SortMismatch(PpcatError):
    pass


class NotAdmissible(PpcatError):
    pass


class UnsupportedRelation(PpcatError):
    pass


class AlgebraMismatch(PpcatError):
    pass


class CharacteristicTooSmall(PpcatError):
    pass


class ZeroModule(PpcatError):
    pass


class UnknownVariable(PpcatError):
    pass


class UncertifiedPair(PpcatError):
    pass


class NotValidated(PpcatError):
    pass


class InducedMapUndefined(PpcatError):
    pass


class NotSplitEndo(PpcatError):
    pass


class NotMono(PpcatError):
    pass


class ParseError(PpcatError):
    """Syntax error with the position of the offending token."""

    def __init__(self, line, col, expected, found):
        self.line = line
        self.col = col
        self.expected = expected
        self.found = found
        super().__init__("%d:%d: expected %s, found %r" % (line, col, expected, found))


class SortError(PpcatError):
    pass


class UnresolvedReference(PpcatError):
    pass
