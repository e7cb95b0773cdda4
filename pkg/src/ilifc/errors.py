"""Exception hierarchy shared by the codecs, bounds and oracles."""


class IlifcError(Exception):
    """Base class for every error raised by this package."""


class InvalidParams(IlifcError, ValueError):
    pass


class InvalidR(InvalidParams):
    pass


class LengthTooSmall(InvalidParams):
    """The code length violates a length condition needed by a bound."""


class FullSlice(IlifcError):
    pass


class IndexMismatch(IlifcError):
    pass


class InvalidPattern(IlifcError):
    """An active slice does not have a unique cyclic-run start index."""


class SameData(IlifcError, ValueError):
    """The requested data equals the stored data, so no write takes place."""


class Exhausted(IlifcError):
    """Every inversion cell is already at level q-1."""


class UnrealizableOccupancy(IlifcError, ValueError):
    pass


class StateSpaceTooLarge(IlifcError):
    pass
