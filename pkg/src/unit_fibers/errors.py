"""Exception hierarchy shared by all modules."""


class UnitFibersError(Exception):
    """Base class for every error raised by this package."""


class InvalidArgumentError(UnitFibersError, ValueError):
    pass


class OutOfRegionError(UnitFibersError, ValueError):
    """A parameter or point lies outside the certified region."""


class NotInRegionError(UnitFibersError):
    """No fiber of the construction passes through the point."""


class DegeneratePairError(UnitFibersError, ValueError):
    pass


class UndefinedLinkednessError(UnitFibersError):
    """Linkedness asked of fibers that intersect or touch."""


class DegenerateConfigurationError(UnitFibersError):
    """A plane crossing falls inside the tolerance band around the sphere."""


class UnsupportedFormatError(UnitFibersError, ValueError):
    pass
