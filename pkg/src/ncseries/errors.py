"""Exception hierarchy; the CLI maps each branch to an exit code."""


class NCSeriesError(Exception):
    pass


class PreconditionError(NCSeriesError, ValueError):
    """An operation was called outside its domain."""


class NotAUnit(PreconditionError):
    pass


class NotAnAutomorphism(PreconditionError):
    pass


class StableRegionUndecided(NCSeriesError):
    """The JSR bounds straddle the radius, so membership cannot be certified."""


class OutsideStableRegion(PreconditionError):
    pass


class NumericError(NCSeriesError, ArithmeticError):
    pass


class NoWitness(NumericError):
    pass


class SamplingError(NumericError):
    pass


class ExpansionTooLarge(PreconditionError):
    pass
