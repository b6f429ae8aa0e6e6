"""Exception hierarchy shared by all modules."""


class MonospecError(Exception):
    """Base class for library errors."""


class ParameterError(MonospecError, ValueError):
    """An argument is outside its documented domain."""


class SizeError(ParameterError):
    """Input too large for an exhaustive routine."""


class SingularityError(MonospecError, ValueError):
    """A spectral density was evaluated at a pole."""


class DegenerateInputError(MonospecError, ValueError):
    """Data are numerically degenerate (e.g. a zero periodogram ordinate)."""


class DataError(MonospecError, ValueError):
    """Malformed input file contents."""


class HypothesisError(MonospecError, ValueError):
    """A limit-theorem hypothesis (f'(t0) < 0) does not hold."""


class HardAssertionError(MonospecError, AssertionError):
    """A structural invariant failed during a Monte Carlo run."""
