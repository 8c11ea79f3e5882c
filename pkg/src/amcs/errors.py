"""Exception hierarchy shared by all modules."""


class AmcsError(Exception):
    """Base class for errors raised by this package."""


class DimensionError(AmcsError, ValueError):
    """Matrix or vector has the wrong shape."""


class DomainError(AmcsError, ValueError):
    """An argument lies outside the domain of the operation."""


class NumericDomainError(DomainError):
    """Non-finite values were supplied or produced."""


class ContractError(AmcsError, ValueError):
    """A precondition on the inputs (unitarity, axial field, ...) is violated."""


class ChartSingularityError(DomainError):
    """The point lies outside the stereographic chart (zeta -> infinity)."""


class IntegrationError(AmcsError, RuntimeError):
    """Time stepping produced non-finite values.

    Parameters
    ----------
    message : str
    time : float
        Time at which the failure was detected.
    partial : ndarray, optional
        Values at the grid samples reached before the failure.
    partial_times : ndarray, optional
    """

    def __init__(self, message, time, partial=None, partial_times=None):
        super().__init__(f"{message} (t={time!r})")
        self.time = time
        self.partial = partial
        self.partial_times = partial_times


class ConfigError(AmcsError, ValueError):
    """Experiment configuration could not be parsed or validated.

    ``location`` is a JSON path (``field.kind``) or ``line N`` for syntax
    errors.
    """

    def __init__(self, message, location=None):
        text = message if location is None else f"{location}: {message}"
        super().__init__(text)
        self.location = location


class BenchmarkError(AmcsError, RuntimeError):
    """Benchmark paths disagree; timings would be meaningless."""
