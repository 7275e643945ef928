"""Exception hierarchy shared across the toolkit.

The CLI maps these onto exit codes: DataError -> 2, NumericsError -> 3.
Plain ValueError is used for programmer-level precondition violations.
"""


class SimulMTError(Exception):
    """Base class for toolkit errors."""


class DataError(SimulMTError):
    """Malformed or inconsistent input data (bad schema, bounds, codes)."""


class NumericsError(SimulMTError):
    """Numeric failure: non-finite loss, undefined statistic, etc."""
