"""Exception hierarchy.

Every error raised deliberately by the package derives from
:class:`KCMDError`. The CLI maps the three subfamilies to exit codes:
:class:`DataError` (3), :class:`NumericalDegeneracy` (4) and
:class:`UsageError` (2).
"""


class KCMDError(Exception):
    """Base class for all package errors."""


class UsageError(KCMDError, ValueError):
    """Invalid parameters or configuration."""


class DataError(KCMDError, ValueError):
    """Input data violates a structural requirement."""


class NumericalDegeneracy(KCMDError, ArithmeticError):
    """A quantity needed for inference vanished."""


class ShapeMismatchError(DataError):
    pass


class LengthMismatchError(DataError):
    pass


class SampleTooSmallError(DataError):
    pass


class GridViolationError(DataError):
    pass


class RowCountMismatchError(DataError):
    pass


class ParseError(DataError):
    """Malformed numeric payload.

    ``row`` and ``column`` are 1-based positions in the data rows (the
    header line, if any, is not counted).
    """

    def __init__(self, message, path=None, row=None, column=None):
        self.path = path
        self.row = row
        self.column = column
        where = []
        if path is not None:
            where.append(str(path))
        if row is not None:
            where.append(f"row {row}")
        if column is not None:
            where.append(f"column {column}")
        prefix = ", ".join(where)
        super().__init__(f"{prefix}: {message}" if prefix else message)


class DegenerateSampleError(NumericalDegeneracy):
    pass


class DegenerateVarianceError(NumericalDegeneracy):
    pass


class UnsupportedFamilyError(UsageError):
    pass


class InvalidCertificateError(UsageError):
    pass


class OutOfRangeError(UsageError):
    pass


class BadScenarioError(UsageError):
    pass
