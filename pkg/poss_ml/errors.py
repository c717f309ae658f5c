# -*- coding: utf-8 -*-
"""Exceptions raised by poss_ml.

Every error is a `ValueError` so that scripts can treat bad inputs
uniformly. Searches that find nothing return None instead of raising.
"""


class PossMLError(ValueError):
    """Base class of all poss_ml errors."""


class DatasetSyntaxError(PossMLError):
    """Raised when a dataset, theory or clause text cannot be parsed.

    Attributes
        line_number -- 1-based line of the offending text (None if unknown)
    """

    def __init__(self, message, line_number=None):
        if line_number is not None:
            message = 'Line {}: {}'.format(line_number, message)
        super().__init__(message)
        self.line_number = line_number


class InconsistentDefaultsError(PossMLError):
    """Raised when no default of the remaining set is tolerated, i.e. the
    rational closure of the default set is undefined."""


class GuardViolationError(PossMLError):
    """Raised when an exhaustive procedure is called on an instance larger
    than it is allowed to enumerate."""


class EmptyDatasetError(PossMLError):
    """Raised when an operation needs at least one labeled example."""
