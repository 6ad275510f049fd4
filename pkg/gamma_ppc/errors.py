"""errors.py

Exception types raised by the operations in this package
"""

from typing import Optional


class PreconditionError(ValueError):
    """An operation was called with arguments outside its domain"""


class DensityError(PreconditionError):
    """A piecewise-constant density failed validation"""


class ConfigValidationError(ValueError):
    """A configuration or spec document failed schema validation

    :param message: what was wrong
    :param path: the location of the offending field, e.g. ``gammas[0]`` or ``spec.params.gamma``
    """

    def __init__(self, message: str, path: Optional[str] = None) -> None:
        self.message = message
        self.path = path or '<root>'
        super().__init__(f'{self.path}: {message}')
