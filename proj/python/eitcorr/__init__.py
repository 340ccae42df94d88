"""Lambda-medium EIT and intensity-correlation simulator."""


class ConfigError(ValueError):
    """Config text rejected; ``issues`` lists every problem found."""

    def __init__(self, message, issues=()):
        super().__init__(message)
        self.issues = list(issues)


from ._eitcorr import *  # noqa: E402,F401,F403
from ._eitcorr import NumericalError  # noqa: E402,F401

__version__ = "0.1.0"
