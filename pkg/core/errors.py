"""
MAPFlow Errors
Exception types shared by the model and the command line
"""

from typing import Optional


class MapError(Exception):
    """Base class for every MAPFlow failure"""


class ValidationError(MapError, ValueError):
    """Rejected parameters or inputs; `flag` names the CLI option when known"""

    def __init__(self, message: str, flag: Optional[str] = None):
        super().__init__(message)
        self.flag = flag

    def __str__(self) -> str:
        message = super().__str__()
        if self.flag:
            return f"{message} ({self.flag})"
        return message


class DimensionError(ValidationError):
    """State vector does not match the system size"""


class EmptyInputError(ValidationError):
    """Nothing to plot or analyse"""


class SteadyStateError(MapError):
    """(I - M) is singular: the system has no steady state"""


class HorizonError(MapError):
    """Trajectory ends before the transition threshold is met"""


class SuiteError(MapError):
    """One (architecture, configuration) run of the suite failed"""

    def __init__(self, arch: str, config: str, cause: Exception):
        super().__init__(f"run {arch}@{config} failed: {cause}")
        self.arch = arch
        self.config = config
        self.cause = cause
