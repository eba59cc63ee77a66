"""Exception hierarchy shared across the package.

Each class carries the CLI exit code used when the error escapes to the
command line (0 ok, 2 config, 3 regime, 4 resolution, 5 detection).
"""


class LmtPsiError(Exception):
    exit_code = 1


class ConfigError(LmtPsiError):
    """Invalid configuration or input data. Collects all violations."""

    exit_code = 2

    def __init__(self, message, violations=None):
        self.violations = list(violations) if violations else []
        if self.violations:
            message = message + "\n  - " + "\n  - ".join(self.violations)
        super().__init__(message)


class RegimeError(LmtPsiError):
    """Parameters outside the validity regime of an approximation."""

    exit_code = 3


class ResolutionError(LmtPsiError):
    """Grid or integration step too coarse for the requested accuracy."""

    exit_code = 4


class DetectionError(LmtPsiError):
    """A required signal feature could not be located."""

    exit_code = 5
