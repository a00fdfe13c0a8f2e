"""Exceptions raised by mixedurn.

Each one carries the CLI exit code it maps to, so `cli.main` can translate
failures without knowing where they came from.
"""

from mixedurn.constants import EXIT_CHECK_FAILED, EXIT_FRONTIER, EXIT_VALIDATION


class UrnError(Exception):
    exit_code = EXIT_VALIDATION


class ParameterError(UrnError, ValueError):
    """A run was requested with arguments that make no sense together."""


class TheoryDomainError(ParameterError):
    """The affine map or its envelope is undefined for these parameters."""


class FrontierLimitExceeded(UrnError):
    exit_code = EXIT_FRONTIER

    def __init__(self, level: int, size: int, limit: int) -> None:
        self.level = level
        self.size = size
        self.limit = limit
        super().__init__(
            f"exact distribution frontier reached {size} states at level {level} "
            f"(limit {limit})"
        )


class ValidationFailed(UrnError):
    exit_code = EXIT_CHECK_FAILED

    def __init__(self, failed: list[str]) -> None:
        self.failed = failed
        super().__init__(f"validation checks failed: {', '.join(failed)}")


class InvariantViolation(UrnError):
    """An internal consistency check failed: a normalization or a fixed point."""

    exit_code = EXIT_CHECK_FAILED
