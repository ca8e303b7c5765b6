"""Exceptions shared across the package.

Exit-code mapping used by the CLI: InputError -> 2, GuardrailExceeded -> 3.
Law failures are report-valued, never raised.
"""


class ClubcatError(Exception):
    pass


class InputError(ClubcatError):
    """Malformed or ill-typed input (bad schema, dangling ids, wrong endpoints)."""


class SchemaError(InputError):
    """A file does not match the supported schema version or key layout."""


class GuardrailExceeded(ClubcatError):
    """A construction would exceed the configured enumeration size bounds."""
