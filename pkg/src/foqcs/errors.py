"""Exceptions shared across the package.

The CLI maps these onto its exit codes: DomainError -> 2, ResourceGuardError -> 3.
Parse/IO failures stay ordinary ValueError/KeyError/json errors (exit 1).
"""


class DomainError(ValueError):
    """Invalid parameters for an operation (bad n, k out of range, ...)."""


class ResourceGuardError(RuntimeError):
    """A size guard tripped (matrix dimension, simulator width)."""
