"""Exception types shared across the package."""


class TranslabError(Exception):
    """Base class for all package-specific errors."""


class DomainError(TranslabError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ShapeError(TranslabError, ValueError):
    """A function has the wrong domain/codomain shape for an operation."""


class EnumerationCapError(TranslabError, RuntimeError):
    """A cube enumeration would exceed the hard cell cap."""


class RangeEscapeError(TranslabError, RuntimeError):
    """A composed evaluation left the chart's admissible region."""


class ConfigError(TranslabError, ValueError):
    """A sweep configuration is malformed or inconsistent."""
