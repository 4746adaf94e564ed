"""Exception types shared across the analysis pipeline."""


class SecritError(Exception):
    """Base class for all tool errors."""


class RootNotFound(SecritError):
    """Scan root does not exist or is not a directory."""


class UnreadablePath(SecritError):
    """A file under the scan root could not be read.

    Collected per file by the scanner; never aborts a whole scan.
    """


class ParseFailure(SecritError):
    """No declaration could be recovered from a source file."""


class SpanOutOfRange(SecritError):
    """A method span does not fit the file it claims to come from."""


class NotConcrete(SecritError):
    """Metric requested for a method without a body."""


class EmptyBody(SecritError):
    """Prompt requested for a method with an empty body."""


class EmptyInput(SecritError):
    """Binning requested for an empty assessment list."""


class CorruptCacheEntry(SecritError):
    """A persisted explanation cache entry failed validation."""


class ConfigError(SecritError):
    """Tool configuration file is malformed or inconsistent."""
