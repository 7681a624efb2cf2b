"""Exception hierarchy shared by the library and the CLI.

The CLI maps ``ConfigError`` to exit status 1 and ``DataError`` to exit status 2.
"""

from pathlib import Path


class MoodcoError(Exception):
    """Base class for every error raised by moodco."""


class ConfigError(MoodcoError):
    """Invalid configuration, missing input paths, unusable lexicon or bindings."""


class BindingError(ConfigError):
    """A mood indicator term is bound to a feature the lexicon cannot provide."""


class LexiconFormatError(ConfigError):
    def __init__(self, path: Path | str, line: int, message: str):
        self.path = Path(path)
        self.line = line
        super().__init__(f"{self.path}:{line}: {message}")


class DataError(MoodcoError):
    """Malformed corpus data or statistics that cannot be computed on it."""


class CorpusFormatError(DataError):
    def __init__(self, path: Path | str, line: int | None, message: str):
        self.path = Path(path)
        self.line = line
        where = f"{self.path}:{line}" if line is not None else str(self.path)
        super().__init__(f"{where}: {message}")


class DegenerateStatisticsError(DataError):
    """Zero variance, empty groups or tables too small for the requested test."""


class UnbalancedSampleError(DataError):
    pass


class MissingMetricsError(DataError):
    """A profile lacks the Facebook metrics an analysis needs."""


class OutputError(ConfigError):
    """The output location cannot be created or written."""
