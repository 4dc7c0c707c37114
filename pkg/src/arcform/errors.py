"""Exception hierarchy shared by all analysis modules."""


class ArcformError(Exception):
    """Base class for all errors raised by this package."""


class ScoreFormatError(ArcformError):
    """Malformed input: bad .notes text or bad MIDI bytes."""


class NotesParseError(ScoreFormatError):
    """Text-format parse failure; carries the 1-based source line."""

    def __init__(self, message: str, line: int):
        super().__init__(f"{message}, line {line}")
        self.line = line


class MidiError(ScoreFormatError):
    """Standard MIDI File structural failure."""


class AnalysisError(ArcformError):
    """Analysis precondition violated (empty input, missing key, ...)."""


class GrammarError(ArcformError):
    """Invalid form string, bad tree path, or derivation bound exceeded."""
