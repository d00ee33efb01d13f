"""
Exception hierarchy shared by every stage of the pipeline.

Library code raises these; only the command-line front end turns them into
exit codes.
"""

from typing import Optional


class ModelSwitchingError(Exception):
    """Base class for all errors raised by this package."""


class InvalidArgumentError(ModelSwitchingError, ValueError):
    """A precondition or configuration invariant was violated."""


class DatasetParseError(InvalidArgumentError):
    """
    A dataset file could not be parsed.

    :param message: What went wrong.
    :param line: 1-based line number in the file (the header is line 1).
    """

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        self.reason = message
        where = f"line {line}: " if line is not None else ""
        super().__init__(f"{where}{message}")


class ModelFormatError(InvalidArgumentError):
    """A model document is malformed or uses an unsupported format version."""


class StageError(ModelSwitchingError):
    """
    A failure inside a named pipeline stage.

    The original exception is always attached as ``__cause__``.

    :param stage: Human-readable stage name, e.g. ``"candidate training"``.
    :param index: Position of the stage in a chain, when there is one.
    """

    def __init__(self, stage: str, index: Optional[int] = None, detail: str = ""):
        self.stage = stage
        self.index = index
        where = f"stage {index} ({stage})" if index is not None else stage
        super().__init__(f"{where} failed: {detail}" if detail else f"{where} failed")
