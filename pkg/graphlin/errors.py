# graphlin/errors.py
from __future__ import annotations

from typing import List, Optional


class GraphlinError(Exception):
    """Base class for every error raised by graphlin."""


class SpecError(GraphlinError, ValueError):
    pass


class FormatError(GraphlinError):
    """A corpus or label file could not be parsed."""

    def __init__(self, message: str, path: Optional[str] = None, line: Optional[int] = None):
        self.message = message
        self.path = path
        self.line = line
        where = path or "<stream>"
        if line is not None:
            where = f"{where}:{line}"
        super().__init__(f"{where}: {message}")

    def __reduce__(self):
        return (type(self), (self.message, self.path, self.line))


class LabelError(GraphlinError):
    pass


class LabelGrammarError(LabelError):
    """A structural label does not parse under its family's grammar."""


class IllFormedError(GraphlinError):
    """Raised by strict decoding when the label sequence needed repairs."""

    def __init__(self, repairs: List["object"]):
        self.repairs = list(repairs)
        first = self.repairs[0] if self.repairs else None
        super().__init__(f"ill-formed label sequence: {len(self.repairs)} repair(s), first: {first}")

    def __reduce__(self):
        return (type(self), (self.repairs,))


class AlignmentError(GraphlinError):
    """Gold and predicted documents do not line up sentence by sentence."""
