"""
Exception hierarchy for the engine.

Library code raises these; only the command line layer turns them into exit codes.
"""

from typing import Optional


class EngineError(Exception):
    """Base class for every error raised by the engine"""


class PresentationError(EngineError, ValueError):
    """An input presentation or request violates a named invariant"""

    def __init__(self, message: str, invariant: Optional[str] = None):
        super().__init__(message)
        self.invariant = invariant


class ParseError(PresentationError):
    """Syntax error in a presentation document"""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}", invariant="syntax")
        self.line = line
        self.column = column


class HypothesisError(PresentationError):
    """A mathematical precondition of the computation does not hold"""


class InvariantError(EngineError):
    """A computed structural identity failed"""

    def __init__(self, message: str, degree: Optional[int] = None):
        super().__init__(message)
        self.degree = degree


class TruncationError(EngineError):
    """The request needs degrees beyond the configured truncation"""

    def __init__(self, message: str, degree: Optional[int] = None):
        super().__init__(message)
        self.degree = degree


class DimensionMismatchError(EngineError, ValueError):
    """Vector or matrix shapes do not agree"""
