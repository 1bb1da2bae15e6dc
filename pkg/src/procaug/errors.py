# -*- coding: utf-8 -*-

"""Exceptions raised by procaug."""

from typing import Optional, Sequence

__all__ = [
    'ProcaugError',
    'CorpusParseError',
    'CorpusValidationError',
    'EditError',
    'LexiconError',
    'ProviderError',
    'UnknownTechniqueError',
    'InvalidConfigError',
    'AugmentationError',
    'BaselineError',
    'EvaluationError',
    'DanglingEndpointError',
    'OptimizationError',
]


class ProcaugError(Exception):
    """Base class for errors raised by procaug."""


class CorpusParseError(ProcaugError, ValueError):
    """Raised when a corpus file is not well-formed.

    Syntax errors carry their line and column; structural errors name the path of the offending field instead.
    """

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        super().__init__(message if line is None else f'line {line}, column {column}: {message}')
        self.line = line
        self.column = column


class CorpusValidationError(ProcaugError, ValueError):
    """Raised when a document breaks one of the corpus invariants."""

    def __init__(self, document_id: str, violations: Sequence):
        self.document_id = document_id
        self.violations = list(violations)
        rules = '; '.join(str(violation) for violation in self.violations)
        super().__init__(f'document {document_id}: {rules}')


class EditError(ProcaugError, ValueError):
    """Raised when an edit refers to an index outside of the document."""


class LexiconError(ProcaugError, ValueError):
    """Raised when a lexicon file is malformed."""

    def __init__(self, message: str, path: str = '', line: int = 0):
        super().__init__(f'{path}:{line}: {message}' if path else message)
        self.path = path
        self.line = line


class ProviderError(ProcaugError):
    """Raised when a paraphrase provider fails or answers malformed data."""


class UnknownTechniqueError(ProcaugError, KeyError):
    """Raised when a technique identifier is not registered."""

    def __init__(self, technique_id: str):
        super().__init__(technique_id)
        self.technique_id = technique_id

    def __str__(self) -> str:  # noqa: D105
        return f'unknown technique: {self.technique_id}'


class InvalidConfigError(ProcaugError, ValueError):
    """Raised when a technique configuration lies outside of its parameter space."""


class AugmentationError(ProcaugError):
    """Raised when an augmenter produces an invalid document."""


class BaselineError(ProcaugError, ValueError):
    """Raised when a baseline model can not be trained or loaded."""


class EvaluationError(ProcaugError, ValueError):
    """Raised when an evaluation can not be run on the given input."""


class DanglingEndpointError(EvaluationError):
    """Raised when a relation points to a mention that does not exist."""


class OptimizationError(ProcaugError):
    """Raised when a hyper-parameter search produced no usable trial."""
