# -*- coding: utf-8 -*-

"""Lexical resources used by the rule-based techniques.

A lexicon is loaded from a directory of UTF-8 files, all optional except the fillers:

``lexicon.tsv``
    ``surface<TAB>POS<TAB>syn|ant<TAB>target`` per row
``abbreviations.tsv``
    ``short<TAB>long`` per row, the long form given as whitespace-separated tokens
``fillers.txt``
    one filler phrase per line
``stopwords.txt``
    one token per line
``pos.tsv``
    ``surface<TAB>POS`` per row, overriding the tags implied by ``lexicon.tsv``

Blank lines and lines starting with ``#`` are skipped. Lookups are case-insensitive.
"""

import logging
import os
from collections import defaultdict
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Tuple

from .constants import OTHER, POS_TAGS
from .errors import LexiconError

__all__ = [
    'LexicalEntry',
    'Lexicon',
    'load_lexicon',
    'get_default_lexicon',
    'coarse_pos',
    'match_case',
    'DEFAULT_LEXICON_DIRECTORY',
]

logger = logging.getLogger(__name__)

DEFAULT_LEXICON_DIRECTORY = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'data', 'lexicon')

LEXICON_FILE = 'lexicon.tsv'
ABBREVIATIONS_FILE = 'abbreviations.tsv'
FILLERS_FILE = 'fillers.txt'
STOPWORDS_FILE = 'stopwords.txt'
POS_FILE = 'pos.tsv'

SYNONYM = 'syn'
ANTONYM = 'ant'


@dataclass(frozen=True)
class LexicalEntry:
    """The synonyms and antonyms of a (surface form, POS) pair."""

    synonyms: Tuple[str, ...] = ()
    antonyms: Tuple[str, ...] = ()


@dataclass(frozen=True)
class Lexicon:
    """Synonyms, antonyms, abbreviations, fillers, stop words and coarse POS tags."""

    entries: Mapping[Tuple[str, str], LexicalEntry] = field(default_factory=dict)
    abbreviations: Mapping[str, Tuple[str, ...]] = field(default_factory=dict)
    fillers: Tuple[str, ...] = ('uhm',)
    stopwords: FrozenSet[str] = frozenset()
    pos: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):  # noqa: D105
        object.__setattr__(self, 'fillers', tuple(self.fillers))
        object.__setattr__(self, 'stopwords', frozenset(word.lower() for word in self.stopwords))
        object.__setattr__(self, 'abbreviations', {short: tuple(long) for short, long in self.abbreviations.items()})
        object.__setattr__(self, 'pos', {surface.lower(): tag for surface, tag in self.pos.items()})
        if not self.fillers:
            raise LexiconError('filler list is empty')
        for (surface, tag), entry in self.entries.items():
            if tag not in POS_TAGS:
                raise LexiconError(f'unknown POS tag {tag!r} for {surface!r}')
            if any(synonym.lower() == surface for synonym in entry.synonyms):
                raise LexiconError(f'{surface!r} is listed as its own synonym')
        long_forms = {}
        for short, long in self.abbreviations.items():
            key = tuple(token.lower() for token in long)
            if key in long_forms:
                raise LexiconError(f'long form {" ".join(long)!r} of {short!r} already belongs to {long_forms[key]!r}')
            long_forms[key] = short
        object.__setattr__(self, '_long_forms', long_forms)
        by_surface = defaultdict(list)
        for surface, tag in sorted(self.entries):
            by_surface[surface].append(tag)
        object.__setattr__(self, '_tags_by_surface', dict(by_surface))

    def _lookup(self, word: str, tag: Optional[str], attribute: str) -> List[str]:
        surface = word.lower()
        tags = [tag] if tag is not None else self._tags_by_surface.get(surface, [])
        rv = []
        for candidate_tag in tags:
            entry = self.entries.get((surface, candidate_tag))
            if entry is None:
                continue
            for target in getattr(entry, attribute):
                if target not in rv:
                    rv.append(target)
        return rv

    def synonyms(self, word: str, tag: Optional[str] = None) -> List[str]:
        """Get the synonyms of the word, for one POS tag or for all of them."""
        return self._lookup(word, tag, 'synonyms')

    def antonyms(self, word: str, tag: Optional[str] = None) -> List[str]:
        """Get the antonyms of the word, for one POS tag or for all of them."""
        return self._lookup(word, tag, 'antonyms')

    def is_stopword(self, word: str) -> bool:
        """Return if the word is a stop word."""
        return word.lower() in self.stopwords

    def expand(self, short: str) -> Optional[Tuple[str, ...]]:
        """Get the tokens of the long form of an abbreviation."""
        return self.abbreviations.get(short)

    def contract(self, tokens: Iterable[str]) -> Optional[str]:
        """Get the abbreviation of a long form given as tokens."""
        return self._long_forms.get(tuple(token.lower() for token in tokens))

    @property
    def long_forms(self) -> Mapping[Tuple[str, ...], str]:  # noqa: D401
        """The lowercased long forms and their abbreviations."""
        return self._long_forms

    @property
    def is_empty(self) -> bool:  # noqa: D401
        """If this lexicon has no synonym or antonym entries."""
        return not self.entries


def coarse_pos(lexicon: Lexicon, text: str) -> str:
    """Get the coarse POS tag of a token, ``OTHER`` if it is unknown."""
    return lexicon.pos.get(text.lower(), OTHER)


def match_case(original: str, replacement: str) -> str:
    """Capitalize the replacement if the replaced token was capitalized."""
    if original[:1].isupper() and replacement[:1].islower():
        return replacement[:1].upper() + replacement[1:]
    return replacement


def _read_rows(path: str, n_columns: int) -> Iterable[Tuple[int, List[str]]]:
    with open(path, encoding='utf-8') as file:
        for line_number, line in enumerate(file, start=1):
            line = line.rstrip('\r\n')
            if not line.strip() or line.startswith('#'):
                continue
            row = line.split('\t')
            if len(row) != n_columns or not all(cell.strip() for cell in row):
                raise LexiconError(f'expected {n_columns} non-empty columns, got {row!r}', path=path, line=line_number)
            yield line_number, [cell.strip() for cell in row]


def _read_lines(path: str) -> List[str]:
    with open(path, encoding='utf-8') as file:
        return [
            line.strip()
            for line in file
            if line.strip() and not line.startswith('#')
        ]


def _read_entries(path: str, pos: Dict[str, str]) -> Dict[Tuple[str, str], LexicalEntry]:
    synonyms: Dict[Tuple[str, str], List[str]] = defaultdict(list)
    antonyms: Dict[Tuple[str, str], List[str]] = defaultdict(list)
    for line_number, (surface, tag, relation, target) in _read_rows(path, 4):
        if tag not in POS_TAGS:
            raise LexiconError(f'unknown POS tag {tag!r}', path=path, line=line_number)
        key = surface.lower(), tag
        if relation == SYNONYM:
            if target.lower() == key[0]:
                raise LexiconError(f'{surface!r} is listed as its own synonym', path=path, line=line_number)
            bucket = synonyms[key]
        elif relation == ANTONYM:
            bucket = antonyms[key]
        else:
            raise LexiconError(f'unknown relation {relation!r}, expected syn or ant', path=path, line=line_number)
        if target not in bucket:
            bucket.append(target)
        pos.setdefault(key[0], tag)
        if ' ' not in target:
            pos.setdefault(target.lower(), tag)
    return {
        key: LexicalEntry(synonyms=tuple(synonyms.get(key, ())), antonyms=tuple(antonyms.get(key, ())))
        for key in sorted(set(synonyms) | set(antonyms))
    }


def _read_abbreviations(path: str) -> Dict[str, Tuple[str, ...]]:
    rv = {}
    long_forms = {}
    for line_number, (short, long) in _read_rows(path, 2):
        if short in rv:
            raise LexiconError(f'duplicate abbreviation {short!r}', path=path, line=line_number)
        tokens = tuple(long.split())
        key = tuple(token.lower() for token in tokens)
        if key in long_forms:
            raise LexiconError(f'duplicate long form {long!r}', path=path, line=line_number)
        rv[short] = tokens
        long_forms[key] = short
    return rv


def load_lexicon(
    path: str,
    *,
    abbreviations_path: Optional[str] = None,
    fillers_path: Optional[str] = None,
    stopwords_path: Optional[str] = None,
    pos_path: Optional[str] = None,
) -> Lexicon:
    """Load a lexicon from a directory of lexicon files or from a single ``lexicon.tsv``.

    :param path: a directory with the standard file names, or the path to a synonym/antonym TSV file
    :param abbreviations_path: overrides the abbreviation file
    :param fillers_path: overrides the filler file. If there is none, the bundled fillers are used.
    :param stopwords_path: overrides the stop word file
    :param pos_path: overrides the POS file
    :raises LexiconError: if a file is malformed
    """
    if os.path.isdir(path):
        directory, lexicon_path = path, os.path.join(path, LEXICON_FILE)
    else:
        directory, lexicon_path = os.path.dirname(path), path

    def _resolve(explicit: Optional[str], name: str) -> Optional[str]:
        if explicit is not None:
            return explicit
        candidate = os.path.join(directory, name)
        return candidate if os.path.exists(candidate) else None

    pos: Dict[str, str] = {}
    pos_path = _resolve(pos_path, POS_FILE)
    if pos_path:
        for line_number, (surface, tag) in _read_rows(pos_path, 2):
            if tag not in POS_TAGS:
                raise LexiconError(f'unknown POS tag {tag!r}', path=pos_path, line=line_number)
            pos[surface.lower()] = tag

    entries = _read_entries(lexicon_path, pos) if os.path.exists(lexicon_path) else {}

    abbreviations_path = _resolve(abbreviations_path, ABBREVIATIONS_FILE)
    abbreviations = _read_abbreviations(abbreviations_path) if abbreviations_path else {}

    stopwords_path = _resolve(stopwords_path, STOPWORDS_FILE)
    stopwords = frozenset(word.lower() for word in _read_lines(stopwords_path)) if stopwords_path else frozenset()

    fillers_path = _resolve(fillers_path, FILLERS_FILE)
    if fillers_path:
        fillers = tuple(_read_lines(fillers_path))
        if not fillers:
            raise LexiconError('filler list is empty', path=fillers_path)
    else:
        logger.info(f'no filler file next to {lexicon_path}, using the bundled fillers')
        fillers = get_default_lexicon().fillers

    lexicon = Lexicon(entries=entries, abbreviations=abbreviations, fillers=fillers, stopwords=stopwords, pos=pos)
    logger.info(f'loaded lexicon from {path}: {len(entries)} entries, {len(abbreviations)} abbreviations')
    return lexicon


@lru_cache(maxsize=1)
def get_default_lexicon() -> Lexicon:
    """Load the bundled process-domain lexicon."""
    return load_lexicon(DEFAULT_LEXICON_DIRECTORY)
