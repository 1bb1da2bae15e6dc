# -*- coding: utf-8 -*-

"""The annotated corpus data model, its file format and its validation.

A :class:`Corpus` holds pre-tokenized :class:`Document` objects. Mentions are typed, sentence-internal and
token-disjoint spans given by inclusive ``[start, end]`` token indices, relations are typed, directed pairs of
mentions. All types are frozen values.

The file format is UTF-8 JSON with a single top-level object::

    {"mention_types": [...], "relation_types": [...], "documents": [
        {"id": "D1",
         "tokens": [{"text": "After", "sentence": 0}, ...],
         "mentions": [{"id": "M1", "type": "Activity Data", "start": 1, "end": 2}, ...],
         "relations": [{"id": "R1", "type": "Flow", "head": "M2", "tail": "M4"}, ...]}]}
"""

import json
import logging
from dataclasses import dataclass, field, replace
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from .constants import DEFAULT_MENTION_TYPES, DEFAULT_RELATION_TYPES
from .errors import CorpusParseError, CorpusValidationError
from .utils import atomic_write

__all__ = [
    'Token',
    'Mention',
    'Relation',
    'Document',
    'Corpus',
    'Violation',
    'parse_corpus',
    'serialize_corpus',
    'validate_document',
    'validate_corpus',
    'check_corpus',
    'read_corpus',
    'write_corpus',
]

logger = logging.getLogger(__name__)

Span = Tuple[int, int]


@dataclass(frozen=True)
class Token:
    """A token and the sentence it belongs to."""

    text: str
    sentence_index: int


@dataclass(frozen=True)
class Mention:
    """A typed span of tokens, given by inclusive start and end indices."""

    id: str  # noqa:A003
    mention_type: str
    start: int
    end: int

    @property
    def span(self) -> Span:  # noqa: D401
        """The inclusive token range of this mention."""
        return self.start, self.end

    def __len__(self) -> int:  # noqa: D105
        return self.end - self.start + 1

    def contains(self, index: int) -> bool:
        """Return if the token index lies within this mention."""
        return self.start <= index <= self.end


@dataclass(frozen=True)
class Relation:
    """A typed, directed relation between two mentions of the same document."""

    id: str  # noqa:A003
    relation_type: str
    head: str
    tail: str


@dataclass(frozen=True)
class Document:
    """A tokenized text with its mentions and relations."""

    id: str  # noqa:A003
    tokens: Tuple[Token, ...] = ()
    mentions: Tuple[Mention, ...] = ()
    relations: Tuple[Relation, ...] = ()

    def __post_init__(self):  # noqa: D105
        # lists given by callers are frozen into tuples
        for name in ('tokens', 'mentions', 'relations'):
            value = getattr(self, name)
            if not isinstance(value, tuple):
                object.__setattr__(self, name, tuple(value))

    @property
    def texts(self) -> List[str]:  # noqa: D401
        """The token texts of this document."""
        return [token.text for token in self.tokens]

    def __len__(self) -> int:  # noqa: D105
        return len(self.tokens)

    def get_mention(self, mention_id: str) -> Optional[Mention]:
        """Get a mention by its identifier."""
        for mention in self.mentions:
            if mention.id == mention_id:
                return mention
        return None

    def mention_text(self, mention: Mention) -> List[str]:
        """Get the token texts covered by the mention."""
        return [token.text for token in self.tokens[mention.start:mention.end + 1]]

    def sentence_spans(self) -> List[Span]:
        """Get the inclusive token ranges of the sentences, in order.

        A sentence is a maximal run of consecutive tokens sharing one sentence index.
        """
        spans = []
        start = 0
        for index in range(1, len(self.tokens) + 1):
            if index == len(self.tokens) or self.tokens[index].sentence_index != self.tokens[start].sentence_index:
                spans.append((start, index - 1))
                start = index
        return spans

    def mention_at(self, index: int) -> Optional[Mention]:
        """Get the mention covering the token index, if any."""
        for mention in self.mentions:
            if mention.contains(index):
                return mention
        return None

    def with_id(self, document_id: str) -> 'Document':
        """Return a copy of this document with another identifier."""
        return replace(self, id=document_id)


@dataclass(frozen=True)
class Corpus:
    """An ordered collection of documents and the declared tag inventories."""

    documents: Tuple[Document, ...] = ()
    mention_types: Tuple[str, ...] = field(default=DEFAULT_MENTION_TYPES)
    relation_types: Tuple[str, ...] = field(default=DEFAULT_RELATION_TYPES)

    def __post_init__(self):  # noqa: D105
        for name in ('documents', 'mention_types', 'relation_types'):
            value = getattr(self, name)
            if not isinstance(value, tuple):
                object.__setattr__(self, name, tuple(value))

    def __len__(self) -> int:  # noqa: D105
        return len(self.documents)

    def __iter__(self):  # noqa: D105
        return iter(self.documents)

    def get_document(self, document_id: str) -> Optional[Document]:
        """Get a document by its identifier."""
        for document in self.documents:
            if document.id == document_id:
                return document
        return None

    def with_documents(self, documents: Iterable[Document]) -> 'Corpus':
        """Return a corpus with the same inventories and the given documents."""
        return replace(self, documents=tuple(documents))

    def vocabulary(self) -> List[str]:
        """Get the sorted token texts of the corpus."""
        return sorted({token.text for document in self.documents for token in document.tokens})


@dataclass(frozen=True)
class Violation:
    """A broken invariant and the element it concerns."""

    rule: str
    element: str
    message: str

    def __str__(self) -> str:  # noqa: D105
        return f'{self.rule} ({self.element}): {self.message}'


def validate_document(document: Document) -> List[Violation]:
    """Check the invariants of the tokens, mentions and relations of a document.

    :returns: the violations, empty if the document is valid
    """
    violations = []
    n_tokens = len(document.tokens)

    for index, token in enumerate(document.tokens):
        if not token.text:
            violations.append(Violation('empty-token', f'token {index}', 'token text is empty'))
        elif any(character.isspace() for character in token.text):
            violations.append(Violation('whitespace-token', f'token {index}', f'token {token.text!r} has whitespace'))
        if token.sentence_index < 0:
            violations.append(Violation('sentence-order', f'token {index}', 'negative sentence index'))
        if index and token.sentence_index < document.tokens[index - 1].sentence_index:
            violations.append(Violation('sentence-order', f'token {index}', 'sentence index decreases'))

    seen_mentions = set()
    valid_spans = []
    for mention in document.mentions:
        if mention.id in seen_mentions:
            violations.append(Violation('duplicate-mention-id', mention.id, 'mention id is not unique'))
        seen_mentions.add(mention.id)

        if mention.start > mention.end:
            violations.append(Violation('span-inverted', mention.id, f'start {mention.start} > end {mention.end}'))
            continue
        if mention.start < 0 or mention.end >= n_tokens:
            violations.append(Violation(
                'span-out-of-range', mention.id,
                f'span out of range: [{mention.start},{mention.end}] in {n_tokens} tokens',
            ))
            continue
        sentences = {token.sentence_index for token in document.tokens[mention.start:mention.end + 1]}
        if len(sentences) > 1:
            violations.append(Violation('cross-sentence', mention.id, 'mention spans more than one sentence'))
        valid_spans.append(mention)

    valid_spans.sort(key=lambda mention: (mention.start, mention.end))
    for left, right in zip(valid_spans, valid_spans[1:]):
        if right.start <= left.end:
            violations.append(Violation('overlap', f'{left.id},{right.id}', 'mentions overlap'))

    seen_relations = set()
    for relation in document.relations:
        if relation.id in seen_relations:
            violations.append(Violation('duplicate-relation-id', relation.id, 'relation id is not unique'))
        seen_relations.add(relation.id)
        for endpoint in (relation.head, relation.tail):
            if endpoint not in seen_mentions:
                violations.append(Violation('dangling-endpoint', relation.id, f'unknown mention {endpoint}'))
        if relation.head == relation.tail:
            violations.append(Violation('self-relation', relation.id, 'head and tail are the same mention'))

    return violations


def validate_corpus(corpus: Corpus) -> List[Tuple[str, Violation]]:
    """Check every document and the corpus-level invariants.

    :returns: pairs of document identifier and violation
    """
    violations = []
    mention_types = set(corpus.mention_types)
    relation_types = set(corpus.relation_types)
    seen = set()
    for document in corpus.documents:
        if document.id in seen:
            violations.append((document.id, Violation('duplicate-document-id', document.id, 'document id not unique')))
        seen.add(document.id)
        violations.extend((document.id, violation) for violation in validate_document(document))
        for mention in document.mentions:
            if mention.mention_type not in mention_types:
                violations.append((document.id, Violation(
                    'unknown-mention-type', mention.id, f'type {mention.mention_type!r} not declared',
                )))
        for relation in document.relations:
            if relation.relation_type not in relation_types:
                violations.append((document.id, Violation(
                    'unknown-relation-type', relation.id, f'type {relation.relation_type!r} not declared',
                )))
    return violations


def check_corpus(corpus: Corpus) -> None:
    """Validate a corpus and raise on the violations of its first offending document.

    :raises CorpusValidationError: if the corpus breaks an invariant
    """
    violations = validate_corpus(corpus)
    if not violations:
        return
    document_id = violations[0][0]
    raise CorpusValidationError(document_id, [
        violation
        for violation_document_id, violation in violations
        if violation_document_id == document_id
    ])


def _require(obj: Mapping[str, Any], key: str, kind: type, where: str) -> Any:
    if not isinstance(obj, dict):
        raise CorpusParseError(f'{where} is not an object')
    if key not in obj:
        raise CorpusParseError(f'{where} is missing field {key!r}')
    value = obj[key]
    # bool is a subclass of int
    if not isinstance(value, kind) or (kind is int and isinstance(value, bool)):
        raise CorpusParseError(f'{where}.{key} should be {kind.__name__}')
    return value


def _document_from_json(obj: Mapping[str, Any], position: int) -> Document:
    where = f'documents[{position}]'
    document_id = _require(obj, 'id', str, where)
    tokens = [
        Token(
            text=_require(token, 'text', str, f'{where}.tokens[{i}]'),
            sentence_index=_require(token, 'sentence', int, f'{where}.tokens[{i}]'),
        )
        for i, token in enumerate(_require(obj, 'tokens', list, where))
    ]
    mentions = [
        Mention(
            id=_require(mention, 'id', str, f'{where}.mentions[{i}]'),
            mention_type=_require(mention, 'type', str, f'{where}.mentions[{i}]'),
            start=_require(mention, 'start', int, f'{where}.mentions[{i}]'),
            end=_require(mention, 'end', int, f'{where}.mentions[{i}]'),
        )
        for i, mention in enumerate(_require(obj, 'mentions', list, where))
    ]
    relations = [
        Relation(
            id=_require(relation, 'id', str, f'{where}.relations[{i}]'),
            relation_type=_require(relation, 'type', str, f'{where}.relations[{i}]'),
            head=_require(relation, 'head', str, f'{where}.relations[{i}]'),
            tail=_require(relation, 'tail', str, f'{where}.relations[{i}]'),
        )
        for i, relation in enumerate(_require(obj, 'relations', list, where))
    ]
    return Document(id=document_id, tokens=tokens, mentions=mentions, relations=relations)


def parse_corpus(raw: Union[bytes, str]) -> Corpus:
    """Parse and validate a corpus.

    :param raw: the UTF-8 encoded corpus file content
    :raises CorpusParseError: if the content is not well-formed
    :raises CorpusValidationError: if a document breaks an invariant
    """
    if isinstance(raw, bytes):
        try:
            raw = raw.decode('utf-8')
        except UnicodeDecodeError as e:
            raise CorpusParseError(f'invalid UTF-8 at byte {e.start}') from e
    try:
        obj = json.loads(raw)
    except json.JSONDecodeError as e:
        raise CorpusParseError(e.msg, line=e.lineno, column=e.colno) from e

    documents = [
        _document_from_json(document, position)
        for position, document in enumerate(_require(obj, 'documents', list, 'corpus'))
    ]
    kwargs = {}
    for key in ('mention_types', 'relation_types'):
        if key in obj:
            values = _require(obj, key, list, 'corpus')
            if not all(isinstance(value, str) for value in values):
                raise CorpusParseError(f'corpus.{key} should only contain strings')
            kwargs[key] = tuple(values)

    corpus = Corpus(documents=tuple(documents), **kwargs)
    check_corpus(corpus)
    logger.debug(f'parsed {len(corpus)} documents')
    return corpus


def _document_to_json(document: Document) -> Dict[str, Any]:
    return {
        'id': document.id,
        'tokens': [{'text': token.text, 'sentence': token.sentence_index} for token in document.tokens],
        'mentions': [
            {'id': mention.id, 'type': mention.mention_type, 'start': mention.start, 'end': mention.end}
            for mention in document.mentions
        ],
        'relations': [
            {'id': relation.id, 'type': relation.relation_type, 'head': relation.head, 'tail': relation.tail}
            for relation in document.relations
        ],
    }


def corpus_to_json(corpus: Corpus) -> Dict[str, Any]:
    """Convert the corpus to its JSON object."""
    return {
        'mention_types': list(corpus.mention_types),
        'relation_types': list(corpus.relation_types),
        'documents': [_document_to_json(document) for document in corpus.documents],
    }


def serialize_corpus(corpus: Corpus) -> bytes:
    """Serialize the corpus in canonical form: sorted keys, input document order, trailing newline."""
    text = json.dumps(corpus_to_json(corpus), sort_keys=True, ensure_ascii=False, separators=(',', ':'))
    return (text + '\n').encode('utf-8')


def read_corpus(path: str) -> Corpus:
    """Read and validate a corpus file."""
    with open(path, 'rb') as file:
        return parse_corpus(file.read())


def write_corpus(corpus: Corpus, path: str) -> None:
    """Validate and write a corpus file; nothing is written if validation fails."""
    check_corpus(corpus)
    atomic_write(path, serialize_corpus(corpus))
