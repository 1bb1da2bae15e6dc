# -*- coding: utf-8 -*-

"""Primitive token-level edits that remap mention spans exactly.

Every edit returns a new, valid document together with a :class:`RemapReport`. Edits that can not be applied
without destroying an annotation (emptying a mention, swapping a labelled with an unlabelled token) are not
errors: they are recorded in :attr:`RemapReport.edits_rejected` and leave the document unchanged. Indices outside
of the document raise :class:`procaug.errors.EditError`.

Remapping rules:

- insertion strictly inside a mention (``start < position <= end``) extends it, insertion at a boundary does not
- deletion shrinks mentions, a deletion that would empty a mention is rejected
- a replaced range lying within one mention stays covered by that mention, other replacements behave as a
  deletion followed by an insertion at the same position
- swaps are allowed between two unlabelled tokens or two tokens of the same mention
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from functools import singledispatch
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Set, Tuple, Union

from .constants import PUNCTUATION
from .corpus import Document, Mention, Token
from .errors import EditError

__all__ = [
    'SentencePolicy',
    'InsertTokens',
    'DeleteTokens',
    'ReplaceSpan',
    'SwapTokens',
    'PermuteSentences',
    'MergeSentences',
    'Edit',
    'Rejection',
    'RemapReport',
    'Segment',
    'apply_edit',
    'apply_edits',
    'free_spans',
    'segments',
    'is_interior',
]

logger = logging.getLogger(__name__)

Span = Tuple[int, int]


class SentencePolicy(Enum):
    """Which neighbour's sentence inserted tokens join."""

    NEXT = 'next'
    PREVIOUS = 'previous'


@dataclass(frozen=True)
class InsertTokens:
    """Insert tokens before the token at the position (a position equal to the token count appends)."""

    position: int
    texts: Tuple[str, ...]
    sentence_policy: SentencePolicy = SentencePolicy.NEXT

    def __post_init__(self):  # noqa: D105
        object.__setattr__(self, 'texts', tuple(self.texts))


@dataclass(frozen=True)
class DeleteTokens:
    """Delete the tokens at the positions."""

    positions: FrozenSet[int]

    def __post_init__(self):  # noqa: D105
        object.__setattr__(self, 'positions', frozenset(self.positions))


@dataclass(frozen=True)
class ReplaceSpan:
    """Replace the inclusive token range with new tokens."""

    start: int
    end: int
    texts: Tuple[str, ...]

    def __post_init__(self):  # noqa: D105
        object.__setattr__(self, 'texts', tuple(self.texts))


@dataclass(frozen=True)
class SwapTokens:
    """Exchange the texts of two tokens."""

    i: int
    j: int


@dataclass(frozen=True)
class PermuteSentences:
    """Reorder whole sentences: new sentence ``t`` is old sentence ``permutation[t]``."""

    permutation: Tuple[int, ...]

    def __post_init__(self):  # noqa: D105
        object.__setattr__(self, 'permutation', tuple(self.permutation))


@dataclass(frozen=True)
class MergeSentences:
    """Join the sentence at the given position with the following one."""

    first_sentence_index: int
    punctuation: FrozenSet[str] = PUNCTUATION


Edit = Union[InsertTokens, DeleteTokens, ReplaceSpan, SwapTokens, PermuteSentences, MergeSentences]


@dataclass(frozen=True)
class Rejection:
    """An edit that was not applied."""

    edit: Edit
    reason: str
    mention_ids: Tuple[str, ...] = ()


@dataclass(frozen=True)
class RemapReport:
    """How token indices moved under one or more edits.

    The index map is strictly increasing on surviving tokens for every edit but
    :class:`PermuteSentences`.
    """

    index_map: Mapping[int, int]
    mentions_shrunk: Tuple[str, ...] = ()
    edits_rejected: Tuple[Rejection, ...] = field(default=())

    @property
    def rejected_mention_ids(self) -> List[str]:  # noqa: D401
        """The mentions named by rejected edits."""
        return [mention_id for rejection in self.edits_rejected for mention_id in rejection.mention_ids]


def _identity(document: Document) -> Dict[int, int]:
    return {index: index for index in range(len(document))}


def _reject(document: Document, edit: Edit, reason: str, mention_ids: Iterable[str] = ()) -> Tuple[
    Document, RemapReport,
]:
    mention_ids = tuple(mention_ids)
    logger.debug(f'{document.id}: rejected {edit}: {reason} {mention_ids}')
    return document, RemapReport(
        index_map=_identity(document),
        edits_rejected=(Rejection(edit=edit, reason=reason, mention_ids=mention_ids),),
    )


def _rebuild(document: Document, tokens: Sequence[Token], spans: Mapping[str, Span]) -> Document:
    mentions = tuple(
        Mention(id=mention.id, mention_type=mention.mention_type, start=spans[mention.id][0],
                end=spans[mention.id][1])
        for mention in document.mentions
    )
    return Document(id=document.id, tokens=tuple(tokens), mentions=mentions, relations=document.relations)


def _check_index(document: Document, index: int, *, allow_end: bool = False) -> None:
    upper = len(document) if allow_end else len(document) - 1
    if isinstance(index, bool) or not isinstance(index, int) or not 0 <= index <= upper:
        raise EditError(f'{document.id}: index {index} out of range [0,{upper}]')


def _check_texts(texts: Sequence[str]) -> None:
    for text in texts:
        if not text or any(character.isspace() for character in text):
            raise EditError(f'invalid token text {text!r}')


def is_interior(document: Document, position: int) -> bool:
    """Return if inserting at the position would land strictly inside a mention."""
    return any(mention.start < position <= mention.end for mention in document.mentions)


def _insertion_sentence(document: Document, position: int, policy: SentencePolicy) -> int:
    if not document.tokens:
        return 0
    if policy is SentencePolicy.PREVIOUS and position > 0 or position == len(document):
        return document.tokens[position - 1].sentence_index
    return document.tokens[position].sentence_index


@singledispatch
def _apply(edit, document: Document) -> Tuple[Document, RemapReport]:
    raise EditError(f'unknown edit: {edit!r}')


@_apply.register
def _insert(edit: InsertTokens, document: Document) -> Tuple[Document, RemapReport]:
    position = edit.position
    _check_index(document, position, allow_end=True)
    _check_texts(edit.texts)
    k = len(edit.texts)
    if not k:
        return document, RemapReport(index_map=_identity(document))

    sentence = _insertion_sentence(document, position, edit.sentence_policy)
    tokens = list(document.tokens)
    tokens[position:position] = [Token(text=text, sentence_index=sentence) for text in edit.texts]

    spans = {}
    for mention in document.mentions:
        if mention.start < position <= mention.end:
            spans[mention.id] = mention.start, mention.end + k
        elif position <= mention.start:
            spans[mention.id] = mention.start + k, mention.end + k
        else:
            spans[mention.id] = mention.span

    index_map = {index: index if index < position else index + k for index in range(len(document))}
    return _rebuild(document, tokens, spans), RemapReport(index_map=index_map)


def _remove(
    document: Document,
    deleted: Set[int],
) -> Tuple[List[Token], Dict[str, Span], Dict[int, int], List[str]]:
    survivors = [index for index in range(len(document)) if index not in deleted]
    index_map = {old: new for new, old in enumerate(survivors)}
    spans = {}
    shrunk = []
    for mention in document.mentions:
        kept = [index for index in range(mention.start, mention.end + 1) if index not in deleted]
        spans[mention.id] = index_map[kept[0]], index_map[kept[-1]]
        if len(kept) < len(mention):
            shrunk.append(mention.id)
    tokens = [document.tokens[index] for index in survivors]
    return tokens, spans, index_map, shrunk


def _emptied(document: Document, deleted: Set[int]) -> List[str]:
    return [
        mention.id
        for mention in document.mentions
        if all(index in deleted for index in range(mention.start, mention.end + 1))
    ]


@_apply.register
def _delete(edit: DeleteTokens, document: Document) -> Tuple[Document, RemapReport]:
    for index in edit.positions:
        _check_index(document, index)
    if not edit.positions:
        return document, RemapReport(index_map=_identity(document))

    deleted = set(edit.positions)
    emptied = _emptied(document, deleted)
    if emptied:
        return _reject(document, edit, 'deletion would empty mention', emptied)

    tokens, spans, index_map, shrunk = _remove(document, deleted)
    return _rebuild(document, tokens, spans), RemapReport(index_map=index_map, mentions_shrunk=tuple(shrunk))


@_apply.register
def _replace(edit: ReplaceSpan, document: Document) -> Tuple[Document, RemapReport]:
    start, end = edit.start, edit.end
    _check_index(document, start)
    _check_index(document, end)
    if start > end:
        raise EditError(f'{document.id}: replaced range [{start},{end}] is inverted')
    if not edit.texts:
        raise EditError(f'{document.id}: replacement texts are empty')
    _check_texts(edit.texts)

    k = len(edit.texts)
    delta = k - (end - start + 1)
    sentence = document.tokens[start].sentence_index
    tokens = list(document.tokens)
    tokens[start:end + 1] = [Token(text=text, sentence_index=sentence) for text in edit.texts]

    container = next(
        (mention for mention in document.mentions if mention.start <= start and end <= mention.end),
        None,
    )
    spans = {}
    shrunk = []
    if container is None:
        emptied = [mention.id for mention in document.mentions if start <= mention.start and mention.end <= end]
        if emptied:
            return _reject(document, edit, 'replacement would empty mention', emptied)

    for mention in document.mentions:
        if mention is container:
            spans[mention.id] = mention.start, mention.end + delta
        elif mention.end < start:
            spans[mention.id] = mention.span
        elif mention.start > end:
            spans[mention.id] = mention.start + delta, mention.end + delta
        elif mention.start < start:
            # crosses the left edge of the range: keeps its head
            spans[mention.id] = mention.start, start - 1
            shrunk.append(mention.id)
        else:
            # crosses the right edge: keeps its tail, after the inserted tokens
            spans[mention.id] = start + k, mention.end + delta
            shrunk.append(mention.id)

    index_map = {}
    for index in range(len(document)):
        if index < start:
            index_map[index] = index
        elif index > end:
            index_map[index] = index + delta
    return _rebuild(document, tokens, spans), RemapReport(index_map=index_map, mentions_shrunk=tuple(shrunk))


@_apply.register
def _swap(edit: SwapTokens, document: Document) -> Tuple[Document, RemapReport]:
    _check_index(document, edit.i)
    _check_index(document, edit.j)
    if edit.i == edit.j:
        return document, RemapReport(index_map=_identity(document))

    first, second = document.mention_at(edit.i), document.mention_at(edit.j)
    if first is not second:
        mention_ids = [mention.id for mention in (first, second) if mention is not None]
        return _reject(document, edit, 'swap across mention boundary', mention_ids)

    tokens = list(document.tokens)
    tokens[edit.i] = Token(text=document.tokens[edit.j].text, sentence_index=document.tokens[edit.i].sentence_index)
    tokens[edit.j] = Token(text=document.tokens[edit.i].text, sentence_index=document.tokens[edit.j].sentence_index)
    spans = {mention.id: mention.span for mention in document.mentions}
    return _rebuild(document, tokens, spans), RemapReport(index_map=_identity(document))


@_apply.register
def _permute(edit: PermuteSentences, document: Document) -> Tuple[Document, RemapReport]:
    sentences = document.sentence_spans()
    if sorted(edit.permutation) != list(range(len(sentences))):
        raise EditError(f'{document.id}: {edit.permutation} is not a permutation of {len(sentences)} sentences')

    tokens = []
    index_map = {}
    for new_sentence, old_sentence in enumerate(edit.permutation):
        start, end = sentences[old_sentence]
        for index in range(start, end + 1):
            index_map[index] = len(tokens)
            tokens.append(Token(text=document.tokens[index].text, sentence_index=new_sentence))

    spans = {mention.id: (index_map[mention.start], index_map[mention.end]) for mention in document.mentions}
    return _rebuild(document, tokens, spans), RemapReport(index_map=index_map)


@_apply.register
def _merge(edit: MergeSentences, document: Document) -> Tuple[Document, RemapReport]:
    sentences = document.sentence_spans()
    k = edit.first_sentence_index
    if isinstance(k, bool) or not isinstance(k, int) or not 0 <= k < len(sentences) - 1:
        raise EditError(f'{document.id}: can not merge sentence {k} of {len(sentences)}')

    (first_start, first_end), (second_start, second_end) = sentences[k], sentences[k + 1]
    target = document.tokens[first_start].sentence_index
    deleted = set()
    if document.tokens[first_end].text in edit.punctuation:
        emptied = _emptied(document, {first_end})
        if emptied:
            return _reject(document, edit, 'punctuation removal would empty mention', emptied)
        deleted.add(first_end)

    tokens, spans, index_map, shrunk = _remove(document, deleted)
    for old in range(second_start, second_end + 1):
        new = index_map[old]
        tokens[new] = Token(text=tokens[new].text, sentence_index=target)
    return _rebuild(document, tokens, spans), RemapReport(index_map=index_map, mentions_shrunk=tuple(shrunk))


def apply_edit(document: Document, edit: Edit) -> Tuple[Document, RemapReport]:
    """Apply one edit to the document.

    :raises EditError: if an index is out of range
    :returns: the edited document (unchanged if the edit was rejected) and its remap report
    """
    return _apply(edit, document)


def apply_edits(document: Document, edits: Iterable[Edit]) -> Tuple[Document, RemapReport]:
    """Apply the edits left to right, each against the document produced by its predecessors.

    Rejected edits are skipped and collected in the report.
    """
    index_map = _identity(document)
    shrunk: List[str] = []
    rejected: List[Rejection] = []
    for edit in edits:
        document, report = apply_edit(document, edit)
        index_map = {
            old: report.index_map[current]
            for old, current in index_map.items()
            if current in report.index_map
        }
        shrunk.extend(mention_id for mention_id in report.mentions_shrunk if mention_id not in shrunk)
        rejected.extend(report.edits_rejected)
    return document, RemapReport(index_map=index_map, mentions_shrunk=tuple(shrunk), edits_rejected=tuple(rejected))


def free_spans(document: Document) -> List[Span]:
    """Get the maximal token ranges covered by no mention."""
    covered = [False] * len(document)
    for mention in document.mentions:
        for index in range(mention.start, mention.end + 1):
            covered[index] = True

    spans = []
    start: Optional[int] = None
    for index, is_covered in enumerate(covered):
        if not is_covered and start is None:
            start = index
        elif is_covered and start is not None:
            spans.append((start, index - 1))
            start = None
    if start is not None:
        spans.append((start, len(document) - 1))
    return spans


@dataclass(frozen=True)
class Segment:
    """A mention span or a free span of a document."""

    start: int
    end: int
    mention: Optional[Mention] = None

    @property
    def is_free(self) -> bool:  # noqa: D401
        """If this segment is not covered by a mention."""
        return self.mention is None

    def __len__(self) -> int:  # noqa: D105
        return self.end - self.start + 1


def segments(document: Document, *, split_sentences: bool = True) -> List[Segment]:
    """Decompose the document into its mention spans and free spans, in token order.

    :param split_sentences: cut free spans at sentence boundaries so that no segment crosses a sentence
    """
    boundaries = {start for start, _ in document.sentence_spans()} if split_sentences else set()
    pieces = [Segment(start=mention.start, end=mention.end, mention=mention) for mention in document.mentions]
    for start, end in free_spans(document):
        piece_start = start
        for index in range(start + 1, end + 1):
            if index in boundaries:
                pieces.append(Segment(start=piece_start, end=index - 1))
                piece_start = index
        pieces.append(Segment(start=piece_start, end=end))
    return sorted(pieces, key=lambda segment: segment.start)
