# -*- coding: utf-8 -*-

"""Corpus characteristics explaining the behavior of techniques, and their change under augmentation."""

import logging
from dataclasses import asdict, dataclass
from typing import Any, Dict, Optional, Sequence, Tuple

import pandas as pd

from .corpus import Corpus, Document, Relation
from .utils import provenance

__all__ = [
    'CorpusStats',
    'StatsDelta',
    'corpus_stats',
    'compare_stats',
    'deltas_to_frame',
    'STATS_COLUMNS',
]

logger = logging.getLogger(__name__)

#: Columns of the tabular stats deltas
STATS_COLUMNS = ['technique_id', 'vocab_delta', 'mention_len_delta', 'direction_flip_rate']


@dataclass(frozen=True)
class CorpusStats:
    """Vocabulary, mention length and relation direction of a corpus."""

    vocabulary_size: int = 0
    mean_mention_length: float = 0.0
    direction_fraction: float = 0.0
    n_documents: int = 0
    n_tokens: int = 0
    n_mentions: int = 0
    n_relations: int = 0

    def to_json(self) -> Dict[str, Any]:
        """Convert to a JSON object."""
        return asdict(self)


def _is_forward(document: Document, relation: Relation) -> bool:
    return document.get_mention(relation.head).start < document.get_mention(relation.tail).start


def corpus_stats(corpus: Corpus) -> CorpusStats:
    """Compute the characteristics of a corpus.

    The vocabulary counts lowercased token texts. The direction fraction is the share of relations whose head
    mention starts before the tail mention, 0 without relations.
    """
    vocabulary = set()
    n_tokens = n_mentions = n_relations = mention_tokens = forward = 0
    for document in corpus:
        vocabulary.update(token.text.lower() for token in document.tokens)
        n_tokens += len(document)
        n_mentions += len(document.mentions)
        mention_tokens += sum(len(mention) for mention in document.mentions)
        n_relations += len(document.relations)
        forward += sum(_is_forward(document, relation) for relation in document.relations)
    return CorpusStats(
        vocabulary_size=len(vocabulary),
        mean_mention_length=mention_tokens / n_mentions if n_mentions else 0.0,
        direction_fraction=forward / n_relations if n_relations else 0.0,
        n_documents=len(corpus),
        n_tokens=n_tokens,
        n_mentions=n_mentions,
        n_relations=n_relations,
    )


def _ratio(new: float, old: float) -> Optional[float]:
    return new / old if old else None


@dataclass(frozen=True)
class StatsDelta:
    """The change of the characteristics from an original to an augmented corpus."""

    original: CorpusStats
    augmented: CorpusStats
    direction_flip_rate: float = 0.0
    compared_relations: int = 0
    unmatched_relations: int = 0

    @property
    def vocab_delta(self) -> int:  # noqa: D401
        """The change of the vocabulary size."""
        return self.augmented.vocabulary_size - self.original.vocabulary_size

    @property
    def mention_len_delta(self) -> float:  # noqa: D401
        """The change of the mean mention length."""
        return self.augmented.mean_mention_length - self.original.mean_mention_length

    @property
    def direction_fraction_delta(self) -> float:  # noqa: D401
        """The change of the share of forward relations."""
        return self.augmented.direction_fraction - self.original.direction_fraction

    def to_row(self, technique_id: str) -> Dict[str, Any]:
        """Get the row with the columns of :data:`STATS_COLUMNS`."""
        return {
            'technique_id': technique_id,
            'vocab_delta': self.vocab_delta,
            'mention_len_delta': self.mention_len_delta,
            'direction_flip_rate': self.direction_flip_rate,
        }

    def to_json(self) -> Dict[str, Any]:
        """Convert to a JSON object with absolute and relative changes."""
        return {
            'original': self.original.to_json(),
            'augmented': self.augmented.to_json(),
            'absolute': {
                'vocabulary_size': self.vocab_delta,
                'mean_mention_length': self.mention_len_delta,
                'direction_fraction': self.direction_fraction_delta,
            },
            'relative': {
                'vocabulary_size': _ratio(self.augmented.vocabulary_size, self.original.vocabulary_size),
                'mean_mention_length': _ratio(
                    self.augmented.mean_mention_length, self.original.mean_mention_length,
                ),
                'direction_fraction': _ratio(self.augmented.direction_fraction, self.original.direction_fraction),
            },
            'direction_flip_rate': self.direction_flip_rate,
            'compared_relations': self.compared_relations,
            'unmatched_relations': self.unmatched_relations,
        }


def _flips(original: Corpus, augmented: Corpus) -> Tuple[int, int, int]:
    """Count the relations of synthetic documents whose direction differs from the same relation in the original."""
    documents = [document for document in augmented if provenance(document.id) != document.id]
    if not documents:
        documents = list(augmented)
    originals = {document.id: document for document in original}
    compared = flipped = unmatched = 0
    for document in documents:
        source = originals.get(provenance(document.id))
        source_relations = {relation.id: relation for relation in source.relations} if source is not None else {}
        for relation in document.relations:
            source_relation = source_relations.get(relation.id)
            if source_relation is None:
                unmatched += 1
                continue
            compared += 1
            flipped += _is_forward(document, relation) != _is_forward(source, source_relation)
    return compared, flipped, unmatched


def compare_stats(original: Corpus, augmented: Corpus) -> StatsDelta:
    """Compare the characteristics of an augmented corpus to those of its original.

    Synthetic documents are matched to their originals by provenance and relations by identifier; relations
    without counterpart are left out of the flip rate and counted in ``unmatched_relations``.
    """
    compared, flipped, unmatched = _flips(original, augmented)
    if unmatched:
        logger.warning(f'{unmatched} relations of the augmented corpus have no counterpart in the original')
    return StatsDelta(
        original=corpus_stats(original),
        augmented=corpus_stats(augmented),
        direction_flip_rate=flipped / compared if compared else 0.0,
        compared_relations=compared,
        unmatched_relations=unmatched,
    )


def deltas_to_frame(rows: Sequence[Tuple[str, StatsDelta]]) -> pd.DataFrame:
    """Build the data frame of ``(technique_id, delta)`` pairs with the columns of :data:`STATS_COLUMNS`."""
    return pd.DataFrame([delta.to_row(technique_id) for technique_id, delta in rows], columns=STATS_COLUMNS)
