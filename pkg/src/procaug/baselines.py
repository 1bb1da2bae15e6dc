# -*- coding: utf-8 -*-

"""Averaged-perceptron baselines for mention detection and relation extraction.

Models are saved as JSON objects::

    {
        "format": "procaug.tagger",          # or "procaug.relations"
        "version": 1,
        "classes": ["O", "B-Actor", ...],    # score ties go to the earliest class
        "types": ["Actor", ...],             # mention types (tagger) or relation types (relations)
        "window": 1,                         # relations only: maximum sentence distance of candidate pairs
        "weights": {"feature": {"class": 0.5, ...}, ...}
    }
"""

import json
import logging
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .constants import ACTIVITY, ACTOR, ACTOR_PERFORMER, ACTOR_RECIPIENT, DEFAULT_EPOCHS, DEFAULT_WINDOW, NO_RELATION
from .corpus import Corpus, Document, Mention, Relation
from .errors import BaselineError
from .utils import atomic_write, make_rng

__all__ = [
    'LinearModel',
    'TaggerModel',
    'RelationModel',
    'train_tagger',
    'predict_tags',
    'decode_tags',
    'predict_mentions',
    'train_relations',
    'predict_relations',
    'candidate_pairs',
    'rule_actor_baseline',
    'save_model',
    'load_model',
]

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1
TAGGER_FORMAT = 'procaug.tagger'
RELATIONS_FORMAT = 'procaug.relations'

OUTSIDE = 'O'
BEGIN = 'B'
INSIDE = 'I'
START = '<s>'
END = '</s>'


@dataclass
class LinearModel:
    """Sparse linear scores over binary features."""

    classes: Tuple[str, ...]
    weights: Dict[str, Dict[str, float]] = field(default_factory=dict)

    def scores(self, features: Iterable[str]) -> Dict[str, float]:
        """Score every class."""
        rv = dict.fromkeys(self.classes, 0.0)
        for feature in features:
            for label, weight in self.weights.get(feature, {}).items():
                rv[label] += weight
        return rv

    def predict(self, features: Iterable[str]) -> str:
        """Get the best scoring class, the earliest one on ties."""
        scores = self.scores(features)
        return max(self.classes, key=lambda label: scores[label])


class _AveragedPerceptron(LinearModel):
    """A linear model trained by perceptron updates, whose final weights are the average over all steps."""

    def __init__(self, classes: Sequence[str]):
        super().__init__(classes=tuple(classes))
        self._totals: Dict[Tuple[str, str], float] = defaultdict(float)
        self._timestamps: Dict[Tuple[str, str], int] = defaultdict(int)
        self._instances = 0

    def _update_feature(self, label: str, feature: str, value: float) -> None:
        weights = self.weights.setdefault(feature, {})
        weight = weights.get(label, 0.0)
        key = feature, label
        self._totals[key] += (self._instances - self._timestamps[key]) * weight
        self._timestamps[key] = self._instances
        weights[label] = weight + value

    def update(self, truth: str, guess: str, features: Sequence[str]) -> None:
        """Count one instance and move the weights towards the truth if the guess was wrong."""
        self._instances += 1
        if truth == guess:
            return
        for feature in features:
            self._update_feature(truth, feature, 1.0)
            self._update_feature(guess, feature, -1.0)

    def averaged(self) -> LinearModel:
        """Get the averaged weights, dropping zeros."""
        weights = {}
        for feature, labels in self.weights.items():
            averaged = {}
            for label, weight in labels.items():
                key = feature, label
                total = self._totals[key] + (self._instances - self._timestamps[key]) * weight
                value = total / self._instances
                if value:
                    averaged[label] = value
            if averaged:
                weights[feature] = averaged
        return LinearModel(classes=self.classes, weights=weights)


@dataclass
class TaggerModel:
    """A BIO tagger over the tokens of a sentence."""

    mention_types: Tuple[str, ...]
    model: LinearModel

    @property
    def tags(self) -> Tuple[str, ...]:  # noqa: D401
        """The tag set, ``O`` first."""
        return self.model.classes


@dataclass
class RelationModel:
    """A classifier of ordered mention pairs into relation types or ``none``."""

    relation_types: Tuple[str, ...]
    model: LinearModel
    window: int = DEFAULT_WINDOW


def _tag_set(mention_types: Sequence[str]) -> Tuple[str, ...]:
    return (OUTSIDE,) + tuple(
        f'{prefix}-{mention_type}'
        for mention_type in mention_types
        for prefix in (BEGIN, INSIDE)
    )


def _token_features(texts: Sequence[str], index: int, previous_tag: str) -> List[str]:
    word = texts[index]
    lower = word.lower()
    previous_word = texts[index - 1].lower() if index > 0 else START
    next_word = texts[index + 1].lower() if index + 1 < len(texts) else END
    return [
        'bias',
        f'w={lower}',
        f'p3={lower[:3]}',
        f's3={lower[-3:]}',
        f'cap={word[:1].isupper()}',
        f'-1w={previous_word}',
        f'+1w={next_word}',
        f'-1t={previous_tag}',
        f'-1t|w={previous_tag}|{lower}',
    ]


def _sentences(document: Document) -> Iterable[Tuple[int, int]]:
    return document.sentence_spans()


def _gold_tags(document: Document) -> List[str]:
    tags = [OUTSIDE] * len(document)
    for mention in document.mentions:
        tags[mention.start] = f'{BEGIN}-{mention.mention_type}'
        for index in range(mention.start + 1, mention.end + 1):
            tags[index] = f'{INSIDE}-{mention.mention_type}'
    return tags


def train_tagger(train: Corpus, epochs: int = DEFAULT_EPOCHS, seed: int = 0) -> TaggerModel:
    """Train a BIO tagger, visiting the sentences in a seeded order at each epoch.

    :raises BaselineError: if the corpus has no tokens or ``epochs`` is not positive
    """
    if epochs < 1:
        raise BaselineError(f'epochs should be positive, got {epochs}')
    sentences = []
    for document in train:
        texts, tags = document.texts, _gold_tags(document)
        for start, end in _sentences(document):
            sentences.append((texts[start:end + 1], tags[start:end + 1]))
    if not sentences:
        raise BaselineError('cannot train a tagger on an empty corpus')

    perceptron = _AveragedPerceptron(_tag_set(train.mention_types))
    rng = make_rng(seed, 'tagger')
    for epoch in range(epochs):
        mistakes = 0
        for position in rng.permutation(len(sentences)):
            texts, gold = sentences[position]
            previous = START
            for index, truth in enumerate(gold):
                features = _token_features(texts, index, previous)
                guess = perceptron.predict(features)
                perceptron.update(truth, guess, features)
                mistakes += guess != truth
                previous = guess
        logger.debug(f'tagger epoch {epoch}: {mistakes} mistakes')

    return TaggerModel(mention_types=tuple(train.mention_types), model=perceptron.averaged())


def predict_tags(model: TaggerModel, texts: Sequence[str]) -> List[str]:
    """Tag the tokens of a sentence greedily from left to right."""
    tags = []
    previous = START
    for index in range(len(texts)):
        previous = model.model.predict(_token_features(texts, index, previous))
        tags.append(previous)
    return tags


def decode_tags(tags: Sequence[str], offset: int = 0) -> List[Tuple[str, int, int]]:
    """Decode BIO tags to ``(type, start, end)`` spans, reading an ``I-t`` that continues nothing as ``B-t``.

    >>> decode_tags(['B-Actor', 'I-Actor', 'O'])
    [('Actor', 0, 1)]
    >>> decode_tags(['O', 'I-Activity', 'O'])
    [('Activity', 1, 1)]
    """
    spans = []
    current: Optional[List] = None
    for index, tag in enumerate(tags, start=offset):
        if tag == OUTSIDE:
            current = None
            continue
        prefix, mention_type = tag.split('-', 1)
        if prefix == INSIDE and current is not None and current[0] == mention_type:
            current[2] = index
        else:
            current = [mention_type, index, index]
            spans.append(current)
    return [tuple(span) for span in spans]


def predict_mentions(model: TaggerModel, document: Document) -> List[Mention]:
    """Predict the mentions of a document, sentence by sentence."""
    texts = document.texts
    spans = []
    for start, end in _sentences(document):
        spans.extend(decode_tags(predict_tags(model, texts[start:end + 1]), offset=start))
    return [
        Mention(id=f'P{number}', mention_type=mention_type, start=start, end=end)
        for number, (mention_type, start, end) in enumerate(spans, start=1)
    ]


def _bucket(value: int) -> str:
    magnitude = abs(value)
    if magnitude <= 4:
        label = str(magnitude)
    elif magnitude <= 7:
        label = '5-7'
    elif magnitude <= 15:
        label = '8-15'
    else:
        label = '16+'
    return f'-{label}' if value < 0 else label


def _sentence_ordinals(document: Document) -> Dict[int, int]:
    return {
        index: ordinal
        for ordinal, (start, end) in enumerate(document.sentence_spans())
        for index in range(start, end + 1)
    }


def candidate_pairs(document: Document, window: int = DEFAULT_WINDOW) -> List[Tuple[Mention, Mention]]:
    """Get the ordered mention pairs at most ``window`` sentences apart, in document order."""
    ordinals = _sentence_ordinals(document)
    mentions = sorted(document.mentions, key=lambda mention: (mention.start, mention.end))
    return [
        (head, tail)
        for head in mentions
        for tail in mentions
        if head.id != tail.id and abs(ordinals[head.start] - ordinals[tail.start]) <= window
    ]


def _pair_features(document: Document, head: Mention, tail: Mention, ordinals: Mapping[int, int]) -> List[str]:
    left, right = (head, tail) if head.start < tail.start else (tail, head)
    types = f'{head.mention_type}|{tail.mention_type}'
    order = 'fwd' if head.start < tail.start else 'bwd'
    distance = _bucket(tail.start - head.start)
    tokens_between = _bucket(max(right.start - left.end - 1, 0))
    mentions_between = _bucket(sum(
        1
        for mention in document.mentions
        if left.end < mention.start and mention.end < right.start
    ))
    same_sentence = ordinals[head.start] == ordinals[tail.start]
    return [
        'bias',
        f'types={types}',
        f'dist={distance}',
        f'same={same_sentence}',
        f'order={order}',
        f'between={tokens_between}',
        f'mentions_between={mentions_between}',
        f'types|order={types}|{order}',
        f'types|same={types}|{same_sentence}',
        f'types|dist={types}|{distance}',
        f'types|order|mentions_between={types}|{order}|{mentions_between}',
        f'head={" ".join(document.mention_text(head)).lower()}',
        f'tail={" ".join(document.mention_text(tail)).lower()}',
    ]


def _relation_instances(document: Document, window: int) -> List[Tuple[List[str], str]]:
    gold = {}
    for relation in document.relations:
        gold.setdefault((relation.head, relation.tail), relation.relation_type)
    ordinals = _sentence_ordinals(document)
    return [
        (_pair_features(document, head, tail, ordinals), gold.get((head.id, tail.id), NO_RELATION))
        for head, tail in candidate_pairs(document, window)
    ]


def train_relations(
    train: Corpus,
    epochs: int = DEFAULT_EPOCHS,
    seed: int = 0,
    window: int = DEFAULT_WINDOW,
) -> RelationModel:
    """Train a relation classifier over the candidate pairs of the gold mentions.

    :raises BaselineError: if the corpus has no documents or ``epochs`` is not positive
    """
    if epochs < 1:
        raise BaselineError(f'epochs should be positive, got {epochs}')
    if not len(train):
        raise BaselineError('cannot train a relation model on an empty corpus')
    instances = [
        instance
        for document in train
        for instance in _relation_instances(document, window)
    ]
    perceptron = _AveragedPerceptron((NO_RELATION,) + tuple(train.relation_types))
    rng = make_rng(seed, 'relations')
    for epoch in range(epochs):
        mistakes = 0
        for position in rng.permutation(len(instances)):
            features, truth = instances[position]
            guess = perceptron.predict(features)
            perceptron.update(truth, guess, features)
            mistakes += guess != truth
        logger.debug(f'relation epoch {epoch}: {mistakes} mistakes over {len(instances)} pairs')

    model = perceptron.averaged() if instances else LinearModel(classes=perceptron.classes)
    return RelationModel(relation_types=tuple(train.relation_types), model=model, window=window)


def predict_relations(model: RelationModel, document: Document) -> List[Relation]:
    """Predict the relations between the mentions of a document."""
    ordinals = _sentence_ordinals(document)
    rv = []
    for head, tail in candidate_pairs(document, model.window):
        label = model.model.predict(_pair_features(document, head, tail, ordinals))
        if label != NO_RELATION:
            rv.append(Relation(id=f'R{len(rv) + 1}', relation_type=label, head=head.id, tail=tail.id))
    return rv


def rule_actor_baseline(document: Document) -> List[Relation]:
    """Link each activity to the nearest actor on its left as performer and on its right as recipient."""
    ordinals = _sentence_ordinals(document)
    actors = [mention for mention in document.mentions if mention.mention_type == ACTOR]
    rv = []
    for activity in sorted(document.mentions, key=lambda mention: mention.start):
        if activity.mention_type != ACTIVITY:
            continue
        same_sentence = [actor for actor in actors if ordinals[actor.start] == ordinals[activity.start]]
        left = [actor for actor in same_sentence if actor.end < activity.start]
        right = [actor for actor in same_sentence if actor.start > activity.end]
        if left:
            performer = max(left, key=lambda actor: actor.end)
            rv.append(Relation(f'R{len(rv) + 1}', ACTOR_PERFORMER, activity.id, performer.id))
        if right:
            recipient = min(right, key=lambda actor: actor.start)
            rv.append(Relation(f'R{len(rv) + 1}', ACTOR_RECIPIENT, activity.id, recipient.id))
    return rv


def save_model(model, path: str) -> None:
    """Save a tagger or relation model as JSON."""
    if isinstance(model, TaggerModel):
        obj = {'format': TAGGER_FORMAT, 'types': list(model.mention_types)}
    elif isinstance(model, RelationModel):
        obj = {'format': RELATIONS_FORMAT, 'types': list(model.relation_types), 'window': model.window}
    else:
        raise TypeError(f'can not save {type(model).__name__}')
    obj.update({
        'version': FORMAT_VERSION,
        'classes': list(model.model.classes),
        'weights': model.model.weights,
    })
    atomic_write(path, json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + '\n')


def load_model(path: str):
    """Load a model saved by :func:`save_model`.

    :raises BaselineError: if the file is not a model of a supported version
    """
    with open(path, encoding='utf-8') as file:
        obj = json.load(file)
    if obj.get('version') != FORMAT_VERSION:
        raise BaselineError(f'unsupported model version {obj.get("version")!r} in {path}')
    model = LinearModel(
        classes=tuple(obj['classes']),
        weights={
            feature: {label: float(weight) for label, weight in labels.items()}
            for feature, labels in obj['weights'].items()
        },
    )
    if obj.get('format') == TAGGER_FORMAT:
        return TaggerModel(mention_types=tuple(obj['types']), model=model)
    if obj.get('format') == RELATIONS_FORMAT:
        return RelationModel(relation_types=tuple(obj['types']), model=model, window=obj['window'])
    raise BaselineError(f'unknown model format {obj.get("format")!r} in {path}')
