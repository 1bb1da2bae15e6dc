# -*- coding: utf-8 -*-

"""Generation of annotated process descriptions.

Documents are built from sentence templates whose actors, activities and objects are drawn from synonym classes of
the lexicon, so that a model trained on one surface form meets the others at test time. Consecutive activities are
linked by flow relations, also across sentences.
"""

import logging
from typing import List, Optional, Sequence

import numpy as np

from .constants import (
    ACTIVITY, ACTIVITY_DATA, ACTOR, ACTOR_PERFORMER, ACTOR_RECIPIENT, ADJ, ADV, CONDITION_SPECIFICATION, FLOW,
    FURTHER_SPECIFICATION, NOUN, USES, VERB, XOR_GATEWAY,
)
from .corpus import Corpus, Document, Mention, Relation, Token
from .lexicon import Lexicon, get_default_lexicon
from .utils import make_rng

__all__ = [
    'generate_corpus',
    'generate_document',
]

logger = logging.getLogger(__name__)

ACTORS = ('clerk', 'manager', 'secretary', 'accountant', 'inspector', 'supplier')
ABBREVIATED_ACTORS = ('MPOO', 'CFO', 'QA', 'HR')
#: Present and past forms of the activities
ACTIVITIES = (
    ('registers', 'registered'),
    ('examines', 'examined'),
    ('approves', 'approved'),
    ('sends', 'sent'),
    ('archives', 'archived'),
    ('prepares', 'prepared'),
    ('signs', 'signed'),
    ('calculates', 'calculated'),
)
OBJECTS = ('claim', 'invoice', 'form', 'report', 'contract', 'order')
CONDITIONS = ('complete', 'valid', 'correct', 'urgent', 'important')
MANNERS = ('immediately', 'carefully', 'finally')


def _surface_forms(lexicon: Lexicon, word: str, tag: str) -> List[str]:
    return [word] + [synonym for synonym in lexicon.synonyms(word, tag) if ' ' not in synonym]


class _DocumentBuilder:
    def __init__(self, document_id: str):
        self.document_id = document_id
        self.tokens: List[Token] = []
        self.mentions: List[Mention] = []
        self.relations: List[Relation] = []
        self.sentence = 0

    def add(self, *texts: str) -> None:
        for text in texts:
            if not self.tokens or self.tokens[-1].sentence_index != self.sentence:
                text = text[:1].upper() + text[1:]
            self.tokens.append(Token(text, self.sentence))

    def mention(self, mention_type: str, *texts: str) -> str:
        start = len(self.tokens)
        self.add(*texts)
        mention_id = f'T{len(self.mentions) + 1}'
        self.mentions.append(Mention(mention_id, mention_type, start, len(self.tokens) - 1))
        return mention_id

    def relate(self, relation_type: str, head: str, tail: str) -> None:
        self.relations.append(Relation(f'R{len(self.relations) + 1}', relation_type, head, tail))

    def end_sentence(self) -> None:
        self.add('.')
        self.sentence += 1

    def build(self) -> Document:
        return Document(self.document_id, self.tokens, self.mentions, self.relations)


class _Vocabulary:
    def __init__(self, lexicon: Lexicon):
        self.actors = [_surface_forms(lexicon, word, NOUN) for word in ACTORS]
        self.abbreviations = [short for short in ABBREVIATED_ACTORS if lexicon.expand(short) is not None]
        self.activities = [
            (_surface_forms(lexicon, present, VERB), _surface_forms(lexicon, past, VERB))
            for present, past in ACTIVITIES
        ]
        self.objects = [_surface_forms(lexicon, word, NOUN) for word in OBJECTS]
        self.conditions = [_surface_forms(lexicon, word, ADJ) for word in CONDITIONS]
        self.manners = [_surface_forms(lexicon, word, ADV) for word in MANNERS]


def _pick(rng: np.random.Generator, classes: Sequence[Sequence[str]]) -> str:
    forms = classes[int(rng.integers(len(classes)))]
    return forms[int(rng.integers(len(forms)))]


def _actor(rng: np.random.Generator, vocabulary: _Vocabulary) -> List[str]:
    if vocabulary.abbreviations and rng.random() < 0.15:
        return ['the', vocabulary.abbreviations[int(rng.integers(len(vocabulary.abbreviations)))]]
    return ['the', _pick(rng, vocabulary.actors)]


def _activity(rng: np.random.Generator, vocabulary: _Vocabulary, past: bool) -> str:
    forms = vocabulary.activities[int(rng.integers(len(vocabulary.activities)))][1 if past else 0]
    return forms[int(rng.integers(len(forms)))]


def generate_document(document_id: str, rng: np.random.Generator, lexicon: Optional[Lexicon] = None) -> Document:
    """Generate one process description of three to six sentences."""
    vocabulary = _Vocabulary(lexicon if lexicon is not None else get_default_lexicon())
    builder = _DocumentBuilder(document_id)
    previous: Optional[str] = None

    for _ in range(int(rng.integers(3, 7))):
        kind = rng.random()
        if kind < 0.5:
            # the clerk registers the claim (to the manager) (immediately) .
            actor = builder.mention(ACTOR, *_actor(rng, vocabulary))
            activity = builder.mention(ACTIVITY, _activity(rng, vocabulary, past=False))
            data = builder.mention(ACTIVITY_DATA, 'the', _pick(rng, vocabulary.objects))
            builder.relate(ACTOR_PERFORMER, activity, actor)
            builder.relate(USES, activity, data)
            if rng.random() < 0.4:
                builder.add('to')
                builder.relate(ACTOR_RECIPIENT, activity, builder.mention(ACTOR, *_actor(rng, vocabulary)))
            if rng.random() < 0.3:
                builder.relate(FURTHER_SPECIFICATION, activity, builder.mention(
                    FURTHER_SPECIFICATION, _pick(rng, vocabulary.manners),
                ))
            entry = activity
        elif kind < 0.75:
            # if the claim is (not) valid , the manager approves it .
            gateway = builder.mention(XOR_GATEWAY, 'if')
            negated = rng.random() < 0.3
            builder.mention(CONDITION_SPECIFICATION, 'the', _pick(rng, vocabulary.objects), 'is',
                            *(['not'] if negated else []), _pick(rng, vocabulary.conditions))
            builder.add(',')
            actor = builder.mention(ACTOR, *_actor(rng, vocabulary))
            activity = builder.mention(ACTIVITY, _activity(rng, vocabulary, past=False))
            data = builder.mention(ACTIVITY_DATA, 'it')
            builder.relate(ACTOR_PERFORMER, activity, actor)
            builder.relate(USES, activity, data)
            builder.relate(FLOW, gateway, activity)
            entry = gateway
        else:
            # afterwards , the claim is registered by the clerk .
            builder.add('afterwards', ',')
            data = builder.mention(ACTIVITY_DATA, 'the', _pick(rng, vocabulary.objects))
            builder.add('is')
            activity = builder.mention(ACTIVITY, _activity(rng, vocabulary, past=True))
            builder.add('by')
            actor = builder.mention(ACTOR, *_actor(rng, vocabulary))
            builder.relate(USES, activity, data)
            builder.relate(ACTOR_PERFORMER, activity, actor)
            entry = activity
        if previous is not None:
            builder.relate(FLOW, previous, entry)
        previous = activity
        builder.end_sentence()

    return builder.build()


def generate_corpus(n_documents: int, seed: int, lexicon: Optional[Lexicon] = None) -> Corpus:
    """Generate a corpus of annotated process descriptions.

    :param n_documents: the number of documents
    :param seed: the seed; each document is drawn from its own generator
    :param lexicon: the lexicon providing the synonym classes, defaults to the bundled one
    """
    lexicon = lexicon if lexicon is not None else get_default_lexicon()
    documents = [
        generate_document(f'doc-{index}', make_rng(seed, 'document', index), lexicon)
        for index in range(n_documents)
    ]
    logger.info(f'generated {n_documents} documents, {sum(len(d) for d in documents)} tokens')
    return Corpus(documents=tuple(documents))
