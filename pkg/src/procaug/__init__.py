# -*- coding: utf-8 -*-

"""Annotation-preserving augmentation of business process descriptions.

procaug rewrites token-annotated process descriptions into synthetic documents whose mentions and relations stay
valid, measures the performance gain the synthetic documents bring to simple mention and relation extraction
baselines by cross-validation, and searches the configuration of each technique maximizing that gain.

Techniques operate on the surface of a document (characters and tokens), on its phrase structure, on its sentence
structure or through a paraphrase provider. Each one is registered under its operation name and under its catalog
identifier, listed by :func:`procaug.augmenters.list_techniques`.
"""

from .augmenters import Augmenter, TechniqueConfig, augment, get_technique, list_techniques  # noqa: F401
from .corpus import Corpus, Document, Mention, Relation, Token, read_corpus, write_corpus  # noqa: F401
from .evaluation import cross_validate  # noqa: F401
from .hyperopt import optimize  # noqa: F401
from .manager import Manager  # noqa: F401
from .stats import compare_stats, corpus_stats  # noqa: F401
from .utils import get_version  # noqa: F401
