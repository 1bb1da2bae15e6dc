# -*- coding: utf-8 -*-

"""Micro-averaged scoring of mention detection and relation extraction, and the performance gain experiment.

The performance gain of a technique is the difference between the test scores of a baseline trained on the
augmented training folds and of one trained on the original training folds. Test folds are never augmented, and
relation extraction is scored on gold mentions.
"""

import hashlib
import json
import logging
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, MutableMapping, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from tqdm import tqdm

from .augmenters import Augmenter, TechniqueConfig, get_technique
from .baselines import predict_mentions, predict_relations, train_relations, train_tagger
from .constants import DEFAULT_EPOCHS, DEFAULT_FOLDS, DEFAULT_WINDOW, MD, RE, TASKS
from .corpus import Corpus, Document, Mention, Relation, serialize_corpus
from .errors import DanglingEndpointError, EvaluationError
from .lexicon import Lexicon
from .providers import ParaphraseProvider
from .utils import derive_seed, make_rng, provenance

__all__ = [
    'Score',
    'score_mentions',
    'resolve_relations',
    'score_relations',
    'split_folds',
    'FoldResult',
    'GainReport',
    'cross_validate',
    'dumps_report',
    'GAIN_COLUMNS',
]

logger = logging.getLogger(__name__)

#: Columns of the tabular gain report
GAIN_COLUMNS = ['technique_id', 'task', 'baseline_f1', 'augmented_f1', 'gain']

#: A mention as ``(type, start, end)``
MentionKey = Tuple[str, int, int]
#: A relation as ``(type, head mention key, tail mention key)``
RelationKey = Tuple[str, MentionKey, MentionKey]


@dataclass(frozen=True)
class Score:
    """Micro-averaged counts and their precision, recall and F1."""

    true_positives: int = 0
    false_positives: int = 0
    false_negatives: int = 0

    @property
    def precision(self) -> float:  # noqa: D401
        """The precision, 0 without predictions."""
        denominator = self.true_positives + self.false_positives
        return self.true_positives / denominator if denominator else 0.0

    @property
    def recall(self) -> float:  # noqa: D401
        """The recall, 0 without gold items."""
        denominator = self.true_positives + self.false_negatives
        return self.true_positives / denominator if denominator else 0.0

    @property
    def f1(self) -> float:  # noqa: D401
        """The harmonic mean of precision and recall, 0 if both are 0."""
        precision, recall = self.precision, self.recall
        return 2 * precision * recall / (precision + recall) if precision + recall else 0.0

    def __add__(self, other: 'Score') -> 'Score':  # noqa: D105
        return Score(
            true_positives=self.true_positives + other.true_positives,
            false_positives=self.false_positives + other.false_positives,
            false_negatives=self.false_negatives + other.false_negatives,
        )

    def to_json(self) -> Dict[str, Any]:
        """Convert the counts and rates to a JSON object."""
        return {
            'true_positives': self.true_positives,
            'false_positives': self.false_positives,
            'false_negatives': self.false_negatives,
            'precision': self.precision,
            'recall': self.recall,
            'f1': self.f1,
        }


def _count(gold: Iterable, predicted: Iterable) -> Score:
    gold_counts, predicted_counts = Counter(gold), Counter(predicted)
    true_positives = sum((gold_counts & predicted_counts).values())
    return Score(
        true_positives=true_positives,
        false_positives=sum(predicted_counts.values()) - true_positives,
        false_negatives=sum(gold_counts.values()) - true_positives,
    )


def _mention_key(mention: Mention) -> MentionKey:
    return mention.mention_type, mention.start, mention.end


def score_mentions(gold: Iterable[Mention], predicted: Iterable[Mention]) -> Score:
    """Score the predicted mentions of one document by exact ``(type, start, end)`` match.

    Scores of several documents are summed to get the micro average.
    """
    return _count(map(_mention_key, gold), map(_mention_key, predicted))


def resolve_relations(document: Document, relations: Iterable[Relation]) -> List[RelationKey]:
    """Replace the endpoint identifiers of the relations by the ``(type, start, end)`` of their mentions.

    :raises DanglingEndpointError: if an endpoint is not a mention of the document
    """
    mentions = {mention.id: mention for mention in document.mentions}
    rv = []
    for relation in relations:
        for endpoint in (relation.head, relation.tail):
            if endpoint not in mentions:
                raise DanglingEndpointError(f'{document.id}: relation {relation.id} refers to unknown {endpoint}')
        head, tail = mentions[relation.head], mentions[relation.tail]
        rv.append((relation.relation_type, _mention_key(head), _mention_key(tail)))
    return rv


def score_relations(gold: Iterable[RelationKey], predicted: Iterable[RelationKey]) -> Score:
    """Score resolved relations of one document by exact ``(type, head, tail)`` match."""
    return _count(gold, predicted)


def split_folds(corpus: Corpus, k: int, seed: int) -> List[List[int]]:
    """Split the document indices into ``k`` folds of near-equal size after a seeded shuffle.

    :raises EvaluationError: if ``k`` is less than 2 or more than the number of documents
    """
    if k < 2:
        raise EvaluationError(f'at least 2 folds are needed, got {k}')
    if k > len(corpus):
        raise EvaluationError(f'can not split {len(corpus)} documents in {k} folds')
    permutation = make_rng(seed, 'folds').permutation(len(corpus))
    return [sorted(int(index) for index in fold) for fold in np.array_split(permutation, k)]


@dataclass(frozen=True)
class FoldResult:
    """The scores of both arms on one test fold."""

    fold: int
    test_ids: Tuple[str, ...]
    baseline: Dict[str, Score]
    augmented: Dict[str, Score]
    synthetic_ids: Tuple[str, ...] = ()
    noop: int = 0

    def to_json(self) -> Dict[str, Any]:
        """Convert this result to a JSON object."""
        return {
            'fold': self.fold,
            'test_ids': list(self.test_ids),
            'baseline': {task: score.to_json() for task, score in sorted(self.baseline.items())},
            'augmented': {task: score.to_json() for task, score in sorted(self.augmented.items())},
            'synthetic_ids': list(self.synthetic_ids),
            'noop': self.noop,
        }


@dataclass(frozen=True)
class GainReport:
    """The mean test F1 of both arms over the folds, per task."""

    technique_id: Optional[str]
    config: Optional[TechniqueConfig]
    k: int
    seed: int
    tasks: Tuple[str, ...]
    folds: Tuple[FoldResult, ...] = field(default=())

    def baseline_f1(self, task: str) -> float:
        """Get the mean F1 of the unaugmented arm."""
        return float(np.mean([fold.baseline[task].f1 for fold in self.folds]))

    def augmented_f1(self, task: str) -> float:
        """Get the mean F1 of the augmented arm."""
        return float(np.mean([fold.augmented[task].f1 for fold in self.folds]))

    def gain(self, task: str) -> float:
        """Get the performance gain, the augmented minus the baseline mean F1."""
        return self.augmented_f1(task) - self.baseline_f1(task)

    @property
    def noop(self) -> int:  # noqa: D401
        """The number of inapplicable (document, fold) pairs."""
        return sum(fold.noop for fold in self.folds)

    def rows(self) -> List[Dict[str, Any]]:
        """Get one row per task with the columns of :data:`GAIN_COLUMNS`."""
        return [
            {
                'technique_id': self.technique_id or 'none',
                'task': task,
                'baseline_f1': self.baseline_f1(task),
                'augmented_f1': self.augmented_f1(task),
                'gain': self.gain(task),
            }
            for task in self.tasks
        ]

    def to_frame(self) -> pd.DataFrame:
        """Convert to a data frame with the columns of :data:`GAIN_COLUMNS`."""
        return pd.DataFrame(self.rows(), columns=GAIN_COLUMNS)

    def to_csv(self) -> str:
        """Convert to CSV text."""
        return self.to_frame().to_csv(index=False, float_format='%.6f')

    def to_json(self) -> Dict[str, Any]:
        """Convert to a JSON object."""
        return {
            'technique_id': self.technique_id,
            'config': self.config.to_json() if self.config is not None else None,
            'k': self.k,
            'seed': self.seed,
            'tasks': {row['task']: row for row in self.rows()},
            'noop': self.noop,
            'folds': [fold.to_json() for fold in self.folds],
        }


def _evaluate(train: Corpus, test: Corpus, tasks: Sequence[str], epochs: int, seed: int, window: int):
    rv = {}
    if MD in tasks:
        tagger = train_tagger(train, epochs=epochs, seed=seed)
        rv[MD] = sum(
            (score_mentions(document.mentions, predict_mentions(tagger, document)) for document in test),
            Score(),
        )
    if RE in tasks:
        model = train_relations(train, epochs=epochs, seed=seed, window=window)
        rv[RE] = sum(
            (
                score_relations(
                    resolve_relations(document, document.relations),
                    resolve_relations(document, predict_relations(model, document)),
                )
                for document in test
            ),
            Score(),
        )
    return rv


def _fingerprint(corpus: Corpus) -> str:
    return hashlib.sha256(serialize_corpus(corpus)).hexdigest()


def cross_validate(
    corpus: Corpus,
    k: int = DEFAULT_FOLDS,
    technique: Optional[TechniqueConfig] = None,
    seed: int = 0,
    *,
    tasks: Sequence[str] = TASKS,
    epochs: int = DEFAULT_EPOCHS,
    window: int = DEFAULT_WINDOW,
    workers: int = 1,
    cache: Optional[MutableMapping[Tuple, Dict[str, Score]]] = None,
    lexicon: Optional[Lexicon] = None,
    provider: Optional[ParaphraseProvider] = None,
    target_types: Optional[Iterable[str]] = None,
    use_tqdm: bool = False,
) -> GainReport:
    """Measure the performance gain of a technique by k-fold cross-validation.

    :param corpus: the annotated corpus
    :param k: the number of folds
    :param technique: the technique augmenting the training folds. Without it, both arms are identical.
    :param seed: the seed of the fold split, the augmentation and the training
    :param tasks: the tasks to score
    :param epochs: the training epochs of the baselines
    :param window: the sentence window of relation candidates
    :param workers: the number of folds evaluated concurrently
    :param cache: memoizes the unaugmented arm across calls, keyed by corpus, folds, seed and model settings
    :param lexicon: the lexicon of the rule-based techniques
    :param provider: the paraphrase provider of the model-based techniques
    :param target_types: restricts mention-level rewrites to these types
    :raises EvaluationError: if the folds can not be made or synthetic documents leak into a test fold
    """
    tasks = tuple(task for task in TASKS if task in tasks)
    if not tasks:
        raise EvaluationError('no task to evaluate')
    if technique is not None:
        get_technique(technique.technique_id).resolve(technique)
    folds = split_folds(corpus, k, seed)
    fingerprint = _fingerprint(corpus) if cache is not None else None

    def _run_fold(fold_index: int) -> FoldResult:
        test_indices = set(folds[fold_index])
        test = corpus.with_documents(corpus.documents[i] for i in sorted(test_indices))
        train = corpus.with_documents(
            document
            for index, document in enumerate(corpus.documents)
            if index not in test_indices
        )
        train_seed = derive_seed(seed, 'train', fold_index)

        key = (fingerprint, k, seed, fold_index, tasks, epochs, window)
        if cache is not None and key in cache:
            baseline = cache[key]
        else:
            baseline = _evaluate(train, test, tasks, epochs, train_seed, window)
            if cache is not None:
                cache[key] = baseline

        if technique is None:
            return FoldResult(fold=fold_index, test_ids=tuple(d.id for d in test), baseline=baseline,
                              augmented=baseline)

        augmenter = Augmenter(lexicon=lexicon, provider=provider, donor=train, target_types=target_types)
        augmentation = augmenter.augment_corpus(train, technique, seed=derive_seed(seed, 'augment', fold_index))
        test_ids = {document.id for document in test}
        leaked = [d.id for d in augmentation.corpus if provenance(d.id) in test_ids]
        if leaked:
            raise EvaluationError(f'synthetic documents {leaked} derive from test documents of fold {fold_index}')

        augmented_train = train.with_documents(train.documents + augmentation.corpus.documents)
        augmented = _evaluate(augmented_train, test, tasks, epochs, train_seed, window)
        logger.info(
            f'fold {fold_index}: '
            + ', '.join(f'{task} {baseline[task].f1:.3f} -> {augmented[task].f1:.3f}' for task in tasks),
        )
        return FoldResult(
            fold=fold_index,
            test_ids=tuple(d.id for d in test),
            baseline=baseline,
            augmented=augmented,
            synthetic_ids=tuple(d.id for d in augmentation.corpus),
            noop=len(augmentation.noop_documents),
        )

    fold_indices = range(len(folds))
    desc = f'{technique.technique_id if technique else "baseline"} folds'
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            results = list(tqdm(executor.map(_run_fold, fold_indices), total=k, desc=desc, disable=not use_tqdm))
    else:
        results = [_run_fold(i) for i in tqdm(fold_indices, desc=desc, disable=not use_tqdm)]

    return GainReport(
        technique_id=technique.technique_id if technique is not None else None,
        config=technique,
        k=k,
        seed=seed,
        tasks=tasks,
        folds=tuple(results),
    )


def dumps_report(report: GainReport) -> str:
    """Serialize a report as deterministic JSON text."""
    return json.dumps(report.to_json(), sort_keys=True, indent=2, ensure_ascii=False) + '\n'
