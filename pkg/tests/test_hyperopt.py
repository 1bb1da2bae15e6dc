# -*- coding: utf-8 -*-

"""Tests for the hyper-parameter search."""

import json
import math
import unittest

import numpy as np

from procaug.augmenters import Param, ParamKind, ParamSpace, TechniqueConfig, get_technique
from procaug.constants import MD
from procaug.errors import EvaluationError, OptimizationError, UnknownTechniqueError
from procaug.hyperopt import (
    TRIAL_COLUMNS, TrialRecord, TrialStatus, best_trial, optimize, optimize_objective, suggest, trials_to_frame,
)
from procaug.synthetic import generate_corpus
from procaug.utils import make_rng

X = Param('x', ParamKind.FLOAT, default=0.5, low=0.0, high=1.0)
SPACE = ParamSpace((X,))
MIXED_SPACE = ParamSpace((
    X,
    Param('n', ParamKind.INT, default=1, low=0, high=10),
    Param('c', ParamKind.CATEGORICAL, default='a', choices=('a', 'b', 'c')),
))


def _parabola(values) -> float:
    return -(values['x'] - 0.3) ** 2


def _record(trial_index: int, x: float, objective, status=TrialStatus.COMPLETE) -> TrialRecord:
    return TrialRecord(trial_index=trial_index, values={'x': x}, objective=objective, status=status)


class TestSuggest(unittest.TestCase):
    """Tests proposing points."""

    def test_errors(self):
        """Test that empty spaces and invalid settings are rejected."""
        with self.assertRaises(OptimizationError):
            suggest(ParamSpace(), [])
        for gamma in (0.0, 1.0, 1.5):
            with self.subTest(gamma=gamma), self.assertRaises(OptimizationError):
                suggest(SPACE, [], gamma=gamma)
        with self.assertRaises(OptimizationError):
            suggest(SPACE, [], n_candidates=0)

    def test_startup(self):
        """Test that points are drawn uniformly until enough trials completed."""
        history = [_record(i, 0.1 * i, -float(i)) for i in range(4)]
        self.assertEqual(
            MIXED_SPACE.sample(np.random.default_rng(3)),
            suggest(MIXED_SPACE, [], rng=np.random.default_rng(3)),
        )
        self.assertEqual(
            SPACE.sample(np.random.default_rng(3)),
            suggest(SPACE, history, rng=np.random.default_rng(3), n_startup=5),
        )

    def test_failed_ignored(self):
        """Test that failed trials do not count as completed."""
        history = [_record(i, 0.1 * i, None, TrialStatus.FAILED) for i in range(8)]
        self.assertEqual(
            SPACE.sample(np.random.default_rng(5)),
            suggest(SPACE, history, rng=np.random.default_rng(5)),
        )

    def test_within_space(self):
        """Test that proposals lie in the space and have the kinds of its dimensions."""
        rng = np.random.default_rng(0)
        history = [
            TrialRecord(trial_index=i, values=MIXED_SPACE.sample(rng), objective=float(rng.random()))
            for i in range(12)
        ]
        for _ in range(20):
            values = suggest(MIXED_SPACE, history, rng=rng)
            self.assertEqual(values, MIXED_SPACE.validate(values))
            self.assertIsInstance(values['n'], int)
            self.assertIsInstance(values['x'], float)

    def test_favors_good_region(self):
        """Test that proposals after the startup concentrate around the good trials."""
        history = [_record(i, x, _parabola({'x': x})) for i, x in enumerate(np.linspace(0.0, 1.0, 11))]
        rng = np.random.default_rng(1)
        proposals = [suggest(SPACE, history, rng=rng)['x'] for _ in range(50)]
        self.assertLess(float(np.mean([abs(x - 0.3) for x in proposals])), 0.2)


class TestOptimizeObjective(unittest.TestCase):
    """Tests the sequential search loop."""

    def test_parabola(self):
        """Test that the search finds the maximum of a parabola and beats random search on average."""
        tpe_distances, random_distances = [], []
        for seed in range(3):
            values, records = optimize_objective(SPACE, _parabola, n_trials=30, seed=seed)
            self.assertEqual(30, len(records))
            self.assertLess(abs(values['x'] - 0.3), 0.1)
            tpe_distances.extend(abs(record.values['x'] - 0.3) for record in records[5:])
            rng = make_rng(seed, 'random')
            random_distances.extend(abs(SPACE.sample(rng)['x'] - 0.3) for _ in range(25))
        self.assertLess(np.mean(tpe_distances), np.mean(random_distances))

    def test_deterministic(self):
        """Test that the same seed gives the same trials."""
        _, first = optimize_objective(MIXED_SPACE, _parabola, n_trials=10, seed=4)
        _, second = optimize_objective(MIXED_SPACE, _parabola, n_trials=10, seed=4)
        self.assertEqual(first, second)

    def test_failures(self):
        """Test that raising and non-finite objectives are recorded as failed trials."""
        def _objective(values):
            if values['x'] < 0.5:
                raise EvaluationError('too small')
            return math.nan if values['x'] > 0.9 else values['x']

        values, records = optimize_objective(SPACE, _objective, n_trials=20, seed=0)
        for record in records:
            if record.status is TrialStatus.FAILED:
                self.assertIsNone(record.objective)
            else:
                self.assertTrue(0.5 <= record.values['x'] <= 0.9)
        self.assertEqual(best_trial(records).values, values)

    def test_all_failed(self):
        """Test that a search without completed trial raises."""
        def _objective(values):
            raise EvaluationError('never')

        with self.assertRaises(OptimizationError):
            optimize_objective(SPACE, _objective, n_trials=3)

    def test_unexpected_error(self):
        """Test that errors foreign to the package are not swallowed."""
        def _objective(values):
            raise ZeroDivisionError

        with self.assertRaises(ZeroDivisionError):
            optimize_objective(SPACE, _objective, n_trials=1)

    def test_resume(self):
        """Test that previous trials count towards the number of trials."""
        history = [_record(i, 0.1 * (i + 1), -float(i)) for i in range(3)]
        seen = []
        _, records = optimize_objective(SPACE, _parabola, n_trials=5, history=history, callback=seen.append)
        self.assertEqual(history, records[:3])
        self.assertEqual([3, 4], [record.trial_index for record in seen])
        self.assertEqual(records[3:], seen)

        values, records = optimize_objective(SPACE, _parabola, n_trials=2, history=history)
        self.assertEqual(history, records)
        self.assertEqual({'x': 0.1}, values)


class TestRecords(unittest.TestCase):
    """Tests trial records."""

    def test_best_ties(self):
        """Test that the earliest trial wins ties."""
        records = [
            _record(0, 0.1, 0.5),
            _record(1, 0.2, None, TrialStatus.FAILED),
            _record(2, 0.3, 0.7),
            _record(3, 0.4, 0.7),
        ]
        self.assertEqual(2, best_trial(records).trial_index)
        with self.assertRaises(OptimizationError):
            best_trial(records[1:2])

    def test_config(self):
        """Test building the technique configuration of a trial."""
        record = TrialRecord(trial_index=0, values={'p': 0.2, 'n_aug': 2}, objective=0.1, technique_id='B.79')
        self.assertEqual(TechniqueConfig('B.79', {'p': 0.2}, n_aug=2), record.config)
        self.assertEqual('{"n_aug": 2, "p": 0.2}', record.params_json)
        with self.assertRaises(OptimizationError):
            _ = _record(0, 0.1, 0.1).config

    def test_frame(self):
        """Test the columns of the trial log."""
        records = [
            TrialRecord(0, {'p': 0.2, 'n_aug': 1}, 0.01, technique_id='B.79', task=MD),
            TrialRecord(1, {'p': 0.4, 'n_aug': 2}, None, TrialStatus.FAILED, technique_id='B.79', task=MD),
        ]
        frame = trials_to_frame(records)
        self.assertEqual(TRIAL_COLUMNS, list(frame.columns))
        self.assertEqual(['complete', 'failed'], list(frame['status']))
        self.assertEqual({'p': 0.4, 'n_aug': 2}, json.loads(frame['params_json'][1]))


class TestOptimize(unittest.TestCase):
    """Tests searching a technique configuration."""

    def test_search(self):
        """Test a short search of the deletion probability."""
        corpus = generate_corpus(6, seed=0)
        config, records = optimize('B.79', corpus, MD, n_trials=2, seed=0, k=2, epochs=1)
        self.assertEqual('B.79', config.technique_id)
        get_technique('B.79').resolve(config)
        self.assertEqual(2, len(records))
        self.assertEqual({'p', 'n_aug'}, set(records[0].values))
        self.assertTrue(all(record.task == MD for record in records))

    def test_errors(self):
        """Test that unknown tasks and techniques are rejected."""
        corpus = generate_corpus(4, seed=0)
        with self.assertRaises(OptimizationError):
            optimize('B.79', corpus, 'ner', n_trials=1)
        with self.assertRaises(UnknownTechniqueError):
            optimize('B.99', corpus, MD, n_trials=1)
