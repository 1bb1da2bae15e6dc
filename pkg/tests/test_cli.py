# -*- coding: utf-8 -*-

"""Tests for the command line interface."""

import json
import os

import pandas as pd
from click.testing import CliRunner

from procaug.cli import main
from procaug.corpus import read_corpus
from procaug.stats import STATS_COLUMNS
from procaug.utils import provenance
from tests.constants import TemporaryDirectoryMixin, d1_path


class TestCli(TemporaryDirectoryMixin):
    """Tests the commands on small corpora."""

    def setUp(self):
        """Generate a corpus file."""
        super().setUp()
        self.runner = CliRunner()
        self.corpus_path = os.path.join(self.directory, 'generated', 'corpus.json')
        self._invoke('generate', '--documents', '6', '--seed', '0', '--out', os.path.join(self.directory, 'generated'))

    def _invoke(self, *args: str, exit_code: int = 0):
        result = self.runner.invoke(main, list(args))
        self.assertEqual(exit_code, result.exit_code, msg=result.output)
        return result

    def _path(self, *parts: str) -> str:
        return os.path.join(self.directory, *parts)

    def _read(self, *parts: str) -> bytes:
        with open(self._path(*parts), 'rb') as file:
            return file.read()

    def test_generate(self):
        """Test that the generated corpus and its manifest are written."""
        self.assertEqual(6, len(read_corpus(self.corpus_path)))
        manifest = json.loads(self._read('generated', 'manifest.json'))
        self.assertEqual('generate', manifest['command'])
        self.assertEqual(0, manifest['seed'])
        self.assertIn('version', manifest)

    def test_augment(self):
        """Test that originals are written with their synthetic documents and stats."""
        self._invoke(
            'augment', '--corpus', self.corpus_path, '--technique', 'B.79', '--params', 'p=0.5', '--n-aug', '2',
            '--seed', '1', '--out', self._path('augmented'),
        )
        corpus = read_corpus(self._path('augmented', 'corpus.json'))
        self.assertEqual(18, len(corpus))
        self.assertEqual(12, sum(1 for document in corpus if provenance(document.id) != document.id))
        frame = pd.read_csv(self._path('augmented', 'stats.csv'))
        self.assertEqual(STATS_COLUMNS, list(frame.columns))
        self.assertEqual(['B.79'], list(frame['technique_id']))
        manifest = json.loads(self._read('augmented', 'manifest.json'))
        self.assertEqual('augment', manifest['command'])
        self.assertEqual({'p': 0.5}, manifest['config']['params'])
        self.assertEqual(2, manifest['config']['n_aug'])

    def test_reproducible(self):
        """Test that reruns with the same seed write the same bytes at any number of workers."""
        commands = {
            'augment': (['--technique', 'random_swap', '--params', 's=3'], ['corpus.json', 'stats.csv', 'stats.json']),
            'evaluate': (
                ['--technique', 'B.79', '--params', 'p=0.3', '--folds', '2', '--epochs', '1'],
                ['report.json', 'report.csv'],
            ),
            'optimize': (
                ['--technique', 'B.79', '--task', 'md', '--trials', '2', '--folds', '2', '--epochs', '1'],
                ['trials.csv', 'best_config.json'],
            ),
        }
        for command, (options, names) in commands.items():
            for workers in ('1', '8'):
                self._invoke(
                    command, '--corpus', self.corpus_path, *options, '--seed', '5',
                    '--out', self._path(command, workers), '--workers', workers,
                )
            for name in [*names, 'manifest.json']:
                with self.subTest(command=command, name=name):
                    self.assertEqual(self._read(command, '1', name), self._read(command, '8', name))

    def test_unknown_technique(self):
        """Test that an unknown technique is a usage error naming it."""
        result = self._invoke(
            'augment', '--corpus', self.corpus_path, '--technique', 'B.99', '--seed', '0', '--out', self._path('x'),
            exit_code=2,
        )
        self.assertIn('B.99', result.output)
        self.assertFalse(os.path.exists(self._path('x')))

    def test_invalid_params(self):
        """Test that parameters outside of the space are usage errors."""
        for technique_id, params in [
            ('B.79', 'p=1.5'),
            ('B.79', 'q=0.5'),
            ('B.79', 'p'),
            ('random_insert', 'n=1.5'),
            ('B.3', 'mode=synonym'),
        ]:
            with self.subTest(technique=technique_id, params=params):
                self._invoke(
                    'augment', '--corpus', self.corpus_path, '--technique', technique_id, '--params', params,
                    '--seed', '0', '--out', self._path('x'), exit_code=2,
                )

    def test_fixed_param(self):
        """Test that repeating the value fixed by a catalog identifier is accepted."""
        self._invoke(
            'augment', '--corpus', self.corpus_path, '--technique', 'B.3', '--params', 'mode=adjective_antonym',
            '--seed', '0', '--out', self._path('antonyms'),
        )

    def test_invalid_provider(self):
        """Test that an unknown provider is a usage error."""
        self._invoke(
            'augment', '--corpus', self.corpus_path, '--technique', 'B.8', '--provider', 'bert', '--seed', '0',
            '--out', self._path('x'), exit_code=2,
        )

    def test_invalid_corpus(self):
        """Test that a malformed corpus fails without output."""
        path = self._path('bad.json')
        with open(path, 'w') as file:
            file.write('{"documents": [}')
        result = self._invoke(
            'augment', '--corpus', path, '--technique', 'B.79', '--seed', '0', '--out', self._path('x'), exit_code=1,
        )
        self.assertIn('line 1', result.output)
        self.assertFalse(os.path.exists(self._path('x')))

    def test_evaluate_baseline(self):
        """Test that the gain is zero without technique."""
        self._invoke(
            'evaluate', '--corpus', self.corpus_path, '--folds', '2', '--epochs', '1', '--seed', '0',
            '--out', self._path('report'),
        )
        frame = pd.read_csv(self._path('report', 'report.csv'))
        self.assertEqual(['md', 're'], list(frame['task']))
        self.assertEqual([0.0, 0.0], list(frame['gain']))
        report = json.loads(self._read('report', 'report.json'))
        self.assertIsNone(report['technique_id'])
        self.assertEqual(2, len(report['folds']))

    def test_evaluate_technique(self):
        """Test evaluating a technique on one task."""
        self._invoke(
            'evaluate', '--corpus', self.corpus_path, '--technique', 'random_insert', '--params', 'n=2',
            '--task', 'md', '--folds', '2', '--epochs', '1', '--seed', '0', '--out', self._path('report'),
        )
        frame = pd.read_csv(self._path('report', 'report.csv'))
        self.assertEqual(['random_insert'], list(frame['technique_id']))
        self.assertAlmostEqual(
            frame['augmented_f1'][0] - frame['baseline_f1'][0], frame['gain'][0], places=5,
        )

    def test_optimize(self):
        """Test a short stored search and its summary."""
        connection = f'sqlite:///{self._path("trials.db")}'
        self._invoke(
            'optimize', '--corpus', self.corpus_path, '--technique', 'B.79', '--task', 'md', '--trials', '2',
            '--folds', '2', '--epochs', '1', '--seed', '0', '--out', self._path('search'),
            '--connection', connection, '--study', 'deletion',
        )
        frame = pd.read_csv(self._path('search', 'trials.csv'))
        self.assertEqual([0, 1], list(frame['trial']))
        best = json.loads(self._read('search', 'best_config.json'))
        self.assertEqual('B.79', best['technique_id'])
        self.assertEqual({'p'}, set(best['params']))

        result = self._invoke('summarize', '--connection', connection)
        self.assertIn('studies: 1', result.output)
        self.assertIn('trials: 2', result.output)
        self.assertIn('deletion', result.output)

    def test_analyze(self):
        """Test that a corpus compared to itself did not change."""
        self._invoke(
            'analyze', '--original', d1_path, '--augmented', d1_path, '--label', 'identity', '--seed', '0',
            '--out', self._path('stats'),
        )
        stats = json.loads(self._read('stats', 'stats.json'))
        self.assertEqual(0, stats['absolute']['vocabulary_size'])
        self.assertEqual(0.0, stats['direction_flip_rate'])
        frame = pd.read_csv(self._path('stats', 'stats.csv'))
        self.assertEqual(['identity'], list(frame['technique_id']))

    def test_version(self):
        """Test the version option."""
        result = self._invoke('--version')
        self.assertIn('version', result.output)

    def test_verbose(self):
        """Test that the verbosity option is accepted by the commands."""
        self._invoke('generate', '--documents', '2', '--seed', '0', '--out', self._path('verbose'), '-vv')
        self._invoke('summarize', '--connection', f'sqlite:///{self._path("empty.db")}', '-v')
        self.assertEqual(2, len(read_corpus(self._path('verbose', 'corpus.json'))))
