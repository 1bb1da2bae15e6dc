# -*- coding: utf-8 -*-

"""Tests for corpus statistics."""

import unittest
from dataclasses import replace

from procaug.augmenters import Augmenter, TechniqueConfig, get_technique, list_techniques
from procaug.constants import FLOW
from procaug.corpus import Corpus, Relation
from procaug.stats import STATS_COLUMNS, compare_stats, corpus_stats, deltas_to_frame
from procaug.synthetic import generate_corpus
from tests.constants import make_corpus, make_d1, make_three_sentence_document


class TestCorpusStats(unittest.TestCase):
    """Tests the characteristics of a corpus."""

    def test_d1(self):
        """Test the characteristics of D1."""
        stats = corpus_stats(make_corpus(make_d1()))
        self.assertEqual(9, stats.vocabulary_size)
        self.assertAlmostEqual(1.25, stats.mean_mention_length)
        self.assertEqual(1.0, stats.direction_fraction)
        self.assertEqual((1, 10, 4, 1), (stats.n_documents, stats.n_tokens, stats.n_mentions, stats.n_relations))

    def test_backward(self):
        """Test that a relation from a later to an earlier mention is backward."""
        document = replace(make_d1(), relations=(Relation('R1', FLOW, 'M4', 'M2'), Relation('R2', FLOW, 'M2', 'M4')))
        self.assertEqual(0.5, corpus_stats(make_corpus(document)).direction_fraction)

    def test_empty(self):
        """Test that an empty corpus has null characteristics."""
        stats = corpus_stats(Corpus())
        self.assertEqual((0, 0.0, 0.0), (stats.vocabulary_size, stats.mean_mention_length, stats.direction_fraction))


class TestCompareStats(unittest.TestCase):
    """Tests the change of characteristics under augmentation."""

    def test_same(self):
        """Test that a corpus compared to itself did not change."""
        corpus = make_corpus(make_d1(), make_three_sentence_document())
        delta = compare_stats(corpus, corpus)
        self.assertEqual(0, delta.vocab_delta)
        self.assertEqual(0.0, delta.mention_len_delta)
        self.assertEqual(0.0, delta.direction_flip_rate)
        self.assertEqual(9, delta.compared_relations)
        self.assertEqual(0, delta.unmatched_relations)
        self.assertEqual(1.0, delta.to_json()['relative']['vocabulary_size'])

    def test_reordering(self):
        """Test that reordering sentences flips flows and nothing else."""
        corpus = make_corpus(make_three_sentence_document())
        augmented = Augmenter().augment_corpus(corpus, TechniqueConfig('B.88'), seed=0).corpus
        delta = compare_stats(corpus, augmented)
        self.assertEqual(8, delta.compared_relations)
        self.assertGreater(delta.direction_flip_rate, 0.0)
        self.assertLessEqual(delta.direction_flip_rate, 0.25)
        self.assertEqual(0, delta.vocab_delta)

    def test_deletion(self):
        """Test that deleting free tokens shrinks the vocabulary and keeps directions."""
        corpus = make_corpus(make_d1())
        augmented = Augmenter().augment_corpus(corpus, TechniqueConfig('B.79', {'p': 1.0}), seed=0).corpus
        delta = compare_stats(corpus, augmented)
        self.assertEqual(-4, delta.vocab_delta)
        self.assertEqual(0.0, delta.mention_len_delta)
        self.assertEqual(0.0, delta.direction_flip_rate)

    def test_unmatched(self):
        """Test that relations without counterpart are counted apart."""
        document = make_d1()
        synthetic = replace(document, id='D1-aug0', relations=(Relation('R7', FLOW, 'M2', 'M4'),))
        delta = compare_stats(make_corpus(document), make_corpus(synthetic))
        self.assertEqual((0, 1), (delta.compared_relations, delta.unmatched_relations))
        self.assertEqual(0.0, delta.direction_flip_rate)

    def test_relative_without_original(self):
        """Test that relative changes of null characteristics are undefined."""
        delta = compare_stats(Corpus(), make_corpus(make_d1()))
        self.assertIsNone(delta.to_json()['relative']['vocabulary_size'])
        self.assertEqual(9, delta.to_json()['absolute']['vocabulary_size'])

    def test_frame(self):
        """Test the columns of the stats table."""
        corpus = make_corpus(make_d1())
        frame = deltas_to_frame([('none', compare_stats(corpus, corpus))])
        self.assertEqual(STATS_COLUMNS, list(frame.columns))
        self.assertEqual(['none'], list(frame['technique_id']))


class TestTechniqueStats(unittest.TestCase):
    """Tests how techniques move the characteristics of a corpus."""

    def test_directions_kept(self):
        """Test that only the sentence level techniques flip relation directions."""
        corpus = make_corpus(make_three_sentence_document(), make_d1())
        augmenter = Augmenter()
        for technique_id in list_techniques():
            technique = get_technique(technique_id)
            if technique.changes_direction:
                continue
            for seed in range(100):
                with self.subTest(technique=technique_id, seed=seed):
                    augmented = augmenter.augment_corpus(corpus, technique.default_config(), seed=seed).corpus
                    self.assertEqual(0.0, compare_stats(corpus, augmented).direction_flip_rate)

    def test_reordering_flips(self):
        """Test that the default reordering of sentences linked by flows flips directions in almost every run."""
        corpus = make_corpus(make_three_sentence_document())
        augmenter = Augmenter()
        flipped = sum(
            compare_stats(corpus, augmenter.augment_corpus(corpus, TechniqueConfig('B.88'), seed=seed).corpus)
            .direction_flip_rate > 0.0
            for seed in range(100)
        )
        self.assertGreaterEqual(flipped, 95)

    def test_shuffle(self):
        """Test that shuffling within segments keeps the vocabulary and the mention lengths."""
        corpus = generate_corpus(10, seed=0)
        config = TechniqueConfig('shuffle_within_segments', {'p': 1.0})
        for seed in range(5):
            with self.subTest(seed=seed):
                delta = compare_stats(corpus, Augmenter().augment_corpus(corpus, config, seed=seed).corpus)
                self.assertEqual(0, delta.vocab_delta)
                self.assertAlmostEqual(0.0, delta.mention_len_delta)

    def test_fillers_in_mentions(self):
        """Test that inserting fillers into mentions makes them longer."""
        corpus = generate_corpus(20, seed=0)
        config = TechniqueConfig('filler_word_insertion', {'p': 0.3, 'in_mentions': True})
        for seed in range(5):
            with self.subTest(seed=seed):
                delta = compare_stats(corpus, Augmenter().augment_corpus(corpus, config, seed=seed).corpus)
                self.assertGreater(delta.mention_len_delta, 0.0)
