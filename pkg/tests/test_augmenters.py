# -*- coding: utf-8 -*-

"""Tests for the augmentation techniques."""

import unittest
from collections import Counter
from dataclasses import replace
from typing import Dict, List, Optional

from procaug.augmenters import (
    Augmenter, Param, ParamKind, TechniqueConfig, augment, get_technique, list_techniques,
)
from procaug.constants import ACTIVITY, ACTIVITY_DATA, ACTOR, VERB
from procaug.corpus import Corpus, Document, Mention, Token, serialize_corpus, validate_document
from procaug.errors import InvalidConfigError, ProviderError, UnknownTechniqueError
from procaug.lexicon import LexicalEntry, Lexicon, coarse_pos, get_default_lexicon, load_lexicon
from procaug.providers import IdentityProvider, ParaphraseProvider, RewriteMode, StubProvider, split_marked
from procaug.synthetic import generate_corpus
from procaug.utils import make_rng, provenance
from tests.constants import (
    D1_TEXTS, lexicon_path, make_d1, make_small_lexicon, make_three_sentence_document, make_two_sentence_document,
)


class _FixedProvider(ParaphraseProvider):
    """Rewrites spans by a dictionary, targets to a fixed word, and records what it is asked."""

    name = 'fixed'

    def __init__(self, rewrites: Optional[Dict[str, str]] = None, word: Optional[str] = None):
        self.rewrites = rewrites or {}
        self.word = word
        self.calls: List[List[str]] = []

    def rewrite(self, texts, mode, *, pivot=None, seed=0):  # noqa: D102
        self.calls.append(list(texts))
        if mode is RewriteMode.CONTEXTUAL:
            return [self.word or split_marked(text)[1] for text in texts]
        return [self.rewrites.get(text, text) for text in texts]


class _FailingProvider(ParaphraseProvider):
    """Fails every request."""

    name = 'failing'

    def rewrite(self, texts, mode, *, pivot=None, seed=0):  # noqa: D102
        raise ProviderError('unreachable')


class _ShortProvider(ParaphraseProvider):
    """Answers one text less than asked."""

    name = 'short'

    def rewrite(self, texts, mode, *, pivot=None, seed=0):  # noqa: D102
        return list(texts)[1:]


def _run(
    technique_id: str,
    params,
    document: Document,
    seed: int = 42,
    n_aug: int = 1,
    **kwargs,
):
    """Augment one document with an augmenter built from the keyword arguments."""
    augmenter = Augmenter(**kwargs)
    return augmenter.augment(document, TechniqueConfig(technique_id, params, n_aug=n_aug), make_rng(seed))


def _relations(document: Document):
    return Counter((relation.relation_type, relation.head, relation.tail) for relation in document.relations)


def _directions(document: Document):
    return {
        relation.id: document.get_mention(relation.head).start < document.get_mention(relation.tail).start
        for relation in document.relations
    }


class TestCatalog(unittest.TestCase):
    """Tests the registered techniques and their parameter spaces."""

    def test_identifiers(self):
        """Test that the operations and the catalog identifiers are registered."""
        techniques = list_techniques()
        self.assertEqual(34, len(techniques))
        for technique_id in ('B.3', 'B.8', 'B.62', 'B.79', 'B.106', 'random_insert', 'random_swap'):
            self.assertIn(technique_id, techniques)
        self.assertEqual('random_token_insertion', get_technique('random_insert').name)

    def test_unknown(self):
        """Test that an unknown identifier raises."""
        with self.assertRaises(UnknownTechniqueError) as context:
            get_technique('B.99')
        self.assertIn('B.99', str(context.exception))
        self.assertIsInstance(context.exception, KeyError)

    def test_direction(self):
        """Test that only sentence reordering and concatenation may change relation directions."""
        changing = {technique_id for technique_id in list_techniques() if get_technique(technique_id).changes_direction}
        self.assertEqual({'B.24', 'B.88', 'sentence_reordering', 'sentence_concatenation'}, changing)

    def test_fixed(self):
        """Test the parameters fixed by catalog identifiers."""
        self.assertEqual('adjective_antonym', get_technique('B.3').fixed['mode'])
        self.assertEqual(['p'], [param.name for param in get_technique('B.3').space])
        self.assertEqual(['n_aug'], [param.name for param in get_technique('B.8').search_space])
        self.assertEqual(['pivot'], [param.name for param in get_technique('B.62').space])

    def test_defaults(self):
        """Test the default ranges of probabilities, counts and the augmentation factor."""
        space = get_technique('random_token_deletion').search_space
        p, n_aug = space.get('p'), space.get('n_aug')
        self.assertEqual((0.0, 1.0, 0.1), (p.low, p.high, p.default))
        reordering = get_technique('B.88').space.get('p')
        self.assertEqual((1.0, 0.0), (reordering.default, reordering.identity))
        self.assertEqual((1, 5, 1), (n_aug.low, n_aug.high, n_aug.default))
        n = get_technique('random_insert').space.get('n')
        self.assertEqual((0, 10, 1), (n.low, n.high, n.default))
        pivot = get_technique('B.62').space.get('pivot')
        self.assertEqual(('de', 'fr', 'es'), pivot.choices)
        self.assertEqual('de', pivot.default)

    def test_degenerate_param(self):
        """Test that degenerate bounds and empty choices are rejected."""
        with self.assertRaises(InvalidConfigError):
            Param('x', ParamKind.FLOAT, default=0.0, low=1.0, high=1.0)
        with self.assertRaises(InvalidConfigError):
            Param('x', ParamKind.CATEGORICAL, default='a', choices=())

    def test_resolve(self):
        """Test that configurations outside of the space are rejected."""
        technique = get_technique('B.79')
        self.assertEqual({'p': 0.5}, technique.resolve(TechniqueConfig('B.79', {'p': 0.5})))
        for config in [
            TechniqueConfig('B.79', {'p': 1.5}),
            TechniqueConfig('B.79', {'q': 0.5}),
            TechniqueConfig('B.79', {'p': 'high'}),
            TechniqueConfig('B.79', {}, n_aug=0),
        ]:
            with self.subTest(config=config), self.assertRaises(InvalidConfigError):
                technique.resolve(config)
        with self.assertRaises(InvalidConfigError):
            get_technique('B.3').resolve(TechniqueConfig('B.3', {'mode': 'synonym'}))

    def test_parse(self):
        """Test parsing command line values."""
        self.assertEqual(3, get_technique('random_insert').space.get('n').parse('3'))
        self.assertIs(True, get_technique('B.40').space.get('in_mentions').parse('true'))
        with self.assertRaises(InvalidConfigError):
            get_technique('random_insert').space.get('n').parse('1.5')

    def test_config_json(self):
        """Test the JSON form of a configuration."""
        config = TechniqueConfig('B.79', {'p': 0.3}, n_aug=2)
        self.assertEqual({'technique_id': 'B.79', 'params': {'p': 0.3}, 'n_aug': 2}, config.to_json())
        self.assertEqual(config, TechniqueConfig.from_json(config.to_json()))

    def test_config_from_values(self):
        """Test splitting a search point into parameters and augmentation factor."""
        config = get_technique('B.79').config_from_values({'p': 0.2, 'n_aug': 3})
        self.assertEqual(TechniqueConfig('B.79', {'p': 0.2}, n_aug=3), config)


class TestUniversal(unittest.TestCase):
    """Tests the properties shared by all techniques."""

    @classmethod
    def setUpClass(cls):
        """Generate the documents augmented by every technique."""
        cls.corpus = generate_corpus(8, seed=11)

    def test_identity_configurations(self):
        """Test that every technique has a configuration leaving documents unchanged."""
        documents = [make_d1(), make_three_sentence_document()] + list(self.corpus)[:3]
        augmenter = Augmenter(provider=IdentityProvider())
        for technique_id in list_techniques():
            config = get_technique(technique_id).identity_config(n_aug=2)
            for document in documents:
                with self.subTest(technique=technique_id, document=document.id):
                    result = augmenter.augment(document, config, make_rng(7))
                    self.assertEqual(2, len(result.documents))
                    for replica, augmented in enumerate(result.documents):
                        self.assertEqual(f'{document.id}-aug{replica}', augmented.id)
                        self.assertEqual(document, augmented.with_id(document.id))

    def test_default_configurations(self):
        """Test that every technique keeps documents valid and conserves mentions, relations and directions."""
        for technique_id in list_techniques():
            technique = get_technique(technique_id)
            params = dict(technique.default_config().params)
            if 'p' in technique.space:
                params['p'] = 0.6
            config = TechniqueConfig(technique_id, params, n_aug=2)
            with self.subTest(technique=technique_id):
                augmentation = Augmenter().augment_corpus(self.corpus, config, seed=5)
                self.assertEqual(2 * len(self.corpus), len(augmentation.corpus))
                for augmented in augmentation.corpus:
                    original = self.corpus.get_document(provenance(augmented.id))
                    self.assertEqual([], validate_document(augmented))
                    self.assertEqual(len(original.mentions), len(augmented.mentions))
                    self.assertEqual(_relations(original), _relations(augmented))
                    if not technique.changes_direction:
                        self.assertEqual(_directions(original), _directions(augmented))

    def test_workers(self):
        """Test that the result does not depend on the number of workers."""
        config = TechniqueConfig('B.79', {'p': 0.3}, n_aug=2)
        single = Augmenter().augment_corpus(self.corpus, config, seed=3, workers=1)
        threaded = Augmenter().augment_corpus(self.corpus, config, seed=3, workers=4)
        self.assertEqual(serialize_corpus(single.corpus), serialize_corpus(threaded.corpus))
        self.assertEqual(
            [f'{document.id}-aug{replica}' for document in self.corpus for replica in range(2)],
            [document.id for document in single.corpus],
        )

    def test_module_function(self):
        """Test augmenting with the default resources."""
        documents = augment(make_d1(), TechniqueConfig('B.79', {'p': 0.0}, n_aug=3), make_rng(1))
        self.assertEqual(['D1-aug0', 'D1-aug1', 'D1-aug2'], [document.id for document in documents])

    def test_module_function_provider(self):
        """Test that the model-based techniques use the same default provider with or without augmenter."""
        for technique_id in ('B.8', 'B.26'):
            with self.subTest(technique=technique_id):
                config = TechniqueConfig(technique_id, {'p': 1.0} if technique_id == 'B.26' else {})
                documents = augment(make_three_sentence_document(), config, make_rng(4))
                result = Augmenter().augment(make_three_sentence_document(), config, make_rng(4))
                self.assertEqual(list(result.documents), documents)


class TestTokenTechniques(unittest.TestCase):
    """Tests deleting, inserting and swapping tokens."""

    def test_deletion_all(self):
        """Test that deleting every free token keeps the mentions."""
        result = _run('random_token_deletion', {'p': 1.0}, make_d1())
        document = result.documents[0]
        self.assertEqual(['a', 'claim', 'registered', 'it', 'examined'], document.texts)
        self.assertEqual([(0, 1), (2, 2), (3, 3), (4, 4)], [mention.span for mention in document.mentions])
        self.assertEqual(_relations(make_d1()), _relations(document))

    def test_deletion_half(self):
        """Test deleting tokens with probability one half."""
        document = _run('B.79', {'p': 0.5}, make_d1(), seed=42).documents[0]
        self.assertEqual([], validate_document(document))
        self.assertTrue(4 <= len(document) <= 10)

    def test_insertion(self):
        """Test inserting three tokens."""
        document = _run('random_insert', {'n': 3}, make_d1()).documents[0]
        self.assertEqual(13, len(document))
        self.assertEqual(4, len(document.mentions))
        self.assertEqual([2, 1, 1, 1], [len(mention) for mention in document.mentions])
        self.assertEqual(_relations(make_d1()), _relations(document))

    def test_insertion_reproducible(self):
        """Test that the same seed gives the same document."""
        first = _run('random_insert', {'n': 3}, make_d1(), seed=9).documents[0]
        second = _run('random_insert', {'n': 3}, make_d1(), seed=9).documents[0]
        self.assertEqual(serialize_corpus(Corpus((first,))), serialize_corpus(Corpus((second,))))

    def test_swap(self):
        """Test that swaps conserve the tokens and the spans."""
        document = _run('random_swap', {'s': 5}, make_d1()).documents[0]
        self.assertEqual(sorted(D1_TEXTS), sorted(document.texts))
        self.assertEqual([mention.span for mention in make_d1().mentions], [m.span for m in document.mentions])

    def test_swap_single_token(self):
        """Test that a single token document can not be swapped."""
        result = _run('random_swap', {'s': 3}, Document('x', tokens=[Token('Approve', 0)]))
        self.assertTrue(result.noop)
        self.assertEqual(['Approve'], result.documents[0].texts)


class TestInsertionTechniques(unittest.TestCase):
    """Tests inserting fillers and synonyms."""

    def test_fillers(self):
        """Test inserting a filler at every sentence start and after every comma."""
        lexicon = make_small_lexicon(fillers=('I think',))
        document = _run('B.40', {'p': 1.0, 'in_mentions': False}, make_d1(), lexicon=lexicon).documents[0]
        self.assertEqual(
            ['I', 'think', 'After', 'a', 'claim', 'is', 'registered', ',', 'I', 'think', 'it', 'is', 'examined', '.'],
            document.texts,
        )
        self.assertEqual([(3, 4), (6, 6), (10, 10), (12, 12)], [mention.span for mention in document.mentions])

    def test_fillers_in_mentions(self):
        """Test that a filler inserted inside a mention extends it."""
        lexicon = make_small_lexicon(fillers=('I think',))
        document = _run('B.40', {'p': 1.0, 'in_mentions': True}, make_d1(), lexicon=lexicon).documents[0]
        mention = document.get_mention('M1')
        self.assertEqual(['a', 'I', 'think', 'claim'], document.mention_text(mention))
        self.assertEqual([4, 1, 1, 1], [len(mention) for mention in document.mentions])

    def test_synonym_insertion(self):
        """Test inserting the synonym of the only word in the lexicon."""
        document = _run('B.100', {'p': 1.0}, make_d1(), lexicon=make_small_lexicon()).documents[0]
        self.assertEqual(D1_TEXTS[:8] + ['inspected', 'examined', '.'], document.texts)
        self.assertEqual((8, 9), document.get_mention('M4').span)

    def test_synonym_insertion_case(self):
        """Test that the synonym inserted before a capitalized word is capitalized."""
        tokens = list(make_d1().tokens)
        tokens[8] = replace(tokens[8], text='Examined')
        result = _run('B.100', {'p': 1.0}, replace(make_d1(), tokens=tuple(tokens)), lexicon=make_small_lexicon())
        self.assertEqual(['Inspected', 'Examined', '.'], result.documents[0].texts[8:])

    def test_synonym_insertion_empty_lexicon(self):
        """Test that nothing is inserted without lexicon."""
        result = _run('B.100', {'p': 1.0}, make_d1(), lexicon=Lexicon())
        self.assertTrue(result.noop)
        self.assertEqual(D1_TEXTS, result.documents[0].texts)


class TestSubstitutionTechniques(unittest.TestCase):
    """Tests substituting words by synonyms, antonyms and abbreviations."""

    def test_synonym(self):
        """Test that exactly the words covered by the lexicon are substituted."""
        document = _run('B.101', {'p': 1.0}, make_d1(), lexicon=make_small_lexicon()).documents[0]
        expected = list(D1_TEXTS)
        expected[8] = 'inspected'
        self.assertEqual(expected, document.texts)

    def test_adjective_antonym(self):
        """Test substituting an adjective by its antonym."""
        original = Document(
            'x',
            tokens=[Token(text, 0) for text in ['The', 'form', 'is', 'valid', '.']],
            mentions=[Mention('M1', ACTIVITY_DATA, 0, 1)],
        )
        document = _run('B.3', {'p': 1.0}, original, lexicon=load_lexicon(lexicon_path)).documents[0]
        self.assertEqual(['The', 'form', 'is', 'invalid', '.'], document.texts)

    def test_antonym_even_single(self):
        """Test that a document with one antonym site is left unchanged."""
        lexicon = Lexicon(entries={('examined', VERB): LexicalEntry(antonyms=('ignored',))}, pos={'examined': VERB})
        result = _run('B.5', {'k': 1}, make_d1(), lexicon=lexicon)
        self.assertTrue(result.noop)
        self.assertEqual(D1_TEXTS, result.documents[0].texts)

    def test_antonym_even_pair(self):
        """Test that an even number of words is substituted."""
        lexicon = Lexicon(
            entries={
                ('examined', VERB): LexicalEntry(antonyms=('ignored',)),
                ('registered', VERB): LexicalEntry(antonyms=('deleted',)),
            },
            pos={'examined': VERB, 'registered': VERB},
        )
        document = _run('B.5', {'k': 1}, make_d1(), lexicon=lexicon).documents[0]
        self.assertEqual('deleted', document.tokens[4].text)
        self.assertEqual('ignored', document.tokens[8].text)

    def test_negation_removal(self):
        """Test removing the negation of an auxiliary."""
        original = Document(
            'x',
            tokens=[Token(text, 0) for text in ['The', 'claim', 'is', 'not', 'valid', '.']],
            mentions=[Mention('M1', ACTIVITY_DATA, 0, 1)],
        )
        document = _run('B.6', {'p': 1.0}, original).documents[0]
        self.assertEqual(['The', 'claim', 'is', 'valid', '.'], document.texts)

    def test_negation_removal_without_negation(self):
        """Test that D1 has nothing to remove."""
        result = _run('B.6', {'p': 1.0}, make_d1())
        self.assertTrue(result.noop)

    def test_negation_removal_labelled(self):
        """Test that a negation making up a whole mention is kept."""
        original = Document(
            'x',
            tokens=[Token(text, 0) for text in ['it', 'is', 'not']],
            mentions=[Mention('M1', ACTIVITY, 2, 2)],
        )
        result = _run('B.6', {'p': 1.0}, original)
        self.assertEqual(['it', 'is', 'not'], result.documents[0].texts)
        self.assertEqual(1, result.n_rejected)

    def test_abbreviation_round_trip(self):
        """Test expanding an abbreviation inside a mention and contracting it back."""
        lexicon = load_lexicon(lexicon_path)
        original = Document(
            'x',
            tokens=[Token(text, 0) for text in ['The', 'MPOO', 'signs', 'the', 'form', '.']],
            mentions=[Mention('M1', ACTOR, 0, 1), Mention('M2', ACTIVITY, 2, 2)],
        )
        expanded = _run('B.82', {'p': 1.0}, original, lexicon=lexicon).documents[0]
        self.assertEqual(
            ['The', 'Manager', ',', 'Post', 'Office', 'Operations'],
            expanded.mention_text(expanded.get_mention('M1')),
        )
        contracted = _run('B.82', {'p': 1.0}, expanded.with_id('x'), lexicon=lexicon).documents[0]
        self.assertEqual(original, contracted.with_id('x'))

    def test_abbreviation_identity(self):
        """Test that nothing is toggled with probability zero."""
        original = Document('x', tokens=[Token(text, 0) for text in ['The', 'MPOO', 'signs']])
        document = _run('B.82', {'p': 0.0}, original, lexicon=load_lexicon(lexicon_path)).documents[0]
        self.assertEqual(['The', 'MPOO', 'signs'], document.texts)


class TestMentionTechniques(unittest.TestCase):
    """Tests replacing mentions and shuffling segments."""

    def test_mention_replacement(self):
        """Test that every mention is replaced by the other mention of its type."""
        document = _run('B.39', {'p': 1.0}, make_d1()).documents[0]
        self.assertEqual(['After', 'it', 'is', 'examined', ',', 'a', 'claim', 'is', 'registered', '.'], document.texts)
        self.assertEqual(['examined'], document.mention_text(document.get_mention('M2')))
        self.assertEqual(['a', 'claim'], document.mention_text(document.get_mention('M3')))

    def test_mention_replacement_single(self):
        """Test that the only mention of a type is never replaced."""
        original = make_d1()
        original = replace(original, mentions=original.mentions[:2] + (
            Mention('M3', ACTOR, 6, 6),
            original.mentions[3],
        ))
        document = _run('B.39', {'p': 1.0}, original).documents[0]
        self.assertEqual(['a', 'claim'], document.mention_text(document.get_mention('M1')))
        self.assertEqual(['it'], document.mention_text(document.get_mention('M3')))
        self.assertEqual(['examined'], document.mention_text(document.get_mention('M2')))

    def test_shuffle(self):
        """Test that shuffling keeps the tokens of every segment and the spans."""
        original = make_three_sentence_document()
        document = _run('B.90', {'p': 1.0}, original).documents[0]
        self.assertEqual([m.span for m in original.mentions], [m.span for m in document.mentions])
        for mention in original.mentions:
            self.assertEqual(
                sorted(original.mention_text(mention)),
                sorted(document.mention_text(document.get_mention(mention.id))),
            )
        self.assertEqual(sorted(original.texts), sorted(document.texts))


class TestSentenceTechniques(unittest.TestCase):
    """Tests reordering and concatenating sentences."""

    def test_reordering_single_sentence(self):
        """Test that a single sentence can not be reordered."""
        for technique_id in ('sentence_reordering', 'B.88'):
            result = _run(technique_id, {}, make_d1())
            self.assertTrue(result.noop)
            self.assertEqual(D1_TEXTS, result.documents[0].texts)

    def test_reordering(self):
        """Test that reordering keeps every sentence and changes their order."""
        original = make_three_sentence_document()
        document = _run('B.88', {}, original).documents[0]

        def _sentences(d):
            return [tuple(d.texts[start:end + 1]) for start, end in d.sentence_spans()]

        self.assertEqual(sorted(_sentences(original)), sorted(_sentences(document)))
        self.assertNotEqual(_sentences(original), _sentences(document))

    def test_reordering_displacement(self):
        """Test that sentences move by at most the maximum displacement."""
        original = make_three_sentence_document()
        positions = {
            tuple(original.texts[start:end + 1]): index
            for index, (start, end) in enumerate(original.sentence_spans())
        }
        for seed in range(5):
            document = _run('B.88', {'max_displacement': 1}, original, seed=seed).documents[0]
            for index, (start, end) in enumerate(document.sentence_spans()):
                self.assertLessEqual(abs(positions[tuple(document.texts[start:end + 1])] - index), 1)

    def test_concatenation(self):
        """Test that concatenating two sentences drops the full stop between them."""
        document = _run('B.24', {'n_merges': 1}, make_two_sentence_document()).documents[0]
        self.assertEqual(11, len(document))
        self.assertEqual(1, len(document.sentence_spans()))
        self.assertEqual(['The', 'clerk', 'checks', 'the', 'form', 'The'], document.texts[:6])

    def test_concatenation_random_pair(self):
        """Test concatenating two sentences which are not adjacent."""
        document = _run('B.24', {'n_merges': 1, 'adjacent': False}, make_three_sentence_document()).documents[0]
        self.assertEqual(17, len(document))
        self.assertEqual(2, len(document.sentence_spans()))


class TestSubsequenceSubstitution(unittest.TestCase):
    """Tests substituting subsequences from a donor corpus."""

    def test_tags_conserved(self):
        """Test that every substituted token keeps its coarse POS tag."""
        donor = generate_corpus(10, seed=1)
        lexicon = get_default_lexicon()
        original = generate_corpus(1, seed=2).documents[0]
        document = _run('B.103', {'p': 1.0, 'length': 1}, original, donor=donor).documents[0]
        self.assertEqual(len(original), len(document))
        self.assertEqual(
            [coarse_pos(lexicon, text) for text in original.texts],
            [coarse_pos(lexicon, text) for text in document.texts],
        )

    def test_missing_tag_sequence(self):
        """Test that a document whose free spans have no donor counterpart is left unchanged."""
        donor = Corpus((Document('donor', tokens=[Token('.', 0)]),))
        result = _run('B.103', {'p': 1.0, 'length': 2}, make_d1(), donor=donor)
        self.assertTrue(result.noop)
        self.assertEqual(D1_TEXTS, result.documents[0].texts)


class TestModelTechniques(unittest.TestCase):
    """Tests the techniques relying on a paraphrase provider."""

    def test_paraphrase_identity(self):
        """Test that the identity provider leaves documents unchanged."""
        document = _run('B.8', {}, make_d1(), provider=IdentityProvider()).documents[0]
        self.assertEqual(make_d1(), document.with_id('D1'))

    def test_paraphrase_spans(self):
        """Test that every segment is rewritten separately and mentions keep covering their rewrite."""
        provider = _FixedProvider(rewrites={'a claim': 'the claim', 'After': 'Once'})
        document = _run('B.62', {'pivot': 'fr'}, make_d1(), provider=provider).documents[0]
        self.assertEqual([['After', 'a claim', 'is', 'registered', ',', 'it', 'is', 'examined', '.']], provider.calls)
        self.assertEqual(['Once', 'the', 'claim'], document.texts[:3])
        self.assertEqual((1, 2), document.get_mention('M1').span)

    def test_paraphrase_empty_rewrite(self):
        """Test that a mention rewritten to nothing keeps its text."""
        provider = _FixedProvider(rewrites={'a claim': ''})
        document = _run('B.8', {}, make_d1(), provider=provider).documents[0]
        self.assertEqual(D1_TEXTS, document.texts)

    def test_paraphrase_failures(self):
        """Test that provider failures leave the document unchanged."""
        for provider in (_FailingProvider(), _ShortProvider()):
            with self.subTest(provider=provider.name):
                document = _run('B.8', {}, make_d1(), provider=provider).documents[0]
                self.assertEqual(D1_TEXTS, document.texts)

    def test_fixed_word(self):
        """Test that every free word is replaced by the provider's word."""
        provider = _FixedProvider(word='foo')
        document = _run('B.26', {'p': 1.0}, make_d1(), provider=provider).documents[0]
        self.assertEqual(['foo', 'a', 'claim', 'foo', 'registered', ',', 'it', 'foo', 'examined', '.'], document.texts)
        self.assertIn('<t>After</t> a claim is registered , it is examined .', provider.calls[0])

    def test_fixed_word_in_mentions(self):
        """Test that mention words are replaced when allowed."""
        provider = _FixedProvider(word='foo')
        document = _run('B.106', {'p': 1.0, 'in_mentions': True}, make_d1(), provider=provider).documents[0]
        self.assertEqual(['foo'] * 5 + [','] + ['foo'] * 3 + ['.'], document.texts)

    def test_model_identity(self):
        """Test that the identity provider proposes the words themselves."""
        document = _run('B.106', {'p': 1.0, 'in_mentions': True}, make_d1(), provider=IdentityProvider()).documents[0]
        self.assertEqual(D1_TEXTS, document.texts)

    def test_stub_deterministic(self):
        """Test that the stub provider gives the same output for the same seed."""
        provider = StubProvider()
        first = _run('B.106', {'p': 1.0}, make_three_sentence_document(), seed=3, provider=provider)
        second = _run('B.106', {'p': 1.0}, make_three_sentence_document(), seed=3, provider=provider)
        self.assertEqual(first.documents, second.documents)

    def test_target_types(self):
        """Test that mention rewrites are restricted to the target types."""
        provider = _FixedProvider(word='foo')
        document = _run(
            'B.106', {'p': 1.0, 'in_mentions': True}, make_d1(), provider=provider, target_types=[ACTIVITY],
        ).documents[0]
        self.assertEqual(['a', 'claim'], document.mention_text(document.get_mention('M1')))
        self.assertEqual(['foo'], document.mention_text(document.get_mention('M2')))


class TestAnnotationPreservation(unittest.TestCase):
    """Tests every operation over many seeds."""

    def test_operations(self):
        """Test that every operation keeps documents valid and conserves mentions, relations and directions."""
        corpus = generate_corpus(20, seed=0)
        augmenter = Augmenter()
        operations = sorted({get_technique(technique_id).name for technique_id in list_techniques()})
        self.assertEqual(15, len(operations))
        for operation in operations:
            technique = get_technique(operation)
            params = dict(technique.default_config().params)
            if 'p' in technique.space:
                params['p'] = 0.5
            for seed in range(200):
                with self.subTest(operation=operation, seed=seed):
                    augmentation = augmenter.augment_corpus(corpus, TechniqueConfig(operation, params), seed=seed)
                    for augmented in augmentation.corpus:
                        original = corpus.get_document(provenance(augmented.id))
                        self.assertEqual([], validate_document(augmented))
                        self.assertEqual(len(original.mentions), len(augmented.mentions))
                        self.assertEqual(_relations(original), _relations(augmented))
                        if not technique.changes_direction:
                            self.assertEqual(_directions(original), _directions(augmented))
