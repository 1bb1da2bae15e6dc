# -*- coding: utf-8 -*-

"""Annotation-preserving augmentation techniques.

Each technique plans a list of :mod:`procaug.edits` edits for a document; the edit engine applies them and keeps
mention spans and relations intact. Techniques are registered under their operation name and under the catalog
identifiers of :data:`procaug.constants.infos` (``B.79``, ``random_insert``, ...), the latter possibly fixing some
parameters (``B.3`` is :func:`lexicon_substitution` with ``mode=adjective_antonym``).
"""

import logging
import math
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np
from tqdm import tqdm

from .constants import ADJ, AUGMENTED_SUFFIX, AUXILIARIES, NEGATIONS, OTHER, PIVOT_LANGUAGES, infos
from .corpus import Corpus, Document, validate_document
from .edits import (
    DeleteTokens, Edit, InsertTokens, MergeSentences, PermuteSentences, RemapReport, ReplaceSpan, SentencePolicy,
    SwapTokens, apply_edit, apply_edits, is_interior, segments,
)
from .errors import AugmentationError, InvalidConfigError, ProviderError, UnknownTechniqueError
from .lexicon import Lexicon, coarse_pos, get_default_lexicon, match_case
from .providers import ParaphraseProvider, RewriteMode, StubProvider, mark_target
from .utils import make_rng

__all__ = [
    'ParamKind',
    'Param',
    'ParamSpace',
    'TechniqueConfig',
    'Technique',
    'AugmentationResult',
    'CorpusAugmentation',
    'Augmenter',
    'get_technique',
    'list_techniques',
    'augment',
]

logger = logging.getLogger(__name__)

#: Attempts at drawing a permutation within the displacement bound before falling back to a transposition
MAX_PERMUTATION_ATTEMPTS = 1000


class ParamKind(Enum):
    """The kind of a technique parameter."""

    FLOAT = 'float'
    INT = 'int'
    CATEGORICAL = 'categorical'


@dataclass(frozen=True)
class Param:
    """A dimension of a parameter space."""

    name: str
    kind: ParamKind
    default: Any
    low: Optional[float] = None
    high: Optional[float] = None
    choices: Tuple[Any, ...] = ()
    #: The value under which the technique leaves documents unchanged, if any
    identity: Any = None

    def __post_init__(self):  # noqa: D105
        object.__setattr__(self, 'choices', tuple(self.choices))
        if self.kind is ParamKind.CATEGORICAL:
            if not self.choices or len(set(self.choices)) != len(self.choices):
                raise InvalidConfigError(f'{self.name}: choices should be unique and non-empty')
        elif self.low is None or self.high is None or not math.isfinite(self.low) or not math.isfinite(self.high):
            raise InvalidConfigError(f'{self.name}: bounds should be finite')
        elif not self.low < self.high:
            raise InvalidConfigError(f'{self.name}: bounds [{self.low}, {self.high}] are degenerate')
        self.validate(self.default)

    def validate(self, value: Any) -> Any:
        """Check that the value lies in this dimension and return it in its canonical type."""
        if self.kind is ParamKind.CATEGORICAL:
            for choice in self.choices:
                if value == choice and type(value) is type(choice):
                    return choice
            raise InvalidConfigError(f'{self.name}={value!r} not in {self.choices}')
        if isinstance(value, bool) or not isinstance(value, (int, float, np.integer, np.floating)):
            raise InvalidConfigError(f'{self.name}={value!r} is not a number')
        if self.kind is ParamKind.INT:
            if int(value) != value:
                raise InvalidConfigError(f'{self.name}={value!r} is not an integer')
            value = int(value)
        else:
            value = float(value)
        if not self.low <= value <= self.high:
            raise InvalidConfigError(f'{self.name}={value!r} outside of [{self.low}, {self.high}]')
        return value

    def parse(self, text: str) -> Any:
        """Parse the command line form of a value of this dimension."""
        if self.kind is ParamKind.CATEGORICAL:
            for choice in self.choices:
                if str(choice).lower() == text.lower():
                    return choice
            raise InvalidConfigError(f'{self.name}={text!r} not in {self.choices}')
        try:
            value = int(text) if self.kind is ParamKind.INT else float(text)
        except ValueError as e:
            raise InvalidConfigError(f'{self.name}={text!r} is not a {self.kind.value}') from e
        return self.validate(value)

    def sample(self, rng: np.random.Generator) -> Any:
        """Draw a value uniformly from this dimension."""
        if self.kind is ParamKind.CATEGORICAL:
            return self.choices[int(rng.integers(len(self.choices)))]
        if self.kind is ParamKind.INT:
            return int(rng.integers(int(self.low), int(self.high) + 1))
        return float(rng.uniform(self.low, self.high))


def _probability(name: str = 'p', default: float = 0.1) -> Param:
    return Param(name, ParamKind.FLOAT, default=default, low=0.0, high=1.0, identity=0.0)


def _count(name: str) -> Param:
    return Param(name, ParamKind.INT, default=1, low=0, high=10, identity=0)


N_AUG = Param('n_aug', ParamKind.INT, default=1, low=1, high=5)
IN_MENTIONS = Param('in_mentions', ParamKind.CATEGORICAL, default=False, choices=(False, True))
PIVOT = Param('pivot', ParamKind.CATEGORICAL, default='de', choices=PIVOT_LANGUAGES)
SUBSTITUTION_MODE = Param(
    'mode', ParamKind.CATEGORICAL, default='synonym', choices=('synonym', 'adjective_antonym', 'antonym_even'),
)
MAX_DISPLACEMENT = Param('max_displacement', ParamKind.INT, default=0, low=0, high=10)
ADJACENT = Param('adjacent', ParamKind.CATEGORICAL, default=True, choices=(True, False))
LENGTH = Param('length', ParamKind.INT, default=2, low=1, high=4)


@dataclass(frozen=True)
class ParamSpace:
    """The parameters of a technique."""

    params: Tuple[Param, ...] = ()

    def __post_init__(self):  # noqa: D105
        object.__setattr__(self, 'params', tuple(self.params))
        names = [param.name for param in self.params]
        if len(set(names)) != len(names):
            raise InvalidConfigError(f'duplicate parameter names in {names}')

    def __iter__(self):  # noqa: D105
        return iter(self.params)

    def __len__(self) -> int:  # noqa: D105
        return len(self.params)

    def __contains__(self, name: str) -> bool:  # noqa: D105
        return any(param.name == name for param in self.params)

    def get(self, name: str) -> Param:
        """Get a dimension by its name."""
        for param in self.params:
            if param.name == name:
                return param
        raise InvalidConfigError(f'unknown parameter {name!r}, expected one of {[p.name for p in self.params]}')

    def defaults(self) -> Dict[str, Any]:
        """Get the default value of every dimension."""
        return {param.name: param.default for param in self.params}

    def validate(self, values: Mapping[str, Any]) -> Dict[str, Any]:
        """Check the values and complete them with defaults."""
        for name in values:
            self.get(name)
        return {
            param.name: param.validate(values[param.name]) if param.name in values else param.default
            for param in self.params
        }

    def sample(self, rng: np.random.Generator) -> Dict[str, Any]:
        """Draw a value uniformly from every dimension, in declaration order."""
        return {param.name: param.sample(rng) for param in self.params}


@dataclass(frozen=True)
class TechniqueConfig:
    """A technique identifier, its parameter values and the number of synthetic documents per original."""

    technique_id: str
    params: Mapping[str, Any] = field(default_factory=dict)
    n_aug: int = 1

    def to_json(self) -> Dict[str, Any]:
        """Convert this configuration to a JSON object."""
        return {'technique_id': self.technique_id, 'params': dict(sorted(self.params.items())), 'n_aug': self.n_aug}

    @classmethod
    def from_json(cls, obj: Mapping[str, Any]) -> 'TechniqueConfig':
        """Build a configuration from its JSON object."""
        return cls(technique_id=obj['technique_id'], params=dict(obj.get('params', {})), n_aug=obj.get('n_aug', 1))


class AugmentationResources:
    """The lexicon, provider and donor corpus a technique may draw on."""

    def __init__(
        self,
        lexicon: Lexicon,
        provider: ParaphraseProvider,
        donor: Optional[Corpus] = None,
        target_types: Optional[FrozenSet[str]] = None,
    ):
        self.lexicon = lexicon
        self.provider = provider
        self.donor = donor
        self.target_types = target_types
        self._lock = threading.Lock()
        self._vocabulary: Optional[List[str]] = None
        self._indexes: Dict[int, Dict[Tuple[str, ...], List[Tuple[str, ...]]]] = {}

    def targets(self, mention_type: str) -> bool:
        """Return if mentions of the type may be rewritten."""
        return self.target_types is None or mention_type in self.target_types

    def vocabulary(self) -> List[str]:
        """Get the sorted token texts of the donor corpus."""
        with self._lock:
            if self._vocabulary is None:
                self._vocabulary = self.donor.vocabulary() if self.donor is not None else []
            return self._vocabulary

    def subsequence_index(self, length: int) -> Dict[Tuple[str, ...], List[Tuple[str, ...]]]:
        """Index the free-span subsequences of the donor corpus by their coarse POS tag sequence."""
        with self._lock:
            if length not in self._indexes:
                index: Dict[Tuple[str, ...], set] = {}
                for document in (self.donor or ()):
                    texts = document.texts
                    for segment in segments(document):
                        if not segment.is_free:
                            continue
                        for start in range(segment.start, segment.end - length + 2):
                            window = tuple(texts[start:start + length])
                            key = tuple(coarse_pos(self.lexicon, text) for text in window)
                            index.setdefault(key, set()).add(window)
                self._indexes[length] = {key: sorted(windows) for key, windows in sorted(index.items())}
            return self._indexes[length]


#: A technique plans edits for a document, or returns None if it does not apply to it
Operation = Callable[[Document, Mapping[str, Any], np.random.Generator, AugmentationResources], Optional[List[Edit]]]


def _choose(rng: np.random.Generator, items: Sequence[Any]) -> Any:
    return items[int(rng.integers(len(items)))]


def _free_indices(document: Document) -> List[int]:
    return [index for index in range(len(document)) if document.mention_at(index) is None]


def _is_word(text: str) -> bool:
    return any(character.isalnum() for character in text)


def _synonyms(lexicon: Lexicon, text: str) -> List[str]:
    tag = coarse_pos(lexicon, text)
    return lexicon.synonyms(text, tag) if tag != OTHER else lexicon.synonyms(text)


def _single_replacements(document: Document, replacements: Mapping[int, Sequence[str]]) -> List[Edit]:
    """Replace single tokens, right to left so that earlier indices stay valid."""
    return [
        ReplaceSpan(index, index, tuple(replacements[index]))
        for index in sorted(replacements, reverse=True)
    ]


def _safe_rewrite(
    resources: AugmentationResources,
    texts: List[str],
    mode: RewriteMode,
    seed: int,
    pivot: Optional[str] = None,
) -> Optional[List[str]]:
    try:
        rv = resources.provider.rewrite(texts, mode, pivot=pivot, seed=seed)
    except ProviderError as e:
        logger.warning(f'provider {resources.provider.name} failed, keeping the original spans: {e}')
        return None
    if len(rv) != len(texts):
        logger.warning(f'provider {resources.provider.name} answered {len(rv)} texts for {len(texts)}, ignoring')
        return None
    return rv


def random_token_deletion(document, params, rng, resources) -> Optional[List[Edit]]:
    """Delete each token outside of all mentions with probability ``p``."""
    free = _free_indices(document)
    if not free:
        return None
    deleted = {index for index in free if rng.random() < params['p']}
    if len(deleted) == len(document):
        deleted.discard(_choose(rng, free))
    return [DeleteTokens(deleted)]


def random_token_insertion(document, params, rng, resources) -> Optional[List[Edit]]:
    """Insert ``n`` tokens of the corpus vocabulary at positions not strictly inside a mention."""
    vocabulary = resources.vocabulary() or sorted(set(document.texts))
    if not vocabulary:
        return None
    positions = [position for position in range(len(document) + 1) if not is_interior(document, position)]
    insertions = [
        (_choose(rng, positions), _choose(rng, vocabulary))
        for _ in range(params['n'])
    ]
    return [
        InsertTokens(position, (text,))
        for position, text in sorted(insertions, key=lambda pair: pair[0], reverse=True)
    ]


def random_token_swap(document, params, rng, resources) -> Optional[List[Edit]]:
    """Perform ``s`` swaps of token pairs lying both outside of mentions or both in the same mention."""
    groups = [_free_indices(document)] + [
        list(range(mention.start, mention.end + 1))
        for mention in document.mentions
    ]
    weights = np.array([len(group) * (len(group) - 1) / 2 for group in groups], dtype=float)
    if not weights.sum():
        return None
    weights /= weights.sum()
    edits = []
    for _ in range(params['s']):
        group = groups[int(rng.choice(len(groups), p=weights))]
        i, j = sorted(int(index) for index in rng.choice(group, size=2, replace=False))
        edits.append(SwapTokens(i, j))
    return edits


def filler_word_insertion(document, params, rng, resources) -> Optional[List[Edit]]:
    """Insert filler phrases at sentence starts and after commas, and inside mentions if ``in_mentions``."""
    points = {start for start, _ in document.sentence_spans()}
    points.update(index + 1 for index, token in enumerate(document.tokens[:-1]) if token.text == ',')
    if params['in_mentions']:
        for mention in document.mentions:
            if resources.targets(mention.mention_type):
                points.update(range(mention.start + 1, mention.end + 1))
    eligible = sorted(
        point
        for point in points
        if params['in_mentions'] or not is_interior(document, point)
    )
    if not eligible:
        return None
    chosen = [point for point in eligible if rng.random() < params['p']]
    return [
        InsertTokens(point, tuple(_choose(rng, resources.lexicon.fillers).split()), SentencePolicy.NEXT)
        for point in reversed(chosen)
    ]


def synonym_insertion(document, params, rng, resources) -> Optional[List[Edit]]:
    """Insert a synonym right before words with probability ``p``; inside a mention the synonym joins it."""
    lexicon = resources.lexicon
    sites = [
        (index, candidates)
        for index, token in enumerate(document.tokens)
        if not lexicon.is_stopword(token.text)
        for candidates in [_synonyms(lexicon, token.text)]
        if candidates
    ]
    if not sites:
        return None
    replacements = {}
    for index, candidates in sites:
        if rng.random() < params['p']:
            text = document.tokens[index].text
            replacements[index] = [*match_case(text, _choose(rng, candidates)).split(), text]
    return _single_replacements(document, replacements)


def lexicon_substitution(document, params, rng, resources) -> Optional[List[Edit]]:
    """Substitute words with synonyms, adjectives with antonyms, or an even number of words with antonyms."""
    lexicon = resources.lexicon
    mode = params['mode']
    sites = []
    for index, token in enumerate(document.tokens):
        if lexicon.is_stopword(token.text):
            continue
        if mode == 'synonym':
            candidates = _synonyms(lexicon, token.text)
        elif mode == 'adjective_antonym':
            candidates = lexicon.antonyms(token.text, ADJ) if coarse_pos(lexicon, token.text) == ADJ else []
        else:
            candidates = lexicon.antonyms(token.text)
        if candidates:
            sites.append((index, candidates))

    if mode == 'antonym_even':
        if len(sites) < 2:
            return None
        size = min(2 * params['k'], len(sites) - len(sites) % 2)
        picked = sorted(int(position) for position in rng.choice(len(sites), size=size, replace=False))
        chosen = [sites[position] for position in picked]
    elif not sites:
        return None
    else:
        chosen = [site for site in sites if rng.random() < params['p']]

    return _single_replacements(document, {
        index: match_case(document.tokens[index].text, _choose(rng, candidates)).split()
        for index, candidates in chosen
    })


def auxiliary_negation_removal(document, params, rng, resources) -> Optional[List[Edit]]:
    """Delete ``not`` and ``n't`` following an auxiliary with probability ``p``."""
    tokens = document.tokens
    sites = [
        index
        for index in range(1, len(tokens))
        if tokens[index].text.lower() in NEGATIONS
        and tokens[index - 1].text.lower() in AUXILIARIES
        and tokens[index].sentence_index == tokens[index - 1].sentence_index
    ]
    if not sites:
        return None
    chosen = [index for index in sites if rng.random() < params['p']]
    # one edit per site: a rejected deletion does not block the others
    return [DeleteTokens({index}) for index in reversed(chosen)]


def _same_region(document: Document, start: int, end: int) -> bool:
    """Return if the range lies in one sentence and either inside one mention or outside of all mentions."""
    if document.tokens[start].sentence_index != document.tokens[end].sentence_index:
        return False
    mentions = {document.mention_at(index) for index in range(start, end + 1)}
    if len(mentions) != 1:
        return False
    mention = mentions.pop()
    return mention is None or (mention.start <= start and end <= mention.end)


def abbreviation_toggle(document, params, rng, resources) -> Optional[List[Edit]]:
    """Expand abbreviations to their long forms and contract long forms, each with probability ``p``."""
    lexicon = resources.lexicon
    texts = document.texts
    lengths = sorted({len(long) for long in lexicon.long_forms}, reverse=True)
    matches = []
    index = 0
    while index < len(texts):
        for length in lengths:
            end = index + length - 1
            if end >= len(texts):
                continue
            short = lexicon.contract(texts[index:end + 1])
            if short is not None and _same_region(document, index, end):
                matches.append((index, end, (short,)))
                index = end + 1
                break
        else:
            long = lexicon.expand(texts[index])
            if long is not None:
                matches.append((index, index, long))
            index += 1
    if not matches:
        return None
    chosen = [match for match in matches if rng.random() < params['p']]
    return [ReplaceSpan(start, end, replacement) for start, end, replacement in reversed(chosen)]


def _restyle(replacement: List[str], at_sentence_start: bool) -> List[str]:
    """Adapt the capitalization of a moved span to its new position."""
    first = replacement[0]
    if at_sentence_start:
        first = first[:1].upper() + first[1:]
    elif first.istitle() and len(first) > 1:
        first = first[:1].lower() + first[1:]
    return [first, *replacement[1:]]


def mention_replacement(document, params, rng, resources) -> Optional[List[Edit]]:
    """Replace mentions with probability ``p`` by another mention of the same type from the document."""
    by_type: Dict[str, list] = {}
    for mention in document.mentions:
        by_type.setdefault(mention.mention_type, []).append(mention)
    eligible = [
        mention
        for mention in document.mentions
        if len(by_type[mention.mention_type]) > 1 and resources.targets(mention.mention_type)
    ]
    if not eligible:
        return None
    sentence_starts = {start for start, _ in document.sentence_spans()}
    edits = []
    for mention in eligible:
        if rng.random() >= params['p']:
            continue
        donor = _choose(rng, [other for other in by_type[mention.mention_type] if other.id != mention.id])
        replacement = document.mention_text(donor)
        if mention.start in sentence_starts or donor.start in sentence_starts:
            replacement = _restyle(replacement, at_sentence_start=mention.start in sentence_starts)
        edits.append(ReplaceSpan(mention.start, mention.end, tuple(replacement)))
    return sorted(edits, key=lambda edit: edit.start, reverse=True)


def _permutation_swaps(start: int, permutation: Sequence[int]) -> List[Edit]:
    """Decompose a permutation of the range starting at ``start`` into swaps."""
    current = list(range(len(permutation)))
    edits = []
    for target, wanted in enumerate(permutation):
        position = current.index(wanted)
        if position != target:
            current[target], current[position] = current[position], current[target]
            edits.append(SwapTokens(start + target, start + position))
    return edits


def shuffle_within_segments(document, params, rng, resources) -> Optional[List[Edit]]:
    """Shuffle the tokens within mention spans and free spans, each segment with probability ``p``."""
    eligible = [
        segment
        for segment in segments(document)
        if len(segment) > 1 and (segment.is_free or resources.targets(segment.mention.mention_type))
    ]
    if not eligible:
        return None
    edits = []
    for segment in eligible:
        if rng.random() < params['p']:
            edits.extend(_permutation_swaps(segment.start, [int(i) for i in rng.permutation(len(segment))]))
    return edits


def _random_permutation(rng: np.random.Generator, size: int, max_displacement: int) -> List[int]:
    identity = list(range(size))
    for _ in range(MAX_PERMUTATION_ATTEMPTS):
        permutation = [int(i) for i in rng.permutation(size)]
        if permutation == identity:
            continue
        if max_displacement and any(abs(old - new) > max_displacement for new, old in enumerate(permutation)):
            continue
        return permutation
    position = int(rng.integers(size - 1))
    identity[position], identity[position + 1] = identity[position + 1], identity[position]
    return identity


def sentence_reordering(document, params, rng, resources) -> Optional[List[Edit]]:
    """Reorder the sentences with probability ``p`` by a random non-identity permutation."""
    n_sentences = len(document.sentence_spans())
    if n_sentences < 2:
        return None
    if rng.random() >= params['p']:
        return []
    return [PermuteSentences(_random_permutation(rng, n_sentences, params['max_displacement']))]


def sentence_concatenation(document, params, rng, resources) -> Optional[List[Edit]]:
    """Merge ``n_merges`` sentence pairs, adjacent ones or two random sentences brought together first."""
    if len(document.sentence_spans()) < 2:
        return None
    working = document
    edits: List[Edit] = []
    for _ in range(params['n_merges']):
        n_sentences = len(working.sentence_spans())
        if n_sentences < 2:
            break
        if params['adjacent']:
            planned = [MergeSentences(int(rng.integers(n_sentences - 1)))]
        else:
            first, second = sorted(int(i) for i in rng.choice(n_sentences, size=2, replace=False))
            order = [*range(first + 1), second, *range(first + 1, second), *range(second + 1, n_sentences)]
            planned = [PermuteSentences(order), MergeSentences(first)] if second > first + 1 else [
                MergeSentences(first),
            ]
        for edit in planned:
            working, _ = apply_edit(working, edit)
            edits.append(edit)
    return edits


def subsequence_substitution(document, params, rng, resources) -> Optional[List[Edit]]:
    """Replace free-span subsequences with donor subsequences having the same coarse POS tags."""
    length = params['length']
    index = resources.subsequence_index(length)
    lexicon = resources.lexicon
    texts = document.texts
    sites = []
    for segment in segments(document):
        if not segment.is_free:
            continue
        for start in range(segment.start, segment.end - length + 2, length):
            key = tuple(coarse_pos(lexicon, text) for text in texts[start:start + length])
            if key in index:
                sites.append((start, key))
    if not sites:
        return None
    edits = []
    for start, key in sites:
        if rng.random() < params['p']:
            edits.append(ReplaceSpan(start, start + length - 1, _choose(rng, index[key])))
    return list(reversed(edits))


def paraphrase_spans(document, params, rng, resources) -> Optional[List[Edit]]:
    """Back-translate every mention span and free span separately through the paraphrase provider."""
    pieces = [
        segment
        for segment in segments(document)
        if segment.is_free or resources.targets(segment.mention.mention_type)
    ]
    if not pieces:
        return None
    texts = document.texts
    originals = [texts[segment.start:segment.end + 1] for segment in pieces]
    seed = int(rng.integers(2 ** 31))
    rewrites = _safe_rewrite(resources, [' '.join(tokens) for tokens in originals], RewriteMode.BACK_TRANSLATE,
                             seed=seed, pivot=params['pivot'])
    if rewrites is None:
        return []
    edits = []
    for segment, original, rewrite in zip(reversed(pieces), reversed(originals), reversed(rewrites)):
        tokens = rewrite.split()
        # an empty rewrite keeps the original span
        if tokens and tokens != original:
            edits.append(ReplaceSpan(segment.start, segment.end, tuple(tokens)))
    return edits


def model_word_replacement(document, params, rng, resources) -> Optional[List[Edit]]:
    """Replace words with probability ``p`` by the provider's proposal given their sentence."""
    eligible = []
    for index, token in enumerate(document.tokens):
        if not _is_word(token.text):
            continue
        mention = document.mention_at(index)
        if mention is None or (params['in_mentions'] and resources.targets(mention.mention_type)):
            eligible.append(index)
    if not eligible:
        return None
    chosen = [index for index in eligible if rng.random() < params['p']]
    if not chosen:
        return []
    sentence_of = {
        index: (start, end)
        for start, end in document.sentence_spans()
        for index in range(start, end + 1)
    }
    texts = document.texts
    marked = [
        mark_target(texts[sentence_of[index][0]:sentence_of[index][1] + 1], index - sentence_of[index][0])
        for index in chosen
    ]
    rewrites = _safe_rewrite(resources, marked, RewriteMode.CONTEXTUAL, seed=int(rng.integers(2 ** 31)))
    if rewrites is None:
        return []
    return _single_replacements(document, {
        index: rewrite.split()
        for index, rewrite in zip(chosen, rewrites)
        if rewrite.split() and rewrite.split() != [texts[index]]
    })


@dataclass(frozen=True)
class Technique:
    """A registered technique: an operation, its tunable parameters and the parameters it fixes."""

    technique_id: str
    operation: Operation
    space: ParamSpace
    fixed: Mapping[str, Any] = field(default_factory=dict)

    @property
    def name(self) -> str:  # noqa: D401
        """The name of the operation behind this technique."""
        return self.operation.__name__

    @property
    def changes_direction(self) -> bool:  # noqa: D401
        """If this technique may change the head/tail order of relations."""
        return self.name in {'sentence_reordering', 'sentence_concatenation'}

    @property
    def search_space(self) -> ParamSpace:  # noqa: D401
        """The tunable parameters plus the augmentation factor."""
        return ParamSpace(self.space.params + (N_AUG,))

    def resolve(self, config: TechniqueConfig) -> Dict[str, Any]:
        """Validate a configuration and return the full parameter values passed to the operation."""
        if isinstance(config.n_aug, bool) or not isinstance(config.n_aug, (int, np.integer)) or config.n_aug < 1:
            raise InvalidConfigError(f'n_aug should be a positive integer, got {config.n_aug!r}')
        free = {name: value for name, value in config.params.items() if name not in self.fixed}
        for name, value in config.params.items():
            if name in self.fixed and value != self.fixed[name]:
                raise InvalidConfigError(f'{self.technique_id} fixes {name}={self.fixed[name]!r}, got {value!r}')
        return {**self.space.validate(free), **self.fixed}

    def default_config(self, n_aug: int = 1) -> TechniqueConfig:
        """Get the configuration with default parameter values."""
        return TechniqueConfig(self.technique_id, self.space.defaults(), n_aug=n_aug)

    def identity_config(self, n_aug: int = 1) -> TechniqueConfig:
        """Get a configuration under which the technique leaves documents unchanged.

        The model-based techniques additionally need an identity provider.
        """
        params = {
            param.name: param.default if param.identity is None else param.identity
            for param in self.space
        }
        return TechniqueConfig(self.technique_id, params, n_aug=n_aug)

    def config_from_values(self, values: Mapping[str, Any]) -> TechniqueConfig:
        """Build a configuration from a point of :attr:`search_space`."""
        params = {name: value for name, value in values.items() if name != N_AUG.name}
        return TechniqueConfig(self.technique_id, params, n_aug=int(values.get(N_AUG.name, 1)))


_OPERATIONS: Dict[str, Tuple[Operation, Tuple[Param, ...]]] = {
    operation.__name__: (operation, params)
    for operation, params in [
        (random_token_deletion, (_probability(),)),
        (random_token_insertion, (_count('n'),)),
        (random_token_swap, (_count('s'),)),
        (filler_word_insertion, (_probability(), IN_MENTIONS)),
        (synonym_insertion, (_probability(),)),
        (lexicon_substitution, (SUBSTITUTION_MODE, _probability(), _count('k'))),
        (auxiliary_negation_removal, (_probability(),)),
        (abbreviation_toggle, (_probability(),)),
        (mention_replacement, (_probability(),)),
        (shuffle_within_segments, (_probability(),)),
        (sentence_reordering, (_probability(default=1.0), MAX_DISPLACEMENT)),
        (sentence_concatenation, (_count('n_merges'), ADJACENT)),
        (subsequence_substitution, (_probability(), LENGTH)),
        (paraphrase_spans, (PIVOT,)),
        (model_word_replacement, (_probability(), IN_MENTIONS)),
    ]
}

#: Parameters fixed by a catalog identifier, and the parameters it leaves tunable
_CATALOG: Dict[str, Tuple[Dict[str, Any], Optional[Tuple[str, ...]]]] = {
    'B.3': ({'mode': 'adjective_antonym'}, ('p',)),
    'B.5': ({'mode': 'antonym_even'}, ('k',)),
    'B.101': ({'mode': 'synonym'}, ('p',)),
    'B.8': ({'pivot': 'de'}, ()),
    'B.26': ({'in_mentions': False}, ('p',)),
}

TECHNIQUES: Dict[str, Technique] = {
    name: Technique(technique_id=name, operation=operation, space=ParamSpace(params))
    for name, (operation, params) in _OPERATIONS.items()
}
for _technique_id, _info in infos.items():
    _operation, _params = _OPERATIONS[_info.operation]
    _fixed, _tunable = _CATALOG.get(_technique_id, ({}, None))
    TECHNIQUES[_technique_id] = Technique(
        technique_id=_technique_id,
        operation=_operation,
        space=ParamSpace(tuple(
            param
            for param in _params
            if param.name not in _fixed and (_tunable is None or param.name in _tunable)
        )),
        fixed={
            **{param.name: param.default for param in _params if _tunable is not None and param.name not in _tunable},
            **_fixed,
        },
    )


def get_technique(technique_id: str) -> Technique:
    """Get a registered technique.

    :raises UnknownTechniqueError: if the identifier is not registered
    """
    try:
        return TECHNIQUES[technique_id]
    except KeyError:
        raise UnknownTechniqueError(technique_id) from None


def list_techniques() -> List[str]:
    """List the registered technique identifiers: operation names first, then catalog identifiers."""
    return list(TECHNIQUES)


@dataclass(frozen=True)
class AugmentationResult:
    """The synthetic documents produced from one original."""

    documents: Tuple[Document, ...]
    noop: bool = False
    reports: Tuple[RemapReport, ...] = ()

    @property
    def n_rejected(self) -> int:  # noqa: D401
        """The number of edits rejected by the edit engine."""
        return sum(len(report.edits_rejected) for report in self.reports)


@dataclass(frozen=True)
class CorpusAugmentation:
    """The synthetic corpus produced from a corpus."""

    corpus: Corpus
    noop_documents: Tuple[str, ...] = ()
    n_rejected: int = 0


def _relation_multiset(document: Document) -> List[Tuple[str, str, str]]:
    return sorted((relation.relation_type, relation.head, relation.tail) for relation in document.relations)


def _check_output(original: Document, augmented: Document, technique_id: str) -> None:
    violations = validate_document(augmented)
    if violations:
        raise AugmentationError(f'{technique_id} corrupted {original.id}: {violations}')
    if len(augmented.mentions) != len(original.mentions):
        raise AugmentationError(f'{technique_id} changed the mention count of {original.id}')
    if _relation_multiset(augmented) != _relation_multiset(original):
        raise AugmentationError(f'{technique_id} changed the relations of {original.id}')


class Augmenter:
    """Applies techniques to documents and corpora with a fixed set of resources."""

    def __init__(
        self,
        lexicon: Optional[Lexicon] = None,
        provider: Optional[ParaphraseProvider] = None,
        donor: Optional[Corpus] = None,
        target_types: Optional[Iterable[str]] = None,
    ):
        """Build an augmenter.

        :param lexicon: the lexicon of the rule-based techniques, defaults to the bundled one
        :param provider: the paraphrase provider, defaults to the dictionary-based stub
        :param donor: the corpus supplying vocabulary and subsequences, defaults to the augmented corpus
        :param target_types: restrict mention-level rewrites to these mention types
        """
        self.lexicon = lexicon if lexicon is not None else get_default_lexicon()
        self.provider = provider if provider is not None else StubProvider(self.lexicon)
        self.donor = donor
        self.target_types = frozenset(target_types) if target_types is not None else None

    def _resources(self, donor: Optional[Corpus]) -> AugmentationResources:
        return AugmentationResources(
            lexicon=self.lexicon,
            provider=self.provider,
            donor=self.donor if self.donor is not None else donor,
            target_types=self.target_types,
        )

    @staticmethod
    def _augment_replica(
        technique: Technique,
        params: Mapping[str, Any],
        document: Document,
        replica: int,
        rng: np.random.Generator,
        resources: AugmentationResources,
    ) -> Tuple[Document, bool, RemapReport]:
        edits = technique.operation(document, params, rng, resources)
        if edits is None:
            logger.debug(f'{technique.technique_id} does not apply to {document.id}')
            augmented, report, noop = document, RemapReport(index_map={}), True
        else:
            augmented, report = apply_edits(document, edits)
            noop = False
        augmented = augmented.with_id(f'{document.id}{AUGMENTED_SUFFIX}{replica}')
        _check_output(document, augmented, technique.technique_id)
        return augmented, noop, report

    def augment(self, document: Document, config: TechniqueConfig, rng: np.random.Generator) -> AugmentationResult:
        """Produce ``config.n_aug`` synthetic documents from one document, drawing from the generator in turn.

        :raises UnknownTechniqueError: if the technique is not registered
        :raises InvalidConfigError: if the configuration is outside of the technique's space
        """
        technique = get_technique(config.technique_id)
        params = technique.resolve(config)
        resources = self._resources(Corpus(documents=(document,)))
        outputs = [
            self._augment_replica(technique, params, document, replica, rng, resources)
            for replica in range(config.n_aug)
        ]
        return AugmentationResult(
            documents=tuple(augmented for augmented, _, _ in outputs),
            noop=any(noop for _, noop, _ in outputs),
            reports=tuple(report for _, _, report in outputs),
        )

    def augment_corpus(
        self,
        corpus: Corpus,
        config: TechniqueConfig,
        seed: int,
        *,
        workers: int = 1,
        use_tqdm: bool = False,
    ) -> CorpusAugmentation:
        """Produce the synthetic documents of every document of the corpus.

        Each (document, replica) pair draws from its own generator, seeded from the global seed, the document id,
        the technique id and the replica index, so results do not depend on the number of workers.

        :returns: the synthetic documents only, in corpus order then replica order
        """
        technique = get_technique(config.technique_id)
        params = technique.resolve(config)
        resources = self._resources(corpus)
        jobs = [(document, replica) for document in corpus.documents for replica in range(config.n_aug)]

        def _run(job: Tuple[Document, int]) -> Tuple[Document, bool, RemapReport]:
            document, replica = job
            rng = make_rng(seed, document.id, config.technique_id, replica)
            return self._augment_replica(technique, params, document, replica, rng, resources)

        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as executor:
                outputs = list(tqdm(
                    executor.map(_run, jobs), total=len(jobs), desc=config.technique_id, disable=not use_tqdm,
                ))
        else:
            outputs = [_run(job) for job in tqdm(jobs, desc=config.technique_id, disable=not use_tqdm)]

        noop_documents = sorted({document.id for (document, _), (_, noop, _) in zip(jobs, outputs) if noop})
        n_rejected = sum(len(report.edits_rejected) for _, _, report in outputs)
        logger.info(
            f'{config.technique_id}: {len(outputs)} synthetic documents from {len(corpus)}, '
            f'{len(noop_documents)} inapplicable, {n_rejected} edits rejected',
        )
        return CorpusAugmentation(
            corpus=corpus.with_documents(augmented for augmented, _, _ in outputs),
            noop_documents=tuple(noop_documents),
            n_rejected=n_rejected,
        )


def augment(
    document: Document,
    config: TechniqueConfig,
    rng: np.random.Generator,
    *,
    lexicon: Optional[Lexicon] = None,
    provider: Optional[ParaphraseProvider] = None,
    donor: Optional[Corpus] = None,
) -> List[Document]:
    """Produce ``config.n_aug`` synthetic documents from one document.

    The resources default as in :class:`Augmenter`: the bundled lexicon, the stub provider built on it and the
    document itself as donor.
    """
    augmenter = Augmenter(lexicon=lexicon, provider=provider, donor=donor)
    return list(augmenter.augment(document, config, rng).documents)
