# -*- coding: utf-8 -*-

"""Paraphrase providers, the rewrite backends of the model-based techniques.

A provider maps a list of texts to a list of rewrites of the same length. Two modes exist:

- ``back_translate``: each text is a span of a document; the rewrite is its round trip through the pivot language
- ``contextual``: each text is a sentence with one target token marked as ``<t>token</t>``; the rewrite is the
  replacement for the target token only

Remote providers speak a small JSON protocol::

    POST /rewrite {"mode": "back_translate", "pivot": "de", "seed": 3, "texts": ["a claim", ...]}
    -> {"texts": ["the claim", ...]}
"""

import logging
import re
from abc import ABC, abstractmethod
from enum import Enum
from typing import List, Optional, Sequence, Tuple

import requests

from .errors import ProviderError
from .lexicon import Lexicon, coarse_pos, get_default_lexicon, match_case
from .utils import make_rng

__all__ = [
    'RewriteMode',
    'ParaphraseProvider',
    'IdentityProvider',
    'StubProvider',
    'HTTPProvider',
    'get_provider',
    'mark_target',
    'split_marked',
]

logger = logging.getLogger(__name__)

TARGET_OPEN = '<t>'
TARGET_CLOSE = '</t>'
_MARKED = re.compile(f'^(.*?){re.escape(TARGET_OPEN)}(.*?){re.escape(TARGET_CLOSE)}(.*)$', re.DOTALL)


class RewriteMode(Enum):
    """How a provider rewrites its input."""

    BACK_TRANSLATE = 'back_translate'
    CONTEXTUAL = 'contextual'


def mark_target(tokens: Sequence[str], index: int) -> str:
    """Join the tokens of a sentence, marking the token at the index as the target."""
    return ' '.join(
        f'{TARGET_OPEN}{token}{TARGET_CLOSE}' if position == index else token
        for position, token in enumerate(tokens)
    )


def split_marked(text: str) -> Tuple[str, str, str]:
    """Split a marked sentence into the text before the target, the target, and the text after it."""
    match = _MARKED.match(text)
    if match is None:
        raise ProviderError(f'no marked target in {text!r}')
    before, target, after = match.groups()
    return before.strip(), target, after.strip()


class ParaphraseProvider(ABC):
    """A deterministic rewrite backend."""

    #: Name used in manifests and logs
    name = 'provider'

    @abstractmethod
    def rewrite(
        self,
        texts: Sequence[str],
        mode: RewriteMode,
        *,
        pivot: Optional[str] = None,
        seed: int = 0,
    ) -> List[str]:
        """Rewrite the texts.

        :param texts: spans (back translation) or marked sentences (contextual)
        :param mode: the rewrite mode
        :param pivot: the pivot language of back translation
        :param seed: the seed making the rewrite deterministic
        :returns: one rewrite per text
        :raises ProviderError: if the backend fails
        """


class IdentityProvider(ParaphraseProvider):
    """Returns every span unchanged and every target as it is."""

    name = 'identity'

    def rewrite(self, texts, mode, *, pivot=None, seed=0):  # noqa: D102
        if mode is RewriteMode.CONTEXTUAL:
            return [split_marked(text)[1] for text in texts]
        return list(texts)


class StubProvider(ParaphraseProvider):
    """A dictionary-based stand-in for translation and fill-in models.

    Back translation replaces words having lexicon synonyms with probability ``rate``; contextual rewriting
    proposes a synonym of the target. Choices are seeded by ``(seed, pivot, text)``.
    """

    name = 'stub'

    def __init__(self, lexicon: Optional[Lexicon] = None, rate: float = 0.5):
        self.lexicon = lexicon if lexicon is not None else get_default_lexicon()
        self.rate = rate

    def _synonym(self, word: str, rng) -> Optional[str]:
        if self.lexicon.is_stopword(word):
            return None
        candidates = self.lexicon.synonyms(word, coarse_pos(self.lexicon, word))
        if not candidates:
            return None
        return match_case(word, candidates[int(rng.integers(len(candidates)))])

    def _back_translate(self, text: str, pivot: Optional[str], seed: int) -> str:
        rng = make_rng(seed, pivot or '', text)
        words = []
        for word in text.split():
            synonym = self._synonym(word, rng)
            words.append(synonym if synonym is not None and rng.random() < self.rate else word)
        return ' '.join(words)

    def _fill(self, text: str, seed: int) -> str:
        _, target, _ = split_marked(text)
        synonym = self._synonym(target, make_rng(seed, text))
        return target if synonym is None else synonym

    def rewrite(self, texts, mode, *, pivot=None, seed=0):  # noqa: D102
        if mode is RewriteMode.CONTEXTUAL:
            return [self._fill(text, seed) for text in texts]
        return [self._back_translate(text, pivot, seed) for text in texts]


class HTTPProvider(ParaphraseProvider):
    """A remote provider speaking the ``POST /rewrite`` protocol."""

    name = 'http'

    def __init__(self, url: str, timeout: float = 60.0, session: Optional[requests.Session] = None):
        url = url.rstrip('/')
        self.url = url if url.endswith('/rewrite') else f'{url}/rewrite'
        self.timeout = timeout
        self.session = session or requests.Session()

    def rewrite(self, texts, mode, *, pivot=None, seed=0):  # noqa: D102
        texts = list(texts)
        if not texts:
            return []
        payload = {'mode': mode.value, 'seed': int(seed), 'texts': texts}
        if pivot is not None:
            payload['pivot'] = pivot
        try:
            response = self.session.post(self.url, json=payload, timeout=self.timeout)
            response.raise_for_status()
            data = response.json()
        except (requests.RequestException, ValueError) as e:
            raise ProviderError(f'{self.url} failed: {e}') from e

        rv = data.get('texts') if isinstance(data, dict) else None
        if not isinstance(rv, list) or not all(isinstance(text, str) for text in rv):
            raise ProviderError(f'{self.url} answered without a list of texts')
        if len(rv) != len(texts):
            raise ProviderError(f'{self.url} answered {len(rv)} texts for {len(texts)}')
        return rv


def get_provider(value: str, lexicon: Optional[Lexicon] = None) -> ParaphraseProvider:
    """Get a provider from its command line form: ``stub``, ``identity`` or an URL."""
    if value == StubProvider.name:
        return StubProvider(lexicon=lexicon)
    if value == IdentityProvider.name:
        return IdentityProvider()
    if value.startswith(('http://', 'https://')):
        return HTTPProvider(value)
    raise ValueError(f'invalid provider {value!r}: expected stub, identity or an http(s) URL')
