# -*- coding: utf-8 -*-

"""Constants for procaug."""

import os
from dataclasses import dataclass
from typing import Dict, Optional

VERSION = '0.1.0-dev'

MODULE_NAME = 'procaug'

#: Environment variable overriding the data directory
PROCAUG_HOME = 'PROCAUG_HOME'
#: Environment variable overriding the trial storage connection string
PROCAUG_CONNECTION = 'PROCAUG_CONNECTION'

ACTOR = 'Actor'
ACTIVITY = 'Activity'
ACTIVITY_DATA = 'Activity Data'
FURTHER_SPECIFICATION = 'Further Specification'
XOR_GATEWAY = 'XOR Gateway'
AND_GATEWAY = 'AND Gateway'
CONDITION_SPECIFICATION = 'Condition Specification'

DEFAULT_MENTION_TYPES = (
    ACTOR,
    ACTIVITY,
    ACTIVITY_DATA,
    FURTHER_SPECIFICATION,
    XOR_GATEWAY,
    AND_GATEWAY,
    CONDITION_SPECIFICATION,
)

FLOW = 'Flow'
USES = 'Uses'
ACTOR_PERFORMER = 'Actor Performer'
ACTOR_RECIPIENT = 'Actor Recipient'
SAME_GATEWAY = 'Same Gateway'

DEFAULT_RELATION_TYPES = (
    FLOW,
    USES,
    ACTOR_PERFORMER,
    ACTOR_RECIPIENT,
    FURTHER_SPECIFICATION,
    SAME_GATEWAY,
)

#: Sentence-final tokens stripped by sentence merging
PUNCTUATION = frozenset({'.', '!', '?', ';'})

AUXILIARIES = frozenset({
    'is', 'are', 'was', 'were', 'do', 'does', 'did', 'can', 'could', 'will', 'would', 'should', 'must', 'has',
    'have', 'had',
})
NEGATIONS = frozenset({'not', "n't"})

NOUN = 'NOUN'
VERB = 'VERB'
ADJ = 'ADJ'
ADV = 'ADV'
OTHER = 'OTHER'
POS_TAGS = (NOUN, VERB, ADJ, ADV, OTHER)

MD = 'md'
RE = 're'
TASKS = (MD, RE)

#: Label of a candidate mention pair without relation
NO_RELATION = 'none'

DEFAULT_FOLDS = 5
DEFAULT_TRIALS = 25
DEFAULT_EPOCHS = 5
DEFAULT_WINDOW = 1

TPE_GAMMA = 0.25
TPE_CANDIDATES = 24
TPE_STARTUP = 5

PIVOT_LANGUAGES = ('de', 'fr', 'es')

#: Suffix of synthetic document ids, followed by the replica index
AUGMENTED_SUFFIX = '-aug'

NL_AUGMENTER_URL = 'https://github.com/GEM-benchmark/NL-Augmenter/tree/main/nlaugmenter/transformations'


def get_data_dir() -> str:
    """Return the (ensured) data directory of procaug."""
    path = os.environ.get(PROCAUG_HOME) or os.path.join(os.path.expanduser('~'), '.data', MODULE_NAME)
    os.makedirs(path, exist_ok=True)
    return path


def get_connection() -> str:
    """Return the default connection string for the trial storage."""
    connection = os.environ.get(PROCAUG_CONNECTION)
    if connection:
        return connection
    return f'sqlite:///{os.path.join(get_data_dir(), f"{MODULE_NAME}.db")}'


@dataclass(frozen=True)
class TechniqueReference:
    """A technique of the catalog and the transformation it derives from."""

    technique_id: str
    name: str
    operation: str
    description: str
    transformation: Optional[str] = None
    changes_direction: bool = False

    @property
    def url(self) -> Optional[str]:  # noqa: D401
        """The URL of the transformation this technique derives from."""
        if self.transformation is None:
            return None
        return f'{NL_AUGMENTER_URL}/{self.transformation}'


_TECHNIQUE_INFO = [
    ('B.3', 'Adjectives Antonyms Switch', 'lexicon_substitution', 'use antonyms of adjectives',
     'adjectives_antonyms_switch'),
    ('B.5', 'AntonymsSubstitute (Double Negation)', 'lexicon_substitution',
     'substitute even number of words with antonyms', 'antonyms_substitute'),
    ('B.6', 'Auxiliary Negation Removal', 'auxiliary_negation_removal', 'remove negated auxiliaries',
     'auxiliary_negation_removal'),
    ('B.8', 'BackTranslation', 'paraphrase_spans', 'translate to German, then back to English', 'back_translation'),
    ('B.24', 'Concatenate Two Random Sentences', 'sentence_concatenation', 'remove punctuation between sentences',
     'concat_monolingual'),
    ('B.26', 'Contextual Meaning Perturbation', 'model_word_replacement',
     'replace words with use of pretrained language model', 'contextual_meaning_perturbation'),
    ('B.39', 'English Mention Replacement for NER', 'mention_replacement',
     'replace mention with one of the same type in document', 'entity_mention_replacement_ner'),
    ('B.40', 'Filler Word Augmentation', 'filler_word_insertion', 'introduce filler phrases',
     'filler_word_augmentation'),
    ('B.62', 'Multilingual Back Translation', 'paraphrase_spans', 'back translation, language is parameter',
     'multilingual_back_translation'),
    ('B.79', 'Random Word Deletion', 'random_token_deletion', 'delete random words', 'random_deletion'),
    ('B.82', 'Replace Abbreviations and Acronyms', 'abbreviation_toggle',
     'replace acronyms with full length expression and v.v.', 'replace_abbreviation_and_acronyms'),
    ('B.88', 'Sentence Reordering', 'sentence_reordering', 'reorder sentences', 'sentence_reordering'),
    ('B.90', 'Shuffle Within Segments', 'shuffle_within_segments', 'shuffle tokens in mentions',
     'shuffle_within_segments'),
    ('B.100', 'Synonym Insertion', 'synonym_insertion', 'insert synonym before word', 'synonym_insertion'),
    ('B.101', 'Synonym Substitution', 'lexicon_substitution', 'substitute word with synonym', 'synonym_substitution'),
    ('B.103', 'Subsequence Substitution for Sequence Tagging', 'subsequence_substitution',
     'replace sequence with another sequence with same POS tags', 'tag_subsequence_substitution'),
    ('B.106', 'Transformer Fill', 'model_word_replacement', 'replace tokens using language model',
     'transformer_fill'),
    ('random_insert', 'Random Insert', 'random_token_insertion', 'insert random tokens', None),
    ('random_swap', 'Random Swap', 'random_token_swap', 'swap position of tokens', None),
]

#: Techniques allowed to change the head/tail order of relations
DIRECTION_CHANGING = frozenset({'B.88', 'B.24', 'sentence_reordering', 'sentence_concatenation'})

infos: Dict[str, TechniqueReference] = {
    technique_id: TechniqueReference(
        technique_id=technique_id,
        name=name,
        operation=operation,
        description=description,
        transformation=transformation,
        changes_direction=technique_id in DIRECTION_CHANGING,
    )
    for technique_id, name, operation, description, transformation in _TECHNIQUE_INFO
}
