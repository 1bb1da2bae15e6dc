# -*- coding: utf-8 -*-

"""Command line interface for procaug.

Why does this file exist, and why not put this in ``__main__``?

You might be tempted to import things from ``__main__`` later, but that will cause problems--the code will get executed
twice:

- When you run ``python3 -m procaug`` python will execute ``__main__.py`` as a script. That means there won't be any
  ``procaug.__main__`` in ``sys.modules``.
- When you import __main__ it will get executed again (as a module) because there's no ``procaug.__main__`` in
  ``sys.modules``.

Also see (1) from http://click.pocoo.org/5/setuptools/#setuptools-integration.
"""

import json
import logging
import os
from contextlib import contextmanager
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, Optional, Sequence, Tuple

import click
from more_click import verbose_option

from .augmenters import Augmenter, Technique, TechniqueConfig, get_technique
from .constants import (
    DEFAULT_EPOCHS, DEFAULT_FOLDS, DEFAULT_TRIALS, DEFAULT_WINDOW, MD, RE, TASKS, get_connection,
)
from .corpus import check_corpus, read_corpus, serialize_corpus
from .errors import InvalidConfigError, ProcaugError, UnknownTechniqueError
from .evaluation import cross_validate, dumps_report
from .hyperopt import optimize, trials_to_frame
from .lexicon import get_default_lexicon, load_lexicon
from .manager import Manager
from .providers import get_provider
from .stats import compare_stats, deltas_to_frame
from .synthetic import generate_corpus
from .utils import atomic_write, get_version

__all__ = [
    'main',
    'RunConfig',
]

logger = logging.getLogger(__name__)

CORPUS_FILE = 'corpus.json'
MANIFEST_FILE = 'manifest.json'
STATS_CSV = 'stats.csv'
STATS_JSON = 'stats.json'
REPORT_CSV = 'report.csv'
REPORT_JSON = 'report.json'
TRIALS_CSV = 'trials.csv'
BEST_CONFIG = 'best_config.json'


@dataclass
class RunConfig:
    """The settings of a run, all of which determine its outputs."""

    seed: int
    corpus: Optional[str] = None
    technique_id: Optional[str] = None
    params: Dict[str, Any] = field(default_factory=dict)
    n_aug: int = 1
    tasks: Tuple[str, ...] = TASKS
    folds: int = DEFAULT_FOLDS
    trials: int = DEFAULT_TRIALS
    epochs: int = DEFAULT_EPOCHS
    window: int = DEFAULT_WINDOW
    provider: str = 'stub'
    lexicon: Optional[str] = None

    def to_json(self) -> Dict[str, Any]:
        """Convert to a JSON object."""
        rv = asdict(self)
        rv['tasks'] = list(self.tasks)
        rv['params'] = dict(sorted(self.params.items()))
        return rv


def _dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + '\n'


def _write_outputs(out: str, command: str, config: RunConfig, outputs: Dict[str, str]) -> None:
    """Write the outputs and the manifest of a run, each file atomically."""
    outputs = dict(outputs)
    outputs[MANIFEST_FILE] = _dumps({
        'command': command,
        'config': config.to_json(),
        'seed': config.seed,
        'version': get_version(),
    })
    os.makedirs(out, exist_ok=True)
    for name, data in outputs.items():
        atomic_write(os.path.join(out, name), data)
        logger.info(f'wrote {os.path.join(out, name)}')


@contextmanager
def _exit_codes():
    """Turn bad technique identifiers and parameters into usage errors and other failures into exit code 1."""
    try:
        yield
    except UnknownTechniqueError as e:
        raise click.BadParameter(str(e), param_hint="'--technique'") from e
    except InvalidConfigError as e:
        raise click.BadParameter(str(e), param_hint="'--params'") from e
    except ProcaugError as e:
        raise click.ClickException(str(e)) from e


def _parse_params(technique: Technique, pairs: Sequence[str]) -> Dict[str, Any]:
    rv = {}
    for pair in pairs:
        name, sep, text = pair.partition('=')
        name = name.strip()
        if not sep or not name:
            raise click.BadParameter(f'expected key=value, got {pair!r}', param_hint="'--params'")
        if name in technique.fixed:
            if str(technique.fixed[name]).lower() != text.strip().lower():
                raise InvalidConfigError(f'{technique.technique_id} fixes {name}={technique.fixed[name]!r}')
            continue
        rv[name] = technique.space.get(name).parse(text.strip())
    return rv


def _build_config(technique_id: str, params: Sequence[str], n_aug: int) -> TechniqueConfig:
    technique = get_technique(technique_id)
    config = TechniqueConfig(technique_id, _parse_params(technique, params), n_aug=n_aug)
    technique.resolve(config)
    return config


def _resources(provider: str, lexicon: Optional[str]):
    lexicon_ = load_lexicon(lexicon) if lexicon else get_default_lexicon()
    try:
        provider_ = get_provider(provider, lexicon=lexicon_)
    except ValueError as e:
        raise click.BadParameter(str(e), param_hint="'--provider'") from e
    return lexicon_, provider_


def _tasks(task: str) -> Tuple[str, ...]:
    return TASKS if task == 'both' else (task,)


def _show_progress() -> bool:
    """Return if ``-v`` asked for progress bars."""
    return logging.getLogger('procaug').isEnabledFor(logging.INFO)


corpus_option = click.option(
    '--corpus', 'corpus_path', required=True, type=click.Path(exists=True, dir_okay=False),
    help='Path to the annotated corpus',
)
seed_option = click.option('--seed', required=True, type=int, help='Global seed of the run')
out_option = click.option('--out', required=True, type=click.Path(file_okay=False), help='Output directory')
technique_option = click.option('--technique', 'technique_id', required=True, help='Technique identifier')
params_option = click.option('--params', multiple=True, metavar='KEY=VALUE', help='Technique parameter value')
n_aug_option = click.option(
    '--n-aug', type=click.IntRange(min=1), default=1, show_default=True,
    help='Synthetic documents per original',
)
provider_option = click.option(
    '--provider', default='stub', show_default=True, help='Paraphrase provider: stub, identity or an URL',
)
lexicon_option = click.option(
    '--lexicon', type=click.Path(exists=True), help='Lexicon directory or TSV file, defaults to the bundled one',
)
workers_option = click.option(
    '--workers', type=click.IntRange(min=1), default=1, show_default=True, help='Number of worker threads',
)
folds_option = click.option('--folds', type=click.IntRange(min=2), default=DEFAULT_FOLDS, show_default=True)
epochs_option = click.option('--epochs', type=click.IntRange(min=1), default=DEFAULT_EPOCHS, show_default=True)
window_option = click.option(
    '--window', type=click.IntRange(min=0), default=DEFAULT_WINDOW, show_default=True,
    help='Maximum sentence distance of relation candidates',
)
connection_option = click.option('--connection', help=f'Trial storage connection. Defaults to {get_connection()}')


@click.group()
@click.version_option(version=get_version())
def main():
    """Annotation-preserving augmentation of business process descriptions."""


@main.command()
@corpus_option
@technique_option
@params_option
@n_aug_option
@seed_option
@out_option
@provider_option
@lexicon_option
@workers_option
@verbose_option
def augment(corpus_path, technique_id, params, n_aug, seed, out, provider, lexicon, workers):
    """Augment a corpus and write the originals with their synthetic documents."""
    with _exit_codes():
        technique_config = _build_config(technique_id, params, n_aug)
        lexicon_, provider_ = _resources(provider, lexicon)
        corpus = read_corpus(corpus_path)
        augmenter = Augmenter(lexicon=lexicon_, provider=provider_)
        augmentation = augmenter.augment_corpus(
            corpus, technique_config, seed, workers=workers, use_tqdm=_show_progress(),
        )
        combined = corpus.with_documents(corpus.documents + augmentation.corpus.documents)
        check_corpus(combined)
        delta = compare_stats(corpus, combined)
        config = RunConfig(
            seed=seed, corpus=corpus_path, technique_id=technique_id, params=dict(technique_config.params),
            n_aug=n_aug, provider=provider, lexicon=lexicon,
        )
        _write_outputs(out, 'augment', config, {
            CORPUS_FILE: serialize_corpus(combined).decode('utf-8'),
            STATS_CSV: deltas_to_frame([(technique_id, delta)]).to_csv(index=False),
            STATS_JSON: _dumps({**delta.to_json(), 'noop_documents': list(augmentation.noop_documents)}),
        })
    click.echo(f'{len(corpus)} documents, {len(augmentation.corpus)} synthetic documents written to {out}')


@main.command()
@corpus_option
@click.option('--technique', 'technique_id', help='Technique identifier. Without it, only the baseline is run')
@params_option
@n_aug_option
@click.option('--task', type=click.Choice([MD, RE, 'both']), default='both', show_default=True)
@folds_option
@epochs_option
@window_option
@seed_option
@out_option
@provider_option
@lexicon_option
@workers_option
@verbose_option
def evaluate(
    corpus_path, technique_id, params, n_aug, task, folds, epochs, window, seed, out, provider, lexicon, workers,
):
    """Measure the performance gain of a technique by cross-validation."""
    with _exit_codes():
        technique_config = _build_config(technique_id, params, n_aug) if technique_id else None
        lexicon_, provider_ = _resources(provider, lexicon)
        corpus = read_corpus(corpus_path)
        report = cross_validate(
            corpus,
            k=folds,
            technique=technique_config,
            seed=seed,
            tasks=_tasks(task),
            epochs=epochs,
            window=window,
            workers=workers,
            lexicon=lexicon_,
            provider=provider_,
            use_tqdm=_show_progress(),
        )
        config = RunConfig(
            seed=seed, corpus=corpus_path, technique_id=technique_id,
            params=dict(technique_config.params) if technique_config else {}, n_aug=n_aug, tasks=_tasks(task),
            folds=folds, epochs=epochs, window=window, provider=provider, lexicon=lexicon,
        )
        _write_outputs(out, 'evaluate', config, {
            REPORT_JSON: dumps_report(report),
            REPORT_CSV: report.to_csv(),
        })
    for task_ in report.tasks:
        click.echo(f'{task_}: {report.baseline_f1(task_):.3f} -> {report.augmented_f1(task_):.3f}')


@main.command('optimize')
@corpus_option
@technique_option
@click.option('--task', type=click.Choice([MD, RE]), required=True, help='The task whose gain is maximized')
@click.option('--trials', type=click.IntRange(min=1), default=DEFAULT_TRIALS, show_default=True)
@folds_option
@epochs_option
@window_option
@seed_option
@out_option
@provider_option
@lexicon_option
@workers_option
@connection_option
@click.option('--study', help='Name of the stored study, resumed if it exists. Requires --connection')
@verbose_option
def optimize_command(
    corpus_path, technique_id, task, trials, folds, epochs, window, seed, out, provider, lexicon, workers,
    connection, study,
):
    """Search the configuration of a technique maximizing the performance gain."""
    with _exit_codes():
        get_technique(technique_id)
        lexicon_, provider_ = _resources(provider, lexicon)
        corpus = read_corpus(corpus_path)
        manager = None
        if connection:
            manager = Manager(connection=connection)
        best, records = optimize(
            technique_id,
            corpus,
            task,
            n_trials=trials,
            seed=seed,
            k=folds,
            epochs=epochs,
            window=window,
            workers=workers,
            lexicon=lexicon_,
            provider=provider_,
            manager=manager,
            study_name=study,
            use_tqdm=_show_progress(),
        )
        config = RunConfig(
            seed=seed, corpus=corpus_path, technique_id=technique_id, tasks=(task,), folds=folds, trials=trials,
            epochs=epochs, window=window, provider=provider, lexicon=lexicon,
        )
        _write_outputs(out, 'optimize', config, {
            TRIALS_CSV: trials_to_frame(records).to_csv(index=False),
            BEST_CONFIG: _dumps(best.to_json()),
        })
    click.echo(f'best of {len(records)} trials: {_dumps(best.to_json()).strip()}')


@main.command()
@click.option('--original', required=True, type=click.Path(exists=True, dir_okay=False), help='Original corpus')
@click.option('--augmented', required=True, type=click.Path(exists=True, dir_okay=False), help='Augmented corpus')
@click.option('--label', default='none', show_default=True, help='Technique identifier of the stats row')
@seed_option
@out_option
@verbose_option
def analyze(original, augmented, label, seed, out):
    """Compare the characteristics of an augmented corpus to its original."""
    with _exit_codes():
        delta = compare_stats(read_corpus(original), read_corpus(augmented))
        config = RunConfig(seed=seed, corpus=original, technique_id=label, params={'augmented': augmented})
        _write_outputs(out, 'analyze', config, {
            STATS_CSV: deltas_to_frame([(label, delta)]).to_csv(index=False),
            STATS_JSON: _dumps(delta.to_json()),
        })
    click.echo(f'vocabulary {delta.vocab_delta:+d}, mention length {delta.mention_len_delta:+.3f}, '
               f'flip rate {delta.direction_flip_rate:.3f}')


@main.command()
@click.option('--documents', type=click.IntRange(min=1), default=40, show_default=True)
@seed_option
@out_option
@lexicon_option
@verbose_option
def generate(documents, seed, out, lexicon):
    """Generate an annotated corpus of process descriptions."""
    with _exit_codes():
        corpus = generate_corpus(documents, seed, lexicon=load_lexicon(lexicon) if lexicon else None)
        config = RunConfig(seed=seed, lexicon=lexicon, params={'documents': documents})
        _write_outputs(out, 'generate', config, {CORPUS_FILE: serialize_corpus(corpus).decode('utf-8')})
    click.echo(f'wrote {documents} documents to {os.path.join(out, CORPUS_FILE)}')


@main.command()
@connection_option
@verbose_option
def summarize(connection):
    """Summarize the stored studies."""
    with _exit_codes():
        manager = Manager(connection=connection)
        for name, count in manager.summarize().items():
            click.echo(f'{name}: {count}')
        for study in manager.list_studies():
            best = manager.get_best_trial(study)
            objective = f'{best.objective:.4f}' if best is not None else 'n/a'
            click.echo(f'  {study.name} ({study.technique_id}, {study.task}): best gain {objective}')


if __name__ == '__main__':
    main()
