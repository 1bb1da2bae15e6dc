# -*- coding: utf-8 -*-

"""Tree-structured Parzen estimator search over technique parameters.

Until enough trials completed, points are drawn uniformly. Afterwards the completed trials are split into the best
``⌈γN⌉`` and the rest, a density is fit per dimension on each group, and among candidates drawn from the density of
the best trials the one maximizing the ratio of the two densities is proposed.
"""

import json
import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Any, Callable, Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from tqdm import tqdm

from .augmenters import Param, ParamKind, ParamSpace, TechniqueConfig, get_technique
from .constants import (
    DEFAULT_EPOCHS, DEFAULT_FOLDS, DEFAULT_TRIALS, DEFAULT_WINDOW, TASKS, TPE_CANDIDATES, TPE_GAMMA, TPE_STARTUP,
)
from .corpus import Corpus
from .errors import OptimizationError, ProcaugError
from .evaluation import cross_validate
from .lexicon import Lexicon
from .providers import ParaphraseProvider
from .utils import make_rng

__all__ = [
    'TrialStatus',
    'TrialRecord',
    'suggest',
    'optimize_objective',
    'optimize',
    'best_trial',
    'trials_to_frame',
    'TRIAL_COLUMNS',
]

logger = logging.getLogger(__name__)

#: Columns of the trial log
TRIAL_COLUMNS = ['trial', 'technique_id', 'task', 'objective', 'params_json', 'status']


class TrialStatus(Enum):
    """The outcome of a trial."""

    COMPLETE = 'complete'
    FAILED = 'failed'


@dataclass(frozen=True)
class TrialRecord:
    """A point of a parameter space and the objective it reached."""

    trial_index: int
    values: Mapping[str, Any]
    objective: Optional[float] = None
    status: TrialStatus = TrialStatus.COMPLETE
    technique_id: Optional[str] = None
    task: Optional[str] = None

    @property
    def config(self) -> TechniqueConfig:  # noqa: D401
        """The technique configuration of this trial."""
        if self.technique_id is None:
            raise OptimizationError(f'trial {self.trial_index} has no technique')
        return get_technique(self.technique_id).config_from_values(self.values)

    @property
    def params_json(self) -> str:  # noqa: D401
        """The values as deterministic JSON text."""
        return json.dumps(dict(self.values), sort_keys=True)


def _truncated_normal_mass(mu: np.ndarray, sigma: float, low: float, high: float) -> np.ndarray:
    def _cdf(x):
        return 0.5 * (1.0 + np.vectorize(math.erf)((x - mu) / (sigma * math.sqrt(2.0))))

    return np.maximum(_cdf(high) - _cdf(low), 1e-12)


def _log_parzen(param: Param, observed: Sequence[float], x: np.ndarray) -> np.ndarray:
    """Get the log density at ``x`` of a mixture of truncated Gaussians centered on the observed values."""
    low, high = float(param.low), float(param.high)
    if not observed:
        return np.full(len(x), -math.log(high - low))
    mu = np.asarray(observed, dtype=float)
    sigma = (high - low) / max(len(observed), 1)
    mass = _truncated_normal_mass(mu, sigma, low, high)
    z = (x[:, None] - mu[None, :]) / sigma
    kernels = np.exp(-0.5 * z ** 2) / (sigma * math.sqrt(2 * math.pi) * mass[None, :])
    return np.log(np.maximum(kernels.mean(axis=1), 1e-300))


def _sample_parzen(param: Param, observed: Sequence[float], size: int, rng: np.random.Generator) -> np.ndarray:
    low, high = float(param.low), float(param.high)
    if not observed:
        return rng.uniform(low, high, size=size)
    mu = np.asarray(observed, dtype=float)
    sigma = (high - low) / max(len(observed), 1)
    rv = np.empty(size)
    for index in range(size):
        center = mu[int(rng.integers(len(mu)))]
        for _ in range(100):
            value = rng.normal(center, sigma)
            if low <= value <= high:
                break
        else:
            value = min(max(value, low), high)
        rv[index] = value
    return rv


def _categorical_weights(param: Param, observed: Sequence[Any]) -> np.ndarray:
    counts = np.array([sum(1 for value in observed if value == choice) for choice in param.choices], dtype=float)
    return (counts + 1.0) / (counts.sum() + len(param.choices))


def suggest(
    space: ParamSpace,
    history: Sequence[TrialRecord],
    gamma: float = TPE_GAMMA,
    n_candidates: int = TPE_CANDIDATES,
    rng: Optional[np.random.Generator] = None,
    n_startup: int = TPE_STARTUP,
) -> Dict[str, Any]:
    """Propose the next point of the space given the trials so far.

    :param space: the parameter space
    :param history: the previous trials, failed ones being ignored
    :param gamma: the share of completed trials making the good group
    :param n_candidates: the number of candidates drawn from the good group's density
    :param rng: the random generator
    :param n_startup: the number of completed trials under which points are drawn uniformly
    :raises OptimizationError: if the space is empty or the settings are out of range
    """
    if not len(space):
        raise OptimizationError('can not search an empty parameter space')
    if not 0 < gamma < 1:
        raise OptimizationError(f'gamma should be in (0, 1), got {gamma}')
    if n_candidates < 1:
        raise OptimizationError(f'n_candidates should be positive, got {n_candidates}')
    if rng is None:
        rng = np.random.default_rng(0)

    complete = [trial for trial in history if trial.status is TrialStatus.COMPLETE]
    if len(complete) < n_startup:
        return space.sample(rng)

    ranked = sorted(complete, key=lambda trial: (-trial.objective, trial.trial_index))
    n_good = math.ceil(gamma * len(ranked))
    good, bad = ranked[:n_good], ranked[n_good:]

    score = np.zeros(n_candidates)
    columns: Dict[str, List[Any]] = {}
    for param in space:
        good_values = [trial.values[param.name] for trial in good]
        bad_values = [trial.values[param.name] for trial in bad]
        if param.kind is ParamKind.CATEGORICAL:
            good_weights = _categorical_weights(param, good_values)
            bad_weights = _categorical_weights(param, bad_values)
            picks = rng.choice(len(param.choices), size=n_candidates, p=good_weights)
            score += np.log(good_weights[picks]) - np.log(bad_weights[picks])
            columns[param.name] = [param.choices[int(pick)] for pick in picks]
            continue
        draws = _sample_parzen(param, good_values, n_candidates, rng)
        if param.kind is ParamKind.INT:
            draws = np.clip(np.rint(draws), param.low, param.high)
            columns[param.name] = [int(draw) for draw in draws]
        else:
            columns[param.name] = [float(draw) for draw in draws]
        score += _log_parzen(param, good_values, draws) - _log_parzen(param, bad_values, draws)

    best = int(np.argmax(score))
    return {name: values[best] for name, values in columns.items()}


def best_trial(records: Sequence[TrialRecord]) -> TrialRecord:
    """Get the complete trial with the highest objective, the earliest one on ties.

    :raises OptimizationError: if no trial completed
    """
    complete = [trial for trial in records if trial.status is TrialStatus.COMPLETE]
    if not complete:
        raise OptimizationError(f'all {len(records)} trials failed')
    return min(complete, key=lambda trial: (-trial.objective, trial.trial_index))


def optimize_objective(
    space: ParamSpace,
    objective: Callable[[Dict[str, Any]], float],
    n_trials: int = DEFAULT_TRIALS,
    seed: int = 0,
    *,
    history: Sequence[TrialRecord] = (),
    gamma: float = TPE_GAMMA,
    n_candidates: int = TPE_CANDIDATES,
    n_startup: int = TPE_STARTUP,
    technique_id: Optional[str] = None,
    task: Optional[str] = None,
    callback: Optional[Callable[[TrialRecord], None]] = None,
    use_tqdm: bool = False,
) -> Tuple[Dict[str, Any], List[TrialRecord]]:
    """Maximize the objective over the space in ``n_trials`` sequential trials.

    Trials whose objective raises a :class:`procaug.errors.ProcaugError` or is not finite are recorded as failed.

    :param history: previous trials to resume from; they count towards ``n_trials``
    :param callback: called with each new trial record as soon as it is known
    :returns: the best values and all trial records
    :raises OptimizationError: if all trials failed
    """
    records = list(history)
    rng = make_rng(seed, 'tpe', len(records))
    for trial_index in tqdm(range(len(records), n_trials), desc='trials', disable=not use_tqdm):
        values = suggest(space, records, gamma=gamma, n_candidates=n_candidates, rng=rng, n_startup=n_startup)
        try:
            value = float(objective(values))
        except ProcaugError as e:
            logger.warning(f'trial {trial_index} with {values} failed: {e}')
            value = None
        if value is not None and not math.isfinite(value):
            logger.warning(f'trial {trial_index} with {values} reached {value}')
            value = None
        record = TrialRecord(
            trial_index=trial_index,
            values=values,
            objective=value,
            status=TrialStatus.COMPLETE if value is not None else TrialStatus.FAILED,
            technique_id=technique_id,
            task=task,
        )
        logger.info(f'trial {trial_index}: {record.params_json} -> {value}')
        records.append(record)
        if callback is not None:
            callback(record)
    return dict(best_trial(records).values), records


def optimize(
    technique_id: str,
    corpus: Corpus,
    task: str,
    n_trials: int = DEFAULT_TRIALS,
    seed: int = 0,
    *,
    k: int = DEFAULT_FOLDS,
    epochs: int = DEFAULT_EPOCHS,
    window: int = DEFAULT_WINDOW,
    workers: int = 1,
    lexicon: Optional[Lexicon] = None,
    provider: Optional[ParaphraseProvider] = None,
    manager=None,
    study_name: Optional[str] = None,
    use_tqdm: bool = False,
) -> Tuple[TechniqueConfig, List[TrialRecord]]:
    """Search the configuration of a technique maximizing the performance gain on one task.

    The unaugmented arm of the cross-validation is computed once and shared by all trials.

    :param manager: a :class:`procaug.manager.Manager` storing each trial as it completes
    :param study_name: the name of the stored study, resumed if it exists
    :raises UnknownTechniqueError: if the technique is not registered
    :raises OptimizationError: if all trials failed
    """
    if task not in TASKS:
        raise OptimizationError(f'unknown task {task!r}, expected one of {TASKS}')
    technique = get_technique(technique_id)
    cache: Dict[Tuple, Any] = {}

    def _objective(values: Dict[str, Any]) -> float:
        report = cross_validate(
            corpus,
            k=k,
            technique=technique.config_from_values(values),
            seed=seed,
            tasks=(task,),
            epochs=epochs,
            window=window,
            workers=workers,
            cache=cache,
            lexicon=lexicon,
            provider=provider,
        )
        return report.gain(task)

    history: List[TrialRecord] = []
    callback = None
    if manager is not None:
        study = manager.get_or_create_study(
            name=study_name or f'{technique_id}-{task}-{seed}',
            technique_id=technique_id,
            task=task,
            seed=seed,
        )
        history = manager.load_history(study)
        if history:
            logger.info(f'resuming study {study.name} from {len(history)} trials')

        def callback(record: TrialRecord) -> None:
            manager.add_trial(study, record)

    values, records = optimize_objective(
        technique.search_space,
        _objective,
        n_trials=n_trials,
        seed=seed,
        history=history,
        technique_id=technique_id,
        task=task,
        callback=callback,
        use_tqdm=use_tqdm,
    )
    return technique.config_from_values(values), records


def trials_to_frame(records: Sequence[TrialRecord]) -> pd.DataFrame:
    """Convert trial records to a data frame with the columns of :data:`TRIAL_COLUMNS`."""
    return pd.DataFrame(
        [
            {
                'trial': record.trial_index,
                'technique_id': record.technique_id,
                'task': record.task,
                'objective': record.objective,
                'params_json': record.params_json,
                'status': record.status.value,
            }
            for record in records
        ],
        columns=TRIAL_COLUMNS,
    )
