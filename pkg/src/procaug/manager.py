# -*- coding: utf-8 -*-

"""This module stores optimization studies and their trials in a relational database."""

import logging
from typing import List, Mapping, Optional

from sqlalchemy import create_engine, func
from sqlalchemy.engine import Engine
from sqlalchemy.orm import Session, sessionmaker

from .constants import get_connection
from .errors import OptimizationError
from .hyperopt import TrialRecord, TrialStatus
from .models import Base, Study, Trial

__all__ = [
    'Manager',
]

logger = logging.getLogger(__name__)


class Manager:
    """Optimization studies and their trials."""

    def __init__(
        self,
        connection: Optional[str] = None,
        engine: Optional[Engine] = None,
        session: Optional[Session] = None,
    ):
        """Build a manager and create the tables if they do not exist.

        :param connection: a SQLAlchemy connection string, defaults to :func:`procaug.constants.get_connection`
        :param engine: an engine to use instead of one built from the connection string
        :param session: a session to use instead of one bound to the engine
        """
        if engine is None:
            self.connection = connection or get_connection()
            engine = create_engine(self.connection)
        else:
            self.connection = str(engine.url)
        self.engine = engine
        self.session = session if session is not None else sessionmaker(bind=self.engine)()
        self.create_all()

    def __repr__(self):  # noqa: D105
        return f'<Manager connection={self.connection}>'

    def create_all(self, check_first: bool = True) -> None:
        """Create the tables."""
        Base.metadata.create_all(self.engine, checkfirst=check_first)

    def drop_all(self, check_first: bool = True) -> None:
        """Drop the tables."""
        self.session.close()
        Base.metadata.drop_all(self.engine, checkfirst=check_first)

    def _count_model(self, model) -> int:
        return self.session.query(func.count(model.id)).scalar()

    def is_populated(self) -> bool:
        """Return if any study is stored."""
        return 0 < self._count_model(Study)

    def summarize(self) -> Mapping[str, int]:
        """Summarize the database."""
        return {
            'studies': self._count_model(Study),
            'trials': self._count_model(Trial),
        }

    def get_study(self, name: str) -> Optional[Study]:
        """Get a study by its name."""
        return self.session.query(Study).filter(Study.name == name).one_or_none()

    def list_studies(self) -> List[Study]:
        """List the studies by name."""
        return self.session.query(Study).order_by(Study.name).all()

    def get_or_create_study(self, *, name: str, technique_id: str, task: str, seed: int) -> Study:
        """Get a study from the database or create it.

        :param name: the name of the study
        :param technique_id: the optimized technique
        :param task: the task whose gain is maximized
        :param seed: the seed of the search
        :raises OptimizationError: if a study of that name exists with other settings
        """
        study = self.get_study(name)
        if study is None:
            study = Study(name=name, technique_id=technique_id, task=task, seed=seed)
            self.session.add(study)
            self.session.commit()
            logger.info(f'created study {name}')
        elif (study.technique_id, study.task, study.seed) != (technique_id, task, seed):
            raise OptimizationError(
                f'study {name} exists for {study.technique_id}/{study.task}/seed {study.seed}, '
                f'not {technique_id}/{task}/seed {seed}',
            )
        return study

    def add_trial(self, study: Study, record: TrialRecord) -> Trial:
        """Store a trial of the study."""
        trial = Trial.from_record(study, record)
        self.session.add(trial)
        self.session.commit()
        return trial

    def list_trials(self, study: Study) -> List[Trial]:
        """List the trials of the study in order."""
        return self.session.query(Trial).filter(Trial.study_id == study.id).order_by(Trial.trial_index).all()

    def get_best_trial(self, study: Study) -> Optional[Trial]:
        """Get the complete trial with the highest objective, the earliest one on ties."""
        return (
            self.session.query(Trial)
            .filter(Trial.study_id == study.id, Trial.status == TrialStatus.COMPLETE.value)
            .order_by(Trial.objective.desc(), Trial.trial_index)
            .first()
        )

    def load_history(self, study: Study) -> List[TrialRecord]:
        """Load the trials of the study as records from which a search can resume."""
        return [trial.to_record() for trial in self.list_trials(study)]
