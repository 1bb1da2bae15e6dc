# -*- coding: utf-8 -*-

"""SQLAlchemy models for stored optimization studies."""

from __future__ import annotations

import json

from sqlalchemy import BigInteger, Column, Float, ForeignKey, Integer, String, Text, UniqueConstraint
from sqlalchemy.orm import declarative_base, relationship

from .constants import MODULE_NAME
from .hyperopt import TrialRecord, TrialStatus

Base = declarative_base()

STUDY_TABLE_NAME = f'{MODULE_NAME}_study'
TRIAL_TABLE_NAME = f'{MODULE_NAME}_trial'


class Study(Base):
    """A database model for the search of one technique's configuration on one task."""

    __tablename__ = STUDY_TABLE_NAME
    id = Column(Integer, primary_key=True)  # noqa:A003

    name = Column(String(255), unique=True, nullable=False, index=True, doc='name of the study')
    technique_id = Column(String(255), nullable=False, doc='identifier of the optimized technique')
    task = Column(String(8), nullable=False, doc='the task whose gain is maximized, md or re')
    seed = Column(BigInteger, nullable=False, doc='the seed of the cross-validation and the search')

    trials = relationship('Trial', back_populates='study', order_by='Trial.trial_index')

    def __repr__(self):  # noqa: D105
        return self.name


class Trial(Base):
    """A database model for one evaluated configuration."""

    __tablename__ = TRIAL_TABLE_NAME
    __table_args__ = (
        UniqueConstraint('study_id', 'trial_index'),
    )
    id = Column(Integer, primary_key=True)  # noqa:A003

    study_id = Column(Integer, ForeignKey(f'{STUDY_TABLE_NAME}.id'), nullable=False, doc='The study')
    study = relationship(Study, back_populates='trials')

    trial_index = Column(Integer, nullable=False, doc='position of the trial in its study')
    params = Column(Text, nullable=False, doc='JSON object of the parameter values, the augmentation factor included')
    n_aug = Column(Integer, nullable=False, doc='synthetic documents per original')
    objective = Column(Float, nullable=True, doc='the gain reached, null if the trial failed')
    status = Column(String(16), nullable=False, doc='complete or failed')

    def __repr__(self):  # noqa: D105
        return f'{self.study}#{self.trial_index}'

    @classmethod
    def from_record(cls, study: Study, record: TrialRecord) -> Trial:
        """Build a row from a trial record."""
        return cls(
            study=study,
            trial_index=record.trial_index,
            params=record.params_json,
            n_aug=int(record.values.get('n_aug', 1)),
            objective=record.objective,
            status=record.status.value,
        )

    def to_record(self) -> TrialRecord:
        """Convert this row back to a trial record."""
        return TrialRecord(
            trial_index=self.trial_index,
            values=json.loads(self.params),
            objective=self.objective,
            status=TrialStatus(self.status),
            technique_id=self.study.technique_id,
            task=self.study.task,
        )
