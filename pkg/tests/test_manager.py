# -*- coding: utf-8 -*-

"""Tests for storing studies in the database."""

from procaug.constants import MD, RE
from procaug.errors import OptimizationError
from procaug.hyperopt import TrialRecord, TrialStatus, optimize
from procaug.synthetic import generate_corpus
from tests.constants import ManagerMixin


def _record(trial_index: int, p: float, objective, status=TrialStatus.COMPLETE) -> TrialRecord:
    return TrialRecord(
        trial_index=trial_index,
        values={'p': p, 'n_aug': 2},
        objective=objective,
        status=status,
        technique_id='B.79',
        task=MD,
    )


class TestManager(ManagerMixin):
    """Tests the study manager."""

    def test_empty(self):
        """Test a fresh database."""
        self.assertFalse(self.manager.is_populated())
        self.assertEqual({'studies': 0, 'trials': 0}, self.manager.summarize())
        self.assertIsNone(self.manager.get_study('missing'))

    def test_study(self):
        """Test creating a study and getting it back."""
        study = self.manager.get_or_create_study(name='s1', technique_id='B.79', task=MD, seed=0)
        self.assertTrue(self.manager.is_populated())
        again = self.manager.get_or_create_study(name='s1', technique_id='B.79', task=MD, seed=0)
        self.assertEqual(study.id, again.id)
        self.manager.get_or_create_study(name='s0', technique_id='B.88', task=RE, seed=1)
        self.assertEqual(['s0', 's1'], [s.name for s in self.manager.list_studies()])
        self.assertEqual('s1', str(study))

    def test_mismatch(self):
        """Test that reusing a name with other settings raises."""
        self.manager.get_or_create_study(name='s1', technique_id='B.79', task=MD, seed=0)
        for kwargs in [
            dict(technique_id='B.88', task=MD, seed=0),
            dict(technique_id='B.79', task=RE, seed=0),
            dict(technique_id='B.79', task=MD, seed=1),
        ]:
            with self.subTest(**kwargs), self.assertRaises(OptimizationError):
                self.manager.get_or_create_study(name='s1', **kwargs)

    def test_trials(self):
        """Test storing trials, listing them and finding the best one."""
        study = self.manager.get_or_create_study(name='s1', technique_id='B.79', task=MD, seed=0)
        records = [
            _record(1, 0.2, 0.05),
            _record(0, 0.1, 0.05),
            _record(2, 0.3, None, TrialStatus.FAILED),
            _record(3, 0.4, -0.01),
        ]
        for record in records:
            self.manager.add_trial(study, record)
        self.assertEqual({'studies': 1, 'trials': 4}, self.manager.summarize())
        trials = self.manager.list_trials(study)
        self.assertEqual([0, 1, 2, 3], [trial.trial_index for trial in trials])
        self.assertEqual(2, trials[0].n_aug)
        self.assertEqual(0, self.manager.get_best_trial(study).trial_index)
        self.assertEqual(sorted(records, key=lambda record: record.trial_index), self.manager.load_history(study))

    def test_no_best_trial(self):
        """Test that a study with failed trials only has no best trial."""
        study = self.manager.get_or_create_study(name='s1', technique_id='B.79', task=MD, seed=0)
        self.manager.add_trial(study, _record(0, 0.1, None, TrialStatus.FAILED))
        self.assertIsNone(self.manager.get_best_trial(study))

    def test_resume(self):
        """Test that a stored search resumes where it stopped."""
        corpus = generate_corpus(6, seed=0)
        optimize('B.79', corpus, MD, n_trials=2, k=2, epochs=1, manager=self.manager, study_name='deletion')
        study = self.manager.get_study('deletion')
        self.assertEqual(2, len(self.manager.list_trials(study)))

        _, records = optimize('B.79', corpus, MD, n_trials=3, k=2, epochs=1, manager=self.manager,
                              study_name='deletion')
        self.assertEqual(3, len(records))
        self.assertEqual([0, 1, 2], [trial.trial_index for trial in self.manager.list_trials(study)])

    def test_default_study_name(self):
        """Test the name of a study stored without explicit name."""
        optimize('B.79', generate_corpus(4, seed=0), MD, n_trials=1, seed=2, k=2, epochs=1, manager=self.manager)
        self.assertIsNotNone(self.manager.get_study('B.79-md-2'))
