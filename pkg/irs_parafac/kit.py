from typing import List

import attr

from irs_parafac import harness
from irs_parafac.config import (
    ScenarioConfig,
    load_config,
)
from irs_parafac.datastructures import TrialRecord
from irs_parafac.estimators.base_estimator import BaseEstimator
from irs_parafac.registry import Registry

DEFAULT_PRESET = "paper-fig3"


class Kit:
    """
    Main class through which all the functionality is accessible.
    With this class you can pick a scenario, tune it, create estimators, check identifiability and run sweeps.

    Attributes:
        config: ScenarioConfig (optional)
            scenario to work with, the paper-fig3 preset by default
        preset: str (optional)
            name of a preset from presets.json, used when config is not given
    """
    def __init__(self, config: ScenarioConfig = None, preset: str = None):
        self.registry = Registry()
        if config is None:
            config = self.registry.load_preset_by_name(preset or DEFAULT_PRESET)
        self.config = config

    @classmethod
    def from_file(cls, path: str) -> 'Kit':
        return cls(config=load_config(path))

    @property
    def config(self) -> ScenarioConfig:
        return self.__config

    @config.setter
    def config(self, config: ScenarioConfig):
        if type(config) != ScenarioConfig:
            raise TypeError("Only ScenarioConfig object can be set to the Kit")
        self.__config = config
        self.base_estimator = BaseEstimator(config.bals)

    @property
    def seed(self) -> int:
        return self.__config.seed

    @seed.setter
    def seed(self, new_seed: int):
        if type(new_seed) != int:
            raise TypeError("Seed value should be int type")
        self.config = attr.evolve(self.__config, seed=new_seed)

    @property
    def trials(self) -> int:
        return self.__config.trials

    @trials.setter
    def trials(self, new_trials: int):
        if type(new_trials) != int:
            raise TypeError("Trials value should be int type")
        self.config = attr.evolve(self.__config, trials=new_trials)

    @property
    def workers(self) -> int:
        return self.__config.workers

    @workers.setter
    def workers(self, new_workers: int):
        if type(new_workers) != int:
            raise TypeError("Workers value should be int type")
        self.config = attr.evolve(self.__config, workers=new_workers)

    def estimator(self, name: str) -> BaseEstimator:
        """
        Returns the estimator object for "lskrf" or "bals", configured with the Kit's BALS settings
        """
        return self.base_estimator.create_and_get_estimator_by_name(name)

    def validate(self) -> List[tuple]:
        """
        Identifiability of every (estimator, N) pair of the scenario

        Returns:
            list of (estimator, N, IdentifiabilityReport)
        """
        return harness.identifiability_reports(self.__config)

    def run_trial(self, N: int, snr_db: float, trial_index: int) -> TrialRecord:
        return harness.run_trial(self.__config, N, snr_db, trial_index)

    def run_sweep(self, workers: int = None) -> harness.SweepResult:
        return harness.run_sweep(self.__config, workers=workers)

    def run_and_write(self, path: str = None) -> harness.SweepResult:
        """
        Runs the sweep and writes the CSV and manifest to path (config.output_path by default)

        Returns:
            SweepResult
        """
        result = self.run_sweep()
        harness.write_results(result, path or self.__config.output_path, self.__config)
        return result
