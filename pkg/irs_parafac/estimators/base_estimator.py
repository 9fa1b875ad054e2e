import sys
import time
from importlib import import_module

import attr
import numpy as np

from irs_parafac.config import (
    BalsSettings,
    ScenarioDims,
)
from irs_parafac.datastructures import (
    IdentifiabilityReport,
    TrainingPair,
)
from irs_parafac.estimators.identifiability import check_identifiability
from irs_parafac.utils.tensor_utils import SignalTensor


@attr.s(frozen=True, eq=False)
class ChannelEstimate:
    """
    Result of one channel estimation

    Attributes:
        H_hat: np.ndarray
            N x M BS-IRS channel estimate
        G_hat: np.ndarray
            L x N IRS-UT channel estimate
        iterations: int
            0 for closed-form estimates
        error_trace: tuple
            reconstruction error after every iteration
        wall_time: float
            seconds spent in the estimator
        converged: bool
            False when an iterative estimator stopped at its iteration cap
    """
    H_hat = attr.ib()
    G_hat = attr.ib()
    iterations = attr.ib(default=0)
    error_trace = attr.ib(default=(), converter=tuple)
    wall_time = attr.ib(default=0.0)
    converged = attr.ib(default=True)

    @property
    def H_cascaded(self) -> np.ndarray:
        return self.G_hat @ self.H_hat


class BaseEstimator:
    """
    Common interface of the channel estimators and the factory creating them by name

    Estimator classes live in irs_parafac/estimators/<Name>Estimator.py and are named <Name>,
    e.g. "bals" resolves to irs_parafac.estimators.BalsEstimator.Bals.

    Attributes:
        settings: BalsSettings
            iteration settings, ignored by closed-form estimators
    """
    name = None

    def __init__(self, settings: BalsSettings = None):
        self.settings = settings if settings is not None else BalsSettings()
        self.estimators = {}

    def check_identifiability(self, dims: ScenarioDims) -> IdentifiabilityReport:
        return check_identifiability(dims, self.name)

    def estimate(self, tensor: SignalTensor, training: TrainingPair, rng: np.random.Generator = None) -> ChannelEstimate:
        """
        Estimates H and G from a received tensor

        Parameters:
            tensor: SignalTensor
                received tensor of dims (L, T, K)
            training: TrainingPair
                pilots X and IRS matrix S used to build the tensor
            rng: np.random.Generator (optional)
                random stream of iterative estimators
        Returns:
            ChannelEstimate
        """
        raise NotImplementedError

    def timed_estimate(self, tensor: SignalTensor, training: TrainingPair,
                       rng: np.random.Generator = None) -> ChannelEstimate:
        """
        Runs estimate() and records its wall-clock time in ChannelEstimate.wall_time
        """
        start = time.perf_counter()
        est = self.estimate(tensor, training, rng=rng)
        elapsed = time.perf_counter() - start
        return attr.evolve(est, wall_time=elapsed)

    def create_and_get_estimator_by_name(self, estimator_name: str) -> 'BaseEstimator':
        self.create_estimator_by_name(estimator_name)
        return self.get_estimator_by_name(estimator_name)

    def get_estimator_by_name(self, estimator_name: str) -> 'BaseEstimator':
        """
        Returns estimator object if it was created and raises exception if was not

        Parameters:
            estimator_name: str
        Returns:
            estimator object
        """
        estimator = self.estimators.get(estimator_name.lower())
        if not estimator:
            raise KeyError(
                "Such an estimator was not created yet, call create_estimator_by_name() first")
        return estimator

    def create_estimator_by_name(self, estimator_name: str):
        """
        Creates estimator object by name and saves it to the dictionary

        Parameters:
            estimator_name: str
                "lskrf" or "bals"
        """
        key = estimator_name.lower()
        if key in self.estimators:
            return
        class_name = key.capitalize()
        try:
            estimator_module = import_module(f"irs_parafac.estimators.{class_name}Estimator")
        except ModuleNotFoundError:
            raise KeyError(f"Unknown estimator '{estimator_name}', no {class_name}Estimator module in estimators/")
        try:
            estimator_class = getattr(estimator_module, class_name)
            self.estimators[key] = estimator_class(settings=self.settings)
        except:
            raise Exception(
                f"Error occurs while create estimator object:\n{sys.exc_info()[1]}")
