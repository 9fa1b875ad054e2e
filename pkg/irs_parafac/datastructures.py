from typing import (
    Dict,
    List,
    NamedTuple,
    Optional,
)

import numpy as np


class TrainingPair(NamedTuple):
    X: np.ndarray
    S: np.ndarray
    # c with S^H S = c I_N, derived from S when None
    s_scale: Optional[float] = None


class ChannelPair(NamedTuple):
    H: np.ndarray
    G: np.ndarray


class Rank1Triple(NamedTuple):
    u: np.ndarray
    sigma: float
    v: np.ndarray


class IdentifiabilityReport(NamedTuple):
    method: str
    violations: List[str]

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok


class EstimatorOutcome(NamedTuple):
    nmse_H: float
    nmse_G: float
    nmse_Hc: float
    iterations: int
    runtime_s: float
    error: Optional[str] = None

    @property
    def failed(self) -> bool:
        return self.error is not None


class TrialRecord(NamedTuple):
    N: int
    snr_db: float
    trial_index: int
    outcomes: Dict[str, EstimatorOutcome]


class SweepRow(NamedTuple):
    estimator: str
    N: int
    snr_db: float
    nmse_H: float
    nmse_G: float
    nmse_Hc: float
    mean_iterations: float
    mean_runtime_s: float
    trials: int
