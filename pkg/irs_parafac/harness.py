"""
Seeded Monte-Carlo sweeps over estimator, IRS size N and SNR

Each trial is a pure function of (config, N, snr_db, trial_index): it draws channels, training
and noise from its own substreams (system_model.trial_streams) and runs every configured
estimator on the same noisy tensor. Cells aggregate their trials in ascending trial order,
so results don't depend on the worker pool size.
"""
import csv
import json
import logging
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from datetime import datetime
from typing import (
    List,
    Sequence,
    Tuple,
)

import attr
import numpy as np
from cytoolz import groupby

from irs_parafac.config import (
    ScenarioConfig,
    config_to_dict,
)
from irs_parafac.datastructures import (
    ChannelPair,
    EstimatorOutcome,
    SweepRow,
    TrialRecord,
)
from irs_parafac.estimators.ambiguity import (
    cascaded_channel,
    resolve_scaling,
)
from irs_parafac.estimators.base_estimator import BaseEstimator
from irs_parafac.estimators.identifiability import (
    LSKRF,
    check_identifiability,
)
from irs_parafac.exceptions import (
    IdentifiabilityError,
    ValidationError,
)
from irs_parafac.system_model import (
    add_noise,
    build_training,
    gen_channels,
    synthesize_noiseless,
    trial_streams,
)
from irs_parafac.utils.tensor_utils import frobenius_norm_sq
from irs_parafac.version import __version__

logger = logging.getLogger(__name__)

CSV_HEADER = ("estimator", "N", "snr_db", "nmse_H", "nmse_G", "nmse_Hc",
              "mean_iterations", "mean_runtime_s", "trials")
RUNTIME_GROUPS = 10


@attr.s(frozen=True)
class SweepResult:
    """
    Aggregated sweep, one row per (estimator, N, snr_db) cell

    Attributes:
        rows: tuple
            SweepRow records in estimator, N, SNR order
        failures: dict
            (estimator, N, snr_db) -> number of trials where the estimator raised
    """
    rows = attr.ib(converter=tuple)
    failures = attr.ib(default=attr.Factory(dict))

    def row(self, estimator: str, N: int, snr_db: float) -> SweepRow:
        for row in self.rows:
            if row.estimator == estimator and row.N == N and row.snr_db == snr_db:
                return row
        raise KeyError(f"No row for estimator={estimator}, N={N}, snr_db={snr_db}")

    def series(self, estimator: str, N: int, field: str = "nmse_Hc") -> List[float]:
        """
        Values of one column along the SNR grid of a cell
        """
        return [getattr(r, field) for r in self.rows if r.estimator == estimator and r.N == N]


def relative_error(estimate: np.ndarray, truth: np.ndarray) -> float:
    estimate, truth = np.asarray(estimate), np.asarray(truth)
    if estimate.shape != truth.shape:
        raise ValidationError(f"Estimate dims {estimate.shape} don't match true dims {truth.shape}")
    truth_energy = frobenius_norm_sq(truth)
    if truth_energy == 0:
        raise ValidationError("Relative error against an all-zero matrix is undefined")
    return frobenius_norm_sq(estimate - truth) / truth_energy


def nmse(estimates: Sequence[np.ndarray], truths: Sequence[np.ndarray]) -> float:
    """
    Normalized mean square error, mean over runs of ||truth - estimate||_F^2 / ||truth||_F^2

    Parameters:
        estimates: list of np.ndarray
        truths: list of np.ndarray
            same length as estimates, pairwise equal dims
    Returns:
        float
    """
    if len(estimates) == 0 or len(estimates) != len(truths):
        raise ValidationError(
            f"nmse needs two non-empty lists of equal length, got {len(estimates)} and {len(truths)}")
    return float(np.mean([relative_error(e, t) for e, t in zip(estimates, truths)]))


def median_of_means(values: Sequence[float], groups: int = RUNTIME_GROUPS) -> float:
    """
    Median of the means of up to `groups` contiguous chunks of values
    """
    values = np.asarray(values, dtype=np.float64)
    if values.size == 0:
        return float("nan")
    chunks = np.array_split(values, min(groups, values.size))
    return float(np.median([chunk.mean() for chunk in chunks]))


def identifiability_reports(config: ScenarioConfig) -> List[Tuple[str, int, 'IdentifiabilityReport']]:
    """
    Identifiability report of every (estimator, N) pair of a config, design constraints included
    """
    reports = []
    for name in config.estimators:
        for N in config.n_values:
            dims = config.dims_for(N)
            report = check_identifiability(dims, name)
            if name == LSKRF and config.s_design == "random_phase":
                report.violations.append("LSKRF needs a column-orthogonal S, random_phase S is not")
            if config.s_design != "random_phase" and dims.K < dims.N and name != LSKRF:
                report.violations.append(
                    f"{config.s_design} S needs K >= N (K={dims.K}, N={dims.N}), use s_design = random_phase")
            reports.append((name, N, report))
    return reports


def check_sweep(config: ScenarioConfig):
    """
    Raises IdentifiabilityError for the first (estimator, N) cell that can't be run
    """
    for name, N, report in identifiability_reports(config):
        if not report:
            raise IdentifiabilityError(report.violations, cell=f"estimator={name}, N={N}")


def _failed_outcome(error: str) -> EstimatorOutcome:
    nan = float("nan")
    return EstimatorOutcome(nmse_H=nan, nmse_G=nan, nmse_Hc=nan, iterations=0, runtime_s=0.0, error=error)


def _score(est, channels: ChannelPair, record_runtime: bool) -> EstimatorOutcome:
    aligned = resolve_scaling(est, channels)
    return EstimatorOutcome(
        nmse_H=relative_error(aligned.H_hat, channels.H),
        nmse_G=relative_error(aligned.G_hat, channels.G),
        nmse_Hc=relative_error(cascaded_channel(est), channels.G @ channels.H),
        iterations=int(est.iterations),
        runtime_s=float(est.wall_time) if record_runtime else 0.0)


def run_trial(config: ScenarioConfig, N: int, snr_db: float, trial_index: int) -> TrialRecord:
    """
    One Monte-Carlo run of every configured estimator on a shared noisy tensor

    Per-channel errors are measured after resolve_scaling, the cascaded error without it.
    Estimator exceptions are recorded in the outcome instead of being raised.

    Parameters:
        config: ScenarioConfig
        N: int
            IRS size of the cell
        snr_db: float
            SNR of the cell, float("inf") for noiseless data
        trial_index: int
    Returns:
        TrialRecord
    """
    dims = config.dims_for(N)
    streams = trial_streams(config.seed, N, snr_db, trial_index, config.bals.init_seed)
    channels = gen_channels(dims, streams["channels"])
    training = build_training(dims, config.s_design, rng=streams["training"])
    noisy, _ = add_noise(synthesize_noiseless(channels, training), snr_db, streams["noise"])

    factory = BaseEstimator(config.bals)
    outcomes = {}
    for name in config.estimators:
        estimator = factory.create_and_get_estimator_by_name(name)
        try:
            est = estimator.timed_estimate(noisy, training, rng=streams["init"])
            outcomes[name] = _score(est, channels, config.record_runtime)
        except Exception:
            error = f"{type(sys.exc_info()[1]).__name__}: {sys.exc_info()[1]}"
            logger.warning("Trial %d of cell (%s, N=%d, %s dB) failed: %s", trial_index, name, N, snr_db, error)
            outcomes[name] = _failed_outcome(error)
    return TrialRecord(N=int(N), snr_db=float(snr_db), trial_index=int(trial_index), outcomes=outcomes)


def _aggregate(config: ScenarioConfig, records: List[TrialRecord]) -> SweepResult:
    by_cell = groupby(lambda r: (r.N, r.snr_db), records)
    rows = []
    failures = {}
    for name in config.estimators:
        for N in config.n_values:
            for snr_db in config.snr_grid_db:
                cell_records = sorted(by_cell[(N, snr_db)], key=lambda r: r.trial_index)
                outcomes = [r.outcomes[name] for r in cell_records]
                succeeded = [o for o in outcomes if not o.failed]
                failed = len(outcomes) - len(succeeded)
                if failed:
                    failures[(name, N, snr_db)] = failed

                def mean_of(field):
                    if not succeeded:
                        return float("nan")
                    return float(np.mean([getattr(o, field) for o in succeeded]))

                rows.append(SweepRow(
                    estimator=name, N=N, snr_db=snr_db,
                    nmse_H=mean_of("nmse_H"), nmse_G=mean_of("nmse_G"), nmse_Hc=mean_of("nmse_Hc"),
                    mean_iterations=mean_of("iterations"),
                    mean_runtime_s=median_of_means([o.runtime_s for o in succeeded]),
                    trials=config.trials))
    return SweepResult(rows=rows, failures=failures)


def run_sweep(config: ScenarioConfig, workers: int = None) -> SweepResult:
    """
    Runs config.trials trials for every (estimator, N, snr_db) cell and aggregates them

    Parameters:
        config: ScenarioConfig
        workers: int (optional)
            worker pool size, config.workers when omitted
    Returns:
        SweepResult
    """
    check_sweep(config)
    workers = workers if workers is not None else config.workers
    tasks = [(N, snr_db, r) for N in config.n_values for snr_db in config.snr_grid_db for r in range(config.trials)]
    logger.info("Running %d trials (%d cells x %d runs) with %d worker(s)",
                len(tasks), len(config.n_values) * len(config.snr_grid_db), config.trials, workers)

    if workers == 1:
        records = [run_trial(config, *task) for task in tasks]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(lambda task: run_trial(config, *task), tasks))

    result = _aggregate(config, records)
    for row in result.rows:
        logger.info("%s N=%d SNR=%s dB: NMSE(Hc)=%.3e, %.1f iterations",
                    row.estimator, row.N, row.snr_db, row.nmse_Hc, row.mean_iterations)
    return result


def manifest_path(path: str) -> str:
    return os.path.splitext(path)[0] + ".manifest.json"


def _format(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_results(result: SweepResult, path: str, config: ScenarioConfig = None):
    """
    Writes the sweep CSV and its manifest (<path without extension>.manifest.json)

    Parameters:
        result: SweepResult
        path: str
        config: ScenarioConfig (optional)
            recorded in the manifest
    """
    manifest = {
        "version": __version__,
        "numpy_version": np.__version__,
        "created_at": datetime.now().isoformat(timespec="seconds"),
        "seed": config.seed if config is not None else None,
        "config": config_to_dict(config) if config is not None else None,
        "failures": [
            {"estimator": name, "N": N, "snr_db": snr_db, "trials": count}
            for (name, N, snr_db), count in sorted(result.failures.items())
        ],
    }
    try:
        with open(path, "w", newline="") as csv_file:
            writer = csv.writer(csv_file, lineterminator="\n")
            writer.writerow(CSV_HEADER)
            for row in result.rows:
                writer.writerow([_format(value) for value in row])
        with open(manifest_path(path), "w") as manifest_file:
            json.dump(manifest, manifest_file, indent=2)
    except OSError:
        raise OSError(f"Error while writing results to {path}: {sys.exc_info()[1]}")


def read_results(path: str) -> SweepResult:
    """
    Parses a CSV written by write_results; failure counts come from the manifest when present

    Parameters:
        path: str
    Returns:
        SweepResult
    """
    try:
        with open(path, newline="") as csv_file:
            reader = csv.reader(csv_file)
            header = tuple(next(reader, ()))
            if header != CSV_HEADER:
                raise ValidationError(f"Unexpected header in {path}: {','.join(header)}")
            rows = [
                SweepRow(
                    estimator=values[0], N=int(values[1]), snr_db=float(values[2]),
                    nmse_H=float(values[3]), nmse_G=float(values[4]), nmse_Hc=float(values[5]),
                    mean_iterations=float(values[6]), mean_runtime_s=float(values[7]), trials=int(values[8]))
                for values in reader
            ]
    except FileNotFoundError:
        raise FileNotFoundError(f"Results file {path} not found")

    failures = {}
    if os.path.exists(manifest_path(path)):
        with open(manifest_path(path)) as manifest_file:
            for entry in json.load(manifest_file).get("failures", []):
                failures[(entry["estimator"], int(entry["N"]), float(entry["snr_db"]))] = int(entry["trials"])
    return SweepResult(rows=rows, failures=failures)
