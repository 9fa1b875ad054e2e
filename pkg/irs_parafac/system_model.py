"""
Training design and received-signal synthesis for the IRS-assisted MIMO link

The coherence time holds K blocks of T slots. The IRS keeps one phase-shift vector s[k]
(row k of S) during block k, and the pilots x[1], ..., x[T] (rows of X) repeat in every
block, so block k receives

    Y[k] = G diag(s[k]) H X^T + N[k]

which stacks into the tensor [[G, X H^T, S]] of dims (L, T, K).
"""
import logging
from typing import Tuple

import numpy as np

from irs_parafac.config import (
    S_DESIGNS,
    ScenarioDims,
)
from irs_parafac.datastructures import (
    ChannelPair,
    TrainingPair,
)
from irs_parafac.exceptions import (
    DegenerateInputError,
    ValidationError,
)
from irs_parafac.utils.linalg_utils import orthogonality_scale
from irs_parafac.utils.tensor_utils import (
    SignalTensor,
    as_complex_matrix,
    frobenius_norm_sq,
)

logger = logging.getLogger(__name__)

NOISELESS_SNR_DB = float("inf")


def complex_gaussian(rng: np.random.Generator, shape) -> np.ndarray:
    """
    i.i.d. CN(0, 1) samples: real and imaginary parts independent N(0, 1/2)
    """
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def gen_channels(dims: ScenarioDims, rng: np.random.Generator) -> ChannelPair:
    """
    Draws the BS-IRS channel H (N x M) and the IRS-UT channel G (L x N), in that order

    Parameters:
        dims: ScenarioDims
        rng: np.random.Generator
    Returns:
        ChannelPair with i.i.d. CN(0, 1) entries
    """
    H = complex_gaussian(rng, (dims.N, dims.M))
    G = complex_gaussian(rng, (dims.L, dims.N))
    return ChannelPair(H=H, G=G)


def dft_training(rows: int, cols: int) -> np.ndarray:
    """
    First `cols` columns of the rows-point unitary DFT matrix

    Parameters:
        rows: int
        cols: int
            rows >= cols
    Returns:
        rows x cols semi-unitary matrix, entries exp(-j 2 pi r c / rows) / sqrt(rows)
    """
    if cols < 1 or rows < cols:
        raise ValidationError(f"A semi-unitary {rows} x {cols} training matrix needs rows >= cols >= 1")
    r = np.arange(rows)[:, np.newaxis]
    c = np.arange(cols)[np.newaxis, :]
    return np.exp(-2j * np.pi * r * c / rows) / np.sqrt(rows)


def random_phase_training(rows: int, cols: int, rng: np.random.Generator) -> np.ndarray:
    """
    Unit-modulus matrix with phases drawn uniformly on (0, 2 pi]
    """
    return np.exp(1j * 2 * np.pi * (1.0 - rng.random((rows, cols))))


def build_training(dims: ScenarioDims, s_design: str = "unit_modulus", rng: np.random.Generator = None,
                   activation: np.ndarray = None) -> TrainingPair:
    """
    Builds the pilot matrix X and the IRS phase-shift matrix S

    X is always the T x M truncated DFT (X^H X = I_M). S depends on the design:

        unit_modulus  K-point DFT entries exp(-j 2 pi k n / K), S^H S = K I_N
        semi_unitary  truncated unitary DFT, S^H S = I_N
        random_phase  unit-modulus random phases, no orthogonality (allows K < N)

    Parameters:
        dims: ScenarioDims
        s_design: str
        rng: np.random.Generator
            required by "random_phase"
        activation: np.ndarray (optional)
            K x N on-off pattern in {0, 1} multiplied into S, all elements on by default
    Returns:
        TrainingPair, s_scale is c with S^H S = c I_N or None
    """
    if s_design not in S_DESIGNS:
        raise ValidationError(f"Unknown S design '{s_design}', expected one of {S_DESIGNS}")
    X = dft_training(dims.T, dims.M)

    if s_design == "random_phase":
        if rng is None:
            raise ValidationError("The random_phase S design needs a random stream")
        S = random_phase_training(dims.K, dims.N, rng)
    else:
        if dims.K < dims.N:
            raise ValidationError(
                f"The {s_design} S design needs K >= N, got K={dims.K}, N={dims.N}; use random_phase")
        S = dft_training(dims.K, dims.N)
        if s_design == "unit_modulus":
            S = S * np.sqrt(dims.K)

    if activation is not None:
        activation = np.asarray(activation)
        if activation.shape != S.shape:
            raise ValidationError(f"Activation pattern should be {S.shape}, got {activation.shape}")
        if not np.all(np.isin(activation, (0, 1))):
            raise ValidationError("Activation pattern entries should be 0 or 1")
        S = S * activation

    return TrainingPair(X=X, S=S, s_scale=orthogonality_scale(S))


def synthesize_noiseless(channels: ChannelPair, training: TrainingPair) -> SignalTensor:
    """
    Noiseless received tensor, slice k = G diag(S[k, :]) H X^T

    Parameters:
        channels: ChannelPair
        training: TrainingPair
    Returns:
        SignalTensor [[G, X H^T, S]] of dims (L, T, K)
    """
    H = as_complex_matrix(channels.H, "H")
    G = as_complex_matrix(channels.G, "G")
    X = as_complex_matrix(training.X, "X")
    S = as_complex_matrix(training.S, "S")
    N, M = H.shape
    if G.shape[1] != N or S.shape[1] != N:
        raise ValidationError(f"IRS size mismatch: H has {N} rows, G has {G.shape[1]} and S {S.shape[1]} columns")
    if X.shape[1] != M:
        raise ValidationError(f"BS antennas mismatch: H has {M} columns, X has {X.shape[1]}")
    Z = X @ H.T
    return SignalTensor.from_factors(G, Z, S)


def received_vector(channels: ChannelPair, training: TrainingPair, k: int, t: int) -> np.ndarray:
    """
    Noiseless L x 1 signal of slot t in block k (0-based), G diag(s[k]) H x[t]
    """
    return channels.G @ np.diag(training.S[k]) @ channels.H @ training.X[t]


def add_noise(clean: SignalTensor, snr_db: float, rng: np.random.Generator) -> Tuple[SignalTensor, SignalTensor]:
    """
    Adds white complex Gaussian noise scaled so that this realization hits the requested SNR

    SNR = 10 log10(||clean||_F^2 / ||noise||_F^2) holds exactly (up to rounding). An infinite
    snr_db gives a zero noise tensor and draws nothing from rng.

    Parameters:
        clean: SignalTensor
        snr_db: float
        rng: np.random.Generator
    Returns:
        (noisy, noise)
    """
    signal_energy = frobenius_norm_sq(clean)
    if signal_energy == 0:
        raise DegenerateInputError("SNR is undefined for an all-zero signal tensor")
    if np.isnan(snr_db) or snr_db == -np.inf:
        raise ValidationError(f"Can't calibrate noise to an SNR of {snr_db} dB")
    if snr_db == np.inf:
        noise = SignalTensor(np.zeros(clean.dims, dtype=np.complex128))
        return clean, noise

    try:
        attenuation = 10.0 ** (-float(snr_db) / 20)
    except OverflowError:
        raise ValidationError(f"Can't calibrate noise to an SNR of {snr_db} dB")
    raw = complex_gaussian(rng, clean.dims)
    noise = SignalTensor(raw * (np.sqrt(signal_energy / frobenius_norm_sq(raw)) * attenuation))
    return clean + noise, noise


def measured_snr_db(clean: SignalTensor, noise: SignalTensor) -> float:
    noise_energy = frobenius_norm_sq(noise)
    if noise_energy == 0:
        return NOISELESS_SNR_DB
    return float(10 * np.log10(frobenius_norm_sq(clean) / noise_energy))


def snr_key(snr_db: float) -> int:
    """
    IEEE-754 bit pattern of snr_db as an unsigned integer, used as a seed counter
    """
    return int(np.array(float(snr_db), dtype=np.float64).view(np.uint64))


TRIAL_STREAM_NAMES = ("channels", "noise", "training", "init")


def trial_streams(seed: int, N: int, snr_db: float, trial_index: int, init_seed: int = 0) -> dict:
    """
    Independent random streams of one Monte-Carlo trial

    The channel, noise and training streams are children of
    SeedSequence(seed, spawn_key=(N, snr_key(snr_db), trial_index)). The estimator-init stream
    comes from SeedSequence((seed, init_seed)) under the same spawn key, so init_seed changes the
    BALS starting point and nothing else. A trial therefore depends only on its own coordinates,
    never on the order trials are executed in.

    Returns:
        dict name -> np.random.Generator
    """
    spawn_key = (int(N), snr_key(snr_db), int(trial_index))
    sequence = np.random.SeedSequence(seed, spawn_key=spawn_key)
    streams = {name: np.random.default_rng(child)
               for name, child in zip(TRIAL_STREAM_NAMES[:-1], sequence.spawn(len(TRIAL_STREAM_NAMES) - 1))}
    streams["init"] = np.random.default_rng(np.random.SeedSequence((int(seed), int(init_seed)), spawn_key=spawn_key))
    return streams
