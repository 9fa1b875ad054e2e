import sys
from typing import (
    Iterable,
    Tuple,
)

import attr
import toml
from jsonschema import Draft7Validator

from irs_parafac.exceptions import ConfigError

ESTIMATOR_NAMES = ("lskrf", "bals")
S_DESIGNS = ("unit_modulus", "semi_unitary", "random_phase")
# finite SNR points are limited to +-SNR_LIMIT_DB, +inf is the noiseless sentinel
SNR_LIMIT_DB = 300.0


def _positive(instance, attribute, value):
    if value <= 0:
        raise ValueError(f"{attribute.name} should be positive, got {value}")


def _non_negative(instance, attribute, value):
    if value < 0:
        raise ValueError(f"{attribute.name} should be non-negative, got {value}")


def _non_empty(instance, attribute, value):
    if len(value) == 0:
        raise ValueError(f"{attribute.name} should not be empty")


def _snr_points(instance, attribute, value):
    bad = [v for v in value if v != float("inf") and not -SNR_LIMIT_DB <= v <= SNR_LIMIT_DB]
    if bad:
        raise ValueError(f"SNR points should lie in [-{SNR_LIMIT_DB}, {SNR_LIMIT_DB}] dB or be inf, got {bad}")


def _int_tuple(values: Iterable) -> Tuple[int, ...]:
    return tuple(int(v) for v in values)


def _float_tuple(values: Iterable) -> Tuple[float, ...]:
    return tuple(float(v) for v in values)


def _name_tuple(values) -> Tuple[str, ...]:
    if isinstance(values, str):
        values = values.split(",")
    return tuple(v.strip().lower() for v in values)


def _known_estimators(instance, attribute, value):
    unknown = [name for name in value if name not in ESTIMATOR_NAMES]
    if unknown:
        raise ValueError(f"Unknown estimators {unknown}, expected a subset of {ESTIMATOR_NAMES}")
    if len(set(value)) != len(value):
        raise ValueError(f"Estimators should be listed once each, got {list(value)}")


@attr.s(frozen=True)
class ScenarioDims:
    """
    Dimensions of one IRS-assisted MIMO training scenario

    Attributes:
        M: int
            BS antennas
        L: int
            UT antennas
        N: int
            IRS elements
        T: int
            time slots per block
        K: int
            blocks per coherence time
    """
    M = attr.ib(validator=[attr.validators.instance_of(int), _positive])
    L = attr.ib(validator=[attr.validators.instance_of(int), _positive])
    N = attr.ib(validator=[attr.validators.instance_of(int), _positive])
    T = attr.ib(validator=[attr.validators.instance_of(int), _positive])
    K = attr.ib(validator=[attr.validators.instance_of(int), _positive])

    @property
    def Ts(self) -> int:
        """
        Coherence time in slots, K blocks of T slots
        """
        return self.K * self.T

    @property
    def tensor_dims(self) -> Tuple[int, int, int]:
        return (self.L, self.T, self.K)


@attr.s(frozen=True)
class BalsSettings:
    """
    Stopping rule and options of the bilinear alternating least squares estimator

    Attributes:
        tolerance: float
            stop when |e(i) - e(i-1)| <= tolerance
        max_iterations: int
            safety cap, reaching it is reported through ChannelEstimate.converged
        normalize_error: bool
            divide the reconstruction error by ||Y||_F^2
        fast_path: bool
            use the column-orthogonality shortcut when S and X allow it
        init_seed: int
            mixed into the estimator-init stream of every trial, and seeds the initial H when no
            random stream is passed in
    """
    tolerance = attr.ib(default=1e-6, converter=float, validator=_positive)
    max_iterations = attr.ib(default=200, validator=[attr.validators.instance_of(int), _positive])
    normalize_error = attr.ib(default=True, validator=attr.validators.instance_of(bool))
    fast_path = attr.ib(default=True, validator=attr.validators.instance_of(bool))
    init_seed = attr.ib(default=0, validator=[attr.validators.instance_of(int), _non_negative])


@attr.s(frozen=True)
class ScenarioConfig:
    """
    Full description of a Monte-Carlo sweep

    Attributes:
        dims: ScenarioDims
            M, L, T, K of every cell; N is replaced by each entry of n_values
        snr_grid_db: tuple
            SNR points in dB
        trials: int
            Monte-Carlo runs R per cell
        estimators: tuple
            subset of ("lskrf", "bals")
        bals: BalsSettings
        s_design: str
            "unit_modulus", "semi_unitary" or "random_phase"
        seed: int
            master seed, every trial derives its own substream from it
        output_path: str
            CSV destination
        n_values: tuple
            IRS sizes swept, defaults to (dims.N,)
        workers: int
            worker pool size of the sweep
        record_runtime: bool
            report wall-clock runtimes, 0.0 when off
    """
    dims = attr.ib(validator=attr.validators.instance_of(ScenarioDims))
    snr_grid_db = attr.ib(default=(0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0), converter=_float_tuple,
                          validator=[_non_empty, _snr_points])
    trials = attr.ib(default=200, validator=[attr.validators.instance_of(int), _positive])
    estimators = attr.ib(default=ESTIMATOR_NAMES, converter=_name_tuple,
                         validator=[_non_empty, _known_estimators])
    bals = attr.ib(default=attr.Factory(BalsSettings), validator=attr.validators.instance_of(BalsSettings))
    s_design = attr.ib(default="unit_modulus", validator=attr.validators.in_(S_DESIGNS))
    seed = attr.ib(default=0, validator=[attr.validators.instance_of(int), _non_negative])
    output_path = attr.ib(default="results.csv", validator=attr.validators.instance_of(str))
    n_values = attr.ib(default=attr.Factory(lambda self: (self.dims.N,), takes_self=True),
                       converter=_int_tuple, validator=_non_empty)
    workers = attr.ib(default=1, validator=[attr.validators.instance_of(int), _positive])
    record_runtime = attr.ib(default=True, validator=attr.validators.instance_of(bool))

    def dims_for(self, N: int) -> ScenarioDims:
        return attr.evolve(self.dims, N=int(N))


_DIMENSION = {"type": "integer", "minimum": 1}

CONFIG_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "type": "object",
    "additionalProperties": False,
    "required": ["dims"],
    "properties": {
        "dims": {
            "type": "object",
            "additionalProperties": False,
            "required": ["M", "L", "T", "K"],
            "properties": {"M": _DIMENSION, "L": _DIMENSION, "N": _DIMENSION, "T": _DIMENSION, "K": _DIMENSION},
        },
        "snr_grid_db": {"type": "array", "minItems": 1, "items": {"type": "number"}},
        "trials": {"type": "integer", "minimum": 1},
        "estimators": {
            "type": "array", "minItems": 1, "uniqueItems": True,
            "items": {"type": "string", "enum": list(ESTIMATOR_NAMES)},
        },
        "bals": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "tolerance": {"type": "number", "exclusiveMinimum": 0},
                "max_iterations": {"type": "integer", "minimum": 1},
                "normalize_error": {"type": "boolean"},
                "fast_path": {"type": "boolean"},
                "init_seed": {"type": "integer", "minimum": 0},
            },
        },
        "s_design": {"type": "string", "enum": list(S_DESIGNS)},
        "seed": {"type": "integer", "minimum": 0},
        "output_path": {"type": "string"},
        "n_values": {"type": "array", "minItems": 1, "items": _DIMENSION},
        "workers": {"type": "integer", "minimum": 1},
        "record_runtime": {"type": "boolean"},
    },
}


def validate_config_document(document: dict):
    """
    Checks a parsed config document against CONFIG_SCHEMA

    Raises:
        ConfigError listing every schema violation with its key path
    """
    validator = Draft7Validator(CONFIG_SCHEMA)
    errors = sorted(validator.iter_errors(document), key=lambda e: list(e.path))
    if errors:
        messages = [f"{'.'.join(str(p) for p in e.path) or '<root>'}: {e.message}" for e in errors]
        raise ConfigError("Invalid config: " + "; ".join(messages))


def config_from_dict(document: dict) -> ScenarioConfig:
    """
    Builds a ScenarioConfig from a document shaped like the TOML config file

    Parameters:
        document: dict
    Returns:
        ScenarioConfig
    """
    validate_config_document(document)
    fields = dict(document)
    dims = dict(fields.pop("dims"))
    if "N" not in dims:
        if not fields.get("n_values"):
            raise ConfigError("Invalid config: dims.N or n_values is required")
        dims["N"] = fields["n_values"][0]
    try:
        return ScenarioConfig(
            dims=ScenarioDims(**dims),
            bals=BalsSettings(**fields.pop("bals", {})),
            **fields)
    except (TypeError, ValueError):
        raise ConfigError(f"Invalid config: {sys.exc_info()[1]}")


def config_to_dict(config: ScenarioConfig) -> dict:
    """
    Inverse of config_from_dict, with lists in place of tuples
    """
    return attr.asdict(config, retain_collection_types=False)


def load_config(path: str) -> ScenarioConfig:
    """
    Reads a TOML config file

    Parameters:
        path: str
    Returns:
        ScenarioConfig
    """
    return config_from_dict(load_config_document(path))


def load_config_document(path: str) -> dict:
    try:
        with open(path) as config_file:
            return toml.load(config_file)
    except FileNotFoundError:
        raise FileNotFoundError(f"Config file {path} not found")
    except toml.TomlDecodeError:
        raise ConfigError(f"Can't parse config file {path}: {sys.exc_info()[1]}")
