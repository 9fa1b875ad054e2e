import argparse
import logging
import sys
from typing import (
    List,
    Sequence,
)

import numpy as np
from cytoolz import (
    assoc,
    assoc_in,
)

from irs_parafac import harness
from irs_parafac.config import (
    config_from_dict,
    load_config_document,
)
from irs_parafac.exceptions import ValidationError
from irs_parafac.registry import Registry

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s [%(levelname)s] %(message)s"


def _setup_logging(level: str = "INFO") -> logging.Logger:
    package_logger = logging.getLogger("irs_parafac")
    package_logger.setLevel(level.upper())
    if not package_logger.handlers:
        handler = logging.StreamHandler()
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        package_logger.addHandler(handler)
    return package_logger


def parse_snr_grid(text: str) -> List[float]:
    """
    "start:step:stop" with stop included, or a comma separated list ("0,10,inf")
    """
    if ":" not in text:
        return [float(value) for value in text.split(",")]
    try:
        start, step, stop = (float(value) for value in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"Expected start:step:stop, got '{text}'")
    if step <= 0 or stop < start:
        raise argparse.ArgumentTypeError(f"Empty SNR grid '{text}'")
    count = int(np.floor((stop - start) / step + 1e-9)) + 1
    return [float(start + i * step) for i in range(count)]


def parse_int_list(text: str) -> List[int]:
    try:
        return [int(value) for value in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"Expected a comma separated list of integers, got '{text}'")


def _add_source_arguments(parser: argparse.ArgumentParser):
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--config", help="TOML config file")
    source.add_argument("--preset", help="built-in preset, e.g. paper-fig3")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="irs-parafac",
        description="PARAFAC channel estimation for IRS-assisted MIMO: Monte-Carlo sweeps of LSKRF and BALS")
    parser.add_argument("--log-level", default="INFO", choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    commands = parser.add_subparsers(dest="command", required=True)

    sweep = commands.add_parser("sweep", help="run a Monte-Carlo sweep and write the results CSV")
    _add_source_arguments(sweep)
    sweep.add_argument("--seed", type=int, help="master seed")
    sweep.add_argument("--trials", type=int, help="Monte-Carlo runs per cell")
    sweep.add_argument("--out", help="results CSV path")
    sweep.add_argument("--estimators", help="comma separated subset of lskrf,bals")
    sweep.add_argument("--snr", type=parse_snr_grid, help="SNR grid in dB, start:step:stop")
    sweep.add_argument("--n-list", type=parse_int_list, help="comma separated IRS sizes")
    sweep.add_argument("--workers", type=int, help="worker pool size")
    sweep.add_argument("--no-runtime", action="store_true", help="report runtimes as 0.0")

    validate = commands.add_parser("validate", help="check identifiability of every cell, no trials")
    _add_source_arguments(validate)
    validate.add_argument("--n-list", type=parse_int_list, help="comma separated IRS sizes")
    validate.add_argument("--estimators", help="comma separated subset of lskrf,bals")
    return parser


def load_document(args: argparse.Namespace) -> dict:
    if args.config:
        return load_config_document(args.config)
    return Registry().load_preset_document_by_name(args.preset)


def apply_overrides(document: dict, args: argparse.Namespace) -> dict:
    """
    Merges the command line overrides over a config document
    """
    overrides = {
        "seed": getattr(args, "seed", None),
        "trials": getattr(args, "trials", None),
        "output_path": getattr(args, "out", None),
        "workers": getattr(args, "workers", None),
        "snr_grid_db": getattr(args, "snr", None),
        "n_values": getattr(args, "n_list", None),
    }
    estimators = getattr(args, "estimators", None)
    if estimators:
        overrides["estimators"] = [name.strip().lower() for name in estimators.split(",")]
    for key, value in overrides.items():
        if value is not None:
            document = assoc(document, key, value)
    if getattr(args, "no_runtime", False):
        document = assoc(document, "record_runtime", False)
    if args.n_list is not None:
        # keeps dims.N inside the swept sizes
        document = assoc_in(document, ["dims", "N"], args.n_list[0])
    return document


def run_sweep_command(args: argparse.Namespace) -> int:
    config = config_from_dict(apply_overrides(load_document(args), args))
    result = harness.run_sweep(config)
    harness.write_results(result, config.output_path, config)
    logger.info("Results written to %s", config.output_path)
    if result.failures:
        logger.warning("%d cell(s) recorded estimator failures, see %s",
                       len(result.failures), harness.manifest_path(config.output_path))
    return 0


def run_validate_command(args: argparse.Namespace) -> int:
    config = config_from_dict(apply_overrides(load_document(args), args))
    failed = False
    for name, N, report in harness.identifiability_reports(config):
        status = "ok" if report else "; ".join(report.violations)
        failed = failed or not report
        print(f"{name} N={N}: {status}")
    return 1 if failed else 0


def main(argv: Sequence[str] = None) -> int:
    args = build_parser().parse_args(argv)
    _setup_logging(args.log_level)
    commands = {"sweep": run_sweep_command, "validate": run_validate_command}
    try:
        return commands[args.command](args)
    except (ValidationError, np.linalg.LinAlgError, OSError, KeyError):
        error = sys.exc_info()[1]
        message = error.args[0] if isinstance(error, KeyError) and error.args else error
        print(f"irs-parafac: error: {message}", file=sys.stderr)
        return 1
