"""Batch front end: configuration, the h-sweep, verification and output."""

from .config import ConfigError, StateSpec, SweepConfig, load_config, parse_config
from .emit import emit, read_records, render
from .run import SweepRecord, SweepSetup, evaluate_point, lowest_spectrum, run_sweep
from .verify import CheckResult, VerifyReport, run_verify

__all__ = [
    "CheckResult",
    "ConfigError",
    "StateSpec",
    "SweepConfig",
    "SweepRecord",
    "SweepSetup",
    "VerifyReport",
    "emit",
    "evaluate_point",
    "load_config",
    "lowest_spectrum",
    "parse_config",
    "read_records",
    "render",
    "run_sweep",
    "run_verify",
]
