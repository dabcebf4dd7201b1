"""Python front end for the degen_control library."""

import json

from ._degen_control import (
    BesselError,
    ConfigError,
    FamilyError,
    Mode,
    ParamError,
    ProblemParams,
    RunConfig,
    bessel_zeros,
    compute_modes,
    derive,
    eigenfunction,
    eval_J,
    eval_J_prime,
    lower_bound,
    parse_config,
    upper_bound,
)
from ._degen_control import run as _run
from ._degen_control import verify as _verify


def make_config(**settings):
    """RunConfig from keyword settings using the config-file key names."""
    cfg = RunConfig()
    for key, value in settings.items():
        cfg.set(key, str(value))
    return cfg


def run(config=None, **settings):
    """Run the pipeline; returns (exit_code, report dict, control samples)."""
    cfg = config if config is not None else make_config(**settings)
    code, report, control = _run(cfg)
    return code, json.loads(report), control


def verify(config=None, **settings):
    """Run the property suites; returns (exit_code, report dict)."""
    cfg = config if config is not None else make_config(**settings)
    code, report = _verify(cfg)
    return code, json.loads(report)


__all__ = [
    "BesselError",
    "ConfigError",
    "FamilyError",
    "Mode",
    "ParamError",
    "ProblemParams",
    "RunConfig",
    "bessel_zeros",
    "compute_modes",
    "derive",
    "eigenfunction",
    "eval_J",
    "eval_J_prime",
    "lower_bound",
    "make_config",
    "parse_config",
    "run",
    "upper_bound",
    "verify",
]
