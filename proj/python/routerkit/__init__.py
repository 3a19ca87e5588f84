"""Quantum-dot single-photon router: scattering, broadening, figures of merit and fits."""

import json as _json

from ._core import *  # noqa: F401,F403
from ._core import RouterkitError, SystemParams, reference_device, run_cli


def params(**overrides):
    """Reference device with JSON-style overrides, e.g. params(kappa_ghz=20, sigma_sd_ghz=0)."""
    base = _json.loads(reference_device().to_json())
    base.update(overrides)
    return SystemParams.from_json(_json.dumps(base))


def cli(*args):
    """Runs the command-line tool in-process and returns (exit_code, stdout, stderr)."""
    return run_cli([str(a) for a in args])
