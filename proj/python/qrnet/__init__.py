"""Timing analysis and Monte Carlo simulation of PQC-protected quantum repeater networks."""

import json
import os

from . import _qrnet
from ._qrnet import (
    InputError,
    attack_outcome,
    chain_fidelity,
    check_single_hop,
    decay,
    effective_security,
    full_mesh_handshakes,
    hierarchical_handshakes,
    intercepted_fidelity,
    qber_of,
    rekey_cycle_time,
    swap,
)

__all__ = [
    "InputError",
    "attack_outcome",
    "chain_fidelity",
    "check",
    "check_single_hop",
    "decay",
    "detect",
    "effective_security",
    "full_mesh_handshakes",
    "hierarchical_handshakes",
    "intercepted_fidelity",
    "qber_of",
    "rekey_cycle_time",
    "simulate",
    "swap",
    "sweep",
    "validate",
]


def _scenario_text(scenario):
    # Accepts a dict, a JSON string, or a path to a JSON file.
    if isinstance(scenario, dict):
        return json.dumps(scenario)
    if isinstance(scenario, os.PathLike) or (isinstance(scenario, str) and os.path.isfile(scenario)):
        with open(scenario, encoding="utf-8") as fh:
            return fh.read()
    return scenario


def validate(scenario):
    """List of {path, message} violations; empty when the scenario is runnable."""
    return json.loads(_qrnet.validate(_scenario_text(scenario)))


def check(scenario):
    return json.loads(_qrnet.check(_scenario_text(scenario)))


def simulate(scenario, trials=None, seed=None):
    """Returns {"summary": {...}, "trials": [...]}."""
    return json.loads(_qrnet.simulate(_scenario_text(scenario), trials, seed))


def sweep(scenario, param, values, trials=None, seed=None):
    return json.loads(_qrnet.sweep(_scenario_text(scenario), param, list(values), trials, seed))


def detect(baseline, observed, threshold_sigma=3.0):
    return json.loads(_qrnet.detect(list(baseline), list(observed), threshold_sigma))
