"""Driven two-level atoms in a lossy single-mode cavity.

Thin Python layer over the C++ core. Rates and frequencies are in units of
the atomic linewidth gamma, positions in cavity wavelengths.
"""

import json as _json

from ._cqed import (
    SystemParams,
    adiabatic_alpha,
    critical_atom_number,
    excitation_spectrum,
    excited_population,
    free_space_fluorescence,
    in_phase_alpha,
    perturbative_trace_distance,
    resonances,
    restoring_coefficient,
    semiclassical_force,
    small_kappa_rates,
    steady_state,
)
from . import _cqed

__all__ = [
    "SystemParams",
    "adiabatic_alpha",
    "critical_atom_number",
    "excitation_spectrum",
    "excited_population",
    "figure",
    "figure_names",
    "free_space_fluorescence",
    "in_phase_alpha",
    "perturbative_trace_distance",
    "resonances",
    "restoring_coefficient",
    "run",
    "semiclassical_force",
    "small_kappa_rates",
    "steady_state",
]


def _result(raw):
    name, columns, rows, meta = raw
    return {"name": name, "columns": list(columns), "rows": rows, "metadata": _json.loads(meta)}


def run(config):
    """Run a config given as a dict (same schema as the JSON config files)."""
    return _result(_cqed._run(_json.dumps(config)))


def figure(name, workers=1):
    """Panels of a figure preset as a list of result dicts."""
    return [_result(r) for r in _cqed._figure(name, workers)]


def figure_names():
    return list(_cqed._figure_names())
