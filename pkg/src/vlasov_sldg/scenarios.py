"""Initial-value problems used by the CLI and the acceptance suite."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import InvalidArgumentError

SQRT_2PI = np.sqrt(2.0 * np.pi)


def maxwellian(v):
    return np.exp(-0.5 * np.asarray(v) ** 2) / SQRT_2PI


@dataclass(frozen=True)
class Scenario:
    name: str
    f0: Callable
    domain_length: float
    v_max: float
    description: str
    field_enabled: bool = True
    wavenumber: float | None = None


def _landau(amplitude, wavenumber):
    def f0(x, v):
        return maxwellian(v) * (1.0 + amplitude * np.cos(wavenumber * x))

    return f0


def _two_stream(amplitude, wavenumber, beam_velocity):
    def f0(x, v):
        v = np.asarray(v)
        beams = np.exp(-0.5 * (v - beam_velocity) ** 2) + np.exp(-0.5 * (v + beam_velocity) ** 2)
        return beams / (2.0 * SQRT_2PI) * (1.0 + amplitude * np.cos(wavenumber * x))

    return f0


DEFAULTS = {
    "landau_weak": {"amplitude": 0.01, "wavenumber": 0.5, "v_max": 6.0},
    "two_stream": {"amplitude": 1e-3, "wavenumber": 0.2, "beam_velocity": 2.4, "v_max": 10.0},
    "free_streaming": {"amplitude": 0.01, "wavenumber": 0.5, "v_max": 6.0},
    "uniform": {"length": 4.0 * np.pi, "v_max": 6.0},
}

DESCRIPTIONS = {
    "landau_weak": "weak Landau damping: Maxwellian with a small cosine density perturbation",
    "two_stream": "two-stream instability: counter-streaming Maxwellian beams, small perturbation",
    "free_streaming": "landau_weak initial data with the electric field switched off",
    "uniform": "spatially uniform Maxwellian (steady state)",
}


def scenario_names():
    return list(DEFAULTS)


def make_scenario(name, params=None):
    """Build a named scenario; ``params`` overrides entries of ``DEFAULTS[name]``."""
    if name not in DEFAULTS:
        raise InvalidArgumentError(f"unknown scenario {name!r}; known: {', '.join(DEFAULTS)}")
    p = dict(DEFAULTS[name])
    for key, value in (params or {}).items():
        if value is None:
            continue
        if key not in p:
            raise InvalidArgumentError(f"scenario {name!r} has no parameter {key!r}")
        p[key] = float(value)

    if name == "uniform":
        return Scenario(name, lambda x, v: maxwellian(v) + 0.0 * np.asarray(x), p["length"], p["v_max"],
                        DESCRIPTIONS[name])
    length = 2.0 * np.pi / p["wavenumber"]
    if name == "two_stream":
        f0 = _two_stream(p["amplitude"], p["wavenumber"], p["beam_velocity"])
    else:
        f0 = _landau(p["amplitude"], p["wavenumber"])
    return Scenario(name, f0, length, p["v_max"], DESCRIPTIONS[name],
                    field_enabled=name != "free_streaming", wavenumber=p["wavenumber"])
