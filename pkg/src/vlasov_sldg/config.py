"""Run configuration: ``key = value`` text with ``#`` comments."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from pathlib import Path

from .errors import ConfigError
from .scenarios import DEFAULTS

SCENARIOS = tuple(DEFAULTS)
BACKENDS = ("sldg", "spline")


@dataclass(frozen=True)
class RunConfig:
    scenario: str = "landau_weak"
    order: int = 3
    dof_per_dim: int = 64
    tau: float = 0.1
    t_end: float = 50.0
    backend: str = "sldg"
    limiter: bool = False
    v_max: float | None = None  # None: scenario default
    snapshot_times: tuple = ()  # empty: snapshot at t_end only
    output_dir: str = "output"
    diag_interval: float | None = None  # None: every step
    amplitude: float | None = None
    wavenumber: float | None = None
    beam_velocity: float | None = None
    nodal_snapshots: bool = False

    @property
    def degree(self):
        return 0 if self.backend == "spline" else self.order - 1

    @property
    def n_cells(self):
        """Cells per dimension; the spline backend uses one point per dof."""
        if self.backend == "spline":
            return self.dof_per_dim
        return self.dof_per_dim // self.order

    @property
    def actual_dof(self):
        return self.n_cells * (self.degree + 1)

    def resolved_snapshot_times(self):
        return tuple(self.snapshot_times) if self.snapshot_times else (self.t_end,)

    def scenario_params(self):
        params = {"amplitude": self.amplitude, "wavenumber": self.wavenumber,
                  "beam_velocity": self.beam_velocity, "v_max": self.v_max}
        allowed = DEFAULTS[self.scenario]
        return {k: v for k, v in params.items() if v is not None and k in allowed}

    def replace(self, **changes):
        return validate(dataclasses.replace(self, **changes))


def _parse_bool(text):
    low = text.lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _parse_optional_float(text):
    return None if text.lower() in ("", "none", "default") else float(text)


def _parse_times(text):
    parts = [p for p in text.replace(",", " ").split() if p]
    return tuple(float(p) for p in parts)


_PARSERS = {
    "scenario": str,
    "order": int,
    "dof_per_dim": int,
    "tau": float,
    "t_end": float,
    "backend": str,
    "limiter": _parse_bool,
    "v_max": _parse_optional_float,
    "snapshot_times": _parse_times,
    "output_dir": str,
    "diag_interval": _parse_optional_float,
    "amplitude": _parse_optional_float,
    "wavenumber": _parse_optional_float,
    "beam_velocity": _parse_optional_float,
    "nodal_snapshots": _parse_bool,
}


def validate(cfg, lines=None):
    lines = lines or {}

    def fail(key, msg):
        raise ConfigError(msg, key=key, line=lines.get(key))

    if cfg.scenario not in SCENARIOS:
        fail("scenario", f"unknown scenario {cfg.scenario!r}; expected one of {', '.join(SCENARIOS)}")
    if cfg.backend not in BACKENDS:
        fail("backend", f"unknown backend {cfg.backend!r}; expected one of {', '.join(BACKENDS)}")
    if not 1 <= cfg.order <= 10:
        fail("order", f"order must be in [1, 10], got {cfg.order}")
    if cfg.dof_per_dim < cfg.order:
        fail("dof_per_dim", f"dof_per_dim ({cfg.dof_per_dim}) must be >= order ({cfg.order})")
    if cfg.n_cells < 2:
        fail("dof_per_dim", f"dof_per_dim / order gives {cfg.n_cells} cells; need at least 2")
    if cfg.backend == "spline" and cfg.dof_per_dim < 4:
        fail("dof_per_dim", "the spline backend needs at least 4 points per dimension")
    if not cfg.tau > 0:
        fail("tau", f"tau must be positive, got {cfg.tau}")
    if not cfg.t_end > 0:
        fail("t_end", f"t_end must be positive, got {cfg.t_end}")
    if cfg.v_max is not None and not cfg.v_max > 0:
        fail("v_max", f"v_max must be positive, got {cfg.v_max}")
    if cfg.diag_interval is not None and not cfg.diag_interval > 0:
        fail("diag_interval", f"diag_interval must be positive, got {cfg.diag_interval}")
    for key in ("t_end", "diag_interval"):
        value = getattr(cfg, key)
        if value is not None:
            steps = value / cfg.tau
            if abs(steps - round(steps)) > 1e-9 * max(1.0, steps) or round(steps) < 1:
                fail(key, f"{key}={value} is not a positive multiple of tau={cfg.tau}")
    for t in cfg.snapshot_times:
        if t < 0 or t > cfg.t_end * (1 + 1e-12):
            fail("snapshot_times", f"snapshot time {t} outside [0, t_end]")
    if cfg.wavenumber is not None and not cfg.wavenumber > 0:
        fail("wavenumber", "wavenumber must be positive")
    return cfg


def parse_config(text):
    values = {}
    lines = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {raw.strip()!r}", line=lineno)
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in _PARSERS:
            raise ConfigError("unknown key", key=key, line=lineno)
        if key in values:
            raise ConfigError("duplicate key", key=key, line=lineno)
        try:
            values[key] = _PARSERS[key](value)
        except ValueError as exc:
            raise ConfigError(f"cannot parse {value!r}: {exc}", key=key, line=lineno) from None
        lines[key] = lineno
    return validate(RunConfig(**values), lines)


def load_config(path):
    return parse_config(Path(path).read_text(encoding="utf-8"))


def format_config(cfg):
    """``key = value`` lines for every field, round-trippable by parse_config."""
    out = []
    for f in dataclasses.fields(cfg):
        value = getattr(cfg, f.name)
        if isinstance(value, tuple):
            text = " ".join(repr(float(t)) for t in value)
        elif isinstance(value, bool):
            text = "true" if value else "false"
        elif value is None:
            text = "default"
        elif isinstance(value, float):
            text = repr(value)
        else:
            text = str(value)
        out.append(f"{f.name} = {text}")
    return out
