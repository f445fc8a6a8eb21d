"""Conserved-quantity reductions and time-series fits."""

from __future__ import annotations

from dataclasses import astuple, dataclass, fields

import numpy as np

from .errors import InsufficientDataError, InvalidArgumentError
from .fields import electric_energy
from .mesh_basis import gauss_legendre_rule, legendre_vandermonde

ENTROPY_FLOOR = 1e-30


@dataclass(frozen=True)
class InvariantRecord:
    t: float
    mass: float
    momentum: float
    kinetic_energy: float
    electric_energy: float
    total_energy: float
    l1_norm: float
    l2_norm: float
    entropy: float
    min_value: float
    negative_mass: float

    @classmethod
    def field_names(cls):
        return [f.name for f in fields(cls)]

    def as_tuple(self):
        return astuple(self)


# Quantities reported by relative_error_series, in column order.
TRACKED = (
    "mass",
    "momentum",
    "kinetic_energy",
    "electric_energy",
    "total_energy",
    "l1_norm",
    "l2_norm",
    "entropy",
)


def velocity_moments(f):
    """``(momentum, kinetic_energy)`` integrated exactly.

    ``v * f`` and ``v**2 * f`` are re-expanded onto ``k + 2`` Gauss points per
    velocity cell so the degree-(k+2) integrand is integrated exactly.
    """
    grid = f.grid
    basis = grid.basis
    k = basis.degree
    nodes, weights = gauss_legendre_rule(k + 2)
    to_fine = legendre_vandermonde(nodes, k) @ basis.nodal_to_modal  # (k+2, k+1)
    fine = np.einsum("qb,xvab->xvaq", to_fine, f.values)
    vg = grid.v_grid
    v = vg.edges[:-1, None] + 0.5 * vg.cell_width * (nodes[None, :] + 1.0)  # (nv, k+2)
    w = 0.25 * grid.x_grid.cell_width * vg.cell_width * basis.weights[:, None] * weights[None, :]
    weighted = fine * w[None, None, :, :]
    momentum = float(np.sum(weighted * v[None, :, None, :]))
    kinetic = 0.5 * float(np.sum(weighted * (v**2)[None, :, None, :]))
    return momentum, kinetic


def compute_invariants(f, field=None, t=0.0):
    """All tracked quantities of ``f`` (and of ``field``; ``None`` means E = 0)."""
    grid = f.grid
    w = grid.quadrature_weights()[None, None, :, :]
    values = f.values
    mass = float(np.sum(w * values))
    momentum, kinetic = velocity_moments(f)
    ee = 0.0 if field is None else electric_energy(field, grid.x_grid, grid.basis)
    l1 = float(np.sum(w * np.abs(values)))
    l2 = float(np.sqrt(np.sum(w * values**2)))
    positive = values > ENTROPY_FLOOR
    safe = np.where(positive, values, 1.0)
    entropy = -float(np.sum(np.where(positive, w * safe * np.log(safe), 0.0)))
    min_value = float(values.min())
    negative_mass = float(np.sum(w * np.minimum(values, 0.0)))
    return InvariantRecord(
        float(t), mass, momentum, kinetic, ee, kinetic + ee, l1, l2, entropy, min_value, negative_mass
    )


def relative_error_series(records, v_thermal=1.0, eps_scale=1e-300):
    """Relative deviation of each tracked quantity from the first record.

    Momentum is normalized by ``mass * v_thermal`` and the energy components
    by the initial total energy, since either may start at (or near) zero.
    """
    records = list(records)
    if not records:
        raise InvalidArgumentError("need at least one record")
    first = records[0]
    scales = {name: max(abs(getattr(first, name)), eps_scale) for name in TRACKED}
    scales["momentum"] = max(abs(first.mass) * v_thermal, eps_scale)
    energy_scale = max(abs(first.total_energy), eps_scale)
    for name in ("kinetic_energy", "electric_energy", "total_energy"):
        scales[name] = energy_scale
    out = {"t": np.array([r.t for r in records])}
    for name in TRACKED:
        series = np.array([getattr(r, name) for r in records])
        out[name] = (series - series[0]) / scales[name]
    return out


def local_maxima(y):
    """Indices of interior samples with ``y[i-1] < y[i] >= y[i+1]``."""
    y = np.asarray(y)
    if y.size < 3:
        return np.array([], dtype=int)
    mid = y[1:-1]
    return np.nonzero((mid > y[:-2]) & (mid >= y[2:]))[0] + 1


def fit_exponential_rate(times, values, window=None, min_peaks=4):
    """Exponential rate of the peak envelope of ``values`` over ``window``.

    Fits a least-squares line to ``log(values)`` at its local maxima.  A
    series without interior maxima is its own envelope and is fitted
    directly.  For an electric energy series the result is twice the
    amplitude rate.
    """
    t = np.asarray(times, dtype=float)
    y = np.asarray(values, dtype=float)
    if t.shape != y.shape or t.ndim != 1:
        raise InvalidArgumentError("times and values must be 1D arrays of equal length")
    if window is not None:
        lo, hi = window
        keep = (t >= lo) & (t <= hi)
        t, y = t[keep], y[keep]
    if t.size < 2:
        raise InsufficientDataError("fewer than two samples in the fit window")
    if np.any(y <= 0.0) or not np.all(np.isfinite(y)):
        raise InvalidArgumentError("values must be positive and finite inside the fit window")
    logy = np.log(y)
    peaks = local_maxima(logy)
    if peaks.size >= min_peaks:
        t_fit, y_fit = t[peaks], logy[peaks]
    elif peaks.size == 0:
        t_fit, y_fit = t, logy
    else:
        raise InsufficientDataError(
            f"found {peaks.size} envelope peaks in the window; need at least {min_peaks}"
        )
    slope, _ = np.polyfit(t_fit, y_fit, 1)
    return float(slope)


# --- phase-space structure -------------------------------------------------


@dataclass(frozen=True)
class VortexReport:
    """Location and shape of the trapping vortex in a snapshot.

    The O-point (vortex center) sits at the maximum of the potential, since
    the particle energy is ``v**2 / 2 - phi`` for ``dv/dt = E = dphi/dx``.
    """

    core_x: float
    core_cell: tuple
    xpoint_cell: tuple
    n_potential_maxima: int
    core_value: float
    xpoint_value: float
    core_is_local_max: bool
    core_is_local_min: bool
    enclosed: bool


def _neighbors(i, j, nx, nv):
    for di, dj in ((1, 0), (-1, 0), (0, 1), (0, -1)):
        jj = j + dj
        if 0 <= jj < nv:
            yield (i + di) % nx, jj


def _component(mask, start):
    nx, nv = mask.shape
    seen = {start}
    stack = [start]
    while stack:
        cell = stack.pop()
        for nb in _neighbors(*cell, nx, nv):
            if mask[nb] and nb not in seen:
                seen.add(nb)
                stack.append(nb)
    return seen


def _is_extremum(avg, i, j, sign):
    nx, nv = avg.shape
    centre = sign * avg[i, j]
    for di in (-1, 0, 1):
        for dj in (-1, 0, 1):
            jj = j + dj
            if (di or dj) and 0 <= jj < nv and sign * avg[(i + di) % nx, jj] > centre:
                return False
    return True


def vortex_structure(f, field):
    """Classify the phase-space structure around ``v = 0``.

    ``core_is_local_max`` holds if some cell within one cell of the O-point
    on the ``v = 0`` row is a 3x3 local maximum of the cell averages.
    ``enclosed`` holds if the level set halfway between the core and X-point
    values closes around the core without reaching the velocity boundary or
    the X-point.
    """
    grid = f.grid
    avg = f.cell_averages()
    nx, nv = avg.shape
    phi = field.phi_modal @ legendre_vandermonde(np.zeros(1), field.phi_modal.shape[1] - 1)[0]
    ic, ix_pt = int(np.argmax(phi)), int(np.argmin(phi))
    n_max = int(np.count_nonzero((phi > np.roll(phi, 1)) & (phi >= np.roll(phi, -1))))
    row = int(np.argmin(np.abs(grid.v_grid.centers)))
    core_val, xpt_val = float(avg[ic, row]), float(avg[ix_pt, row])

    nearby = [((ic + di) % nx, row + dj) for di in (-1, 0, 1) for dj in (-1, 0, 1) if 0 <= row + dj < nv]
    is_max = any(_is_extremum(avg, i, j, 1.0) for i, j in nearby)
    is_min = any(_is_extremum(avg, i, j, -1.0) for i, j in nearby)

    level = 0.5 * (core_val + xpt_val)
    mask = avg >= level if core_val >= xpt_val else avg <= level
    comp = _component(mask, (ic, row))
    cols = {c[0] for c in comp}
    rows = {c[1] for c in comp}
    enclosed = (
        (ix_pt, row) not in comp and 0 not in rows and nv - 1 not in rows and len(cols) < nx
    )
    return VortexReport(float(grid.x_grid.centers[ic]), (ic, row), (ix_pt, row), n_max,
                        core_val, xpt_val, is_max, is_min, enclosed)
