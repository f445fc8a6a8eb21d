"""Charge density, periodic Poisson solve and electric field.

The field obeys ``dE/dx = rho - 1`` with zero spatial mean; the potential
satisfies ``dphi/dx = E``.  Because ``rho`` is a degree-k polynomial per
cell, E is built as its exact piecewise antiderivative (degree k+1), which
keeps E continuous and makes the discrete momentum source vanish.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.polynomial import legendre as npleg

from .errors import IncompatibleDensityError, InvalidArgumentError
from .mesh_basis import gauss_legendre_rule, legendre_vandermonde

COMPATIBILITY_TOLERANCE = 1e-9


@dataclass(frozen=True, eq=False)
class DensityLine:
    """Nodal values of ``rho(x) = int f dv``, shape ``(n_x_cells, k + 1)``."""

    values: np.ndarray


@dataclass(frozen=True, eq=False)
class FieldState:
    """Electric field and potential as modal Legendre coefficients per cell.

    ``e_modal`` has degree k+1 (``k + 2`` coefficients), ``phi_modal`` degree
    k+2.  ``e_nodal`` holds E at the x Gauss nodes, which is all the v
    advection consumes.
    """

    e_modal: np.ndarray
    phi_modal: np.ndarray
    e_nodal: np.ndarray
    e_mean: float
    cell_width: float

    @classmethod
    def zero(cls, x_grid, basis):
        n, k = x_grid.n_cells, basis.degree
        return cls(np.zeros((n, k + 2)), np.zeros((n, k + 3)), np.zeros((n, k + 1)), 0.0, x_grid.cell_width)

    def at(self, x_grid, x):
        """Point values of E."""
        idx, ref = x_grid.locate(x)
        k1 = self.e_modal.shape[1] - 1
        return np.einsum("...j,...j->...", legendre_vandermonde(ref, k1), self.e_modal[idx])

    def interface_jumps(self):
        """E(right end of cell i) - E(left end of cell i+1), periodic."""
        right = self.e_modal.sum(axis=1)
        signs = (-1.0) ** np.arange(self.e_modal.shape[1])
        left = self.e_modal @ signs
        return right - np.roll(left, -1)


def compute_density(f):
    grid = f.grid
    w = grid.basis.weights
    hv = grid.v_grid.cell_width
    rho = 0.5 * hv * np.einsum("xvab,b->xa", f.values, w)
    return DensityLine(rho)


def density_integral(rho, x_grid, basis):
    return 0.5 * x_grid.cell_width * float(np.sum(rho.values @ basis.weights))


def solve_poisson(rho, x_grid, basis):
    """Field from ``dE/dx = rho - 1``, periodic, zero mean.

    The discrete source is centered on its own mean before integration so
    that E is exactly periodic; a mean farther than ``1e-9`` from 1 is
    rejected as an upstream normalization error.
    """
    values = np.asarray(rho.values, dtype=float)
    n, k = x_grid.n_cells, basis.degree
    if values.shape != (n, k + 1):
        raise InvalidArgumentError(f"density shape {values.shape} does not match ({n}, {k + 1})")
    h = x_grid.cell_width
    imbalance = density_integral(rho, x_grid, basis) - x_grid.length
    if not abs(imbalance) <= COMPATIBILITY_TOLERANCE:
        raise IncompatibleDensityError(
            f"integral of (rho - 1) is {imbalance:.3e}; expected |.| <= {COMPATIBILITY_TOLERANCE:g}"
        )
    source = basis.to_modal(values)
    source[:, 0] -= np.mean(source[:, 0])

    e_modal = npleg.legint(source, m=1, lbnd=-1, scl=0.5 * h, axis=1)
    increments = h * source[:, 0]
    left_values = np.concatenate(([0.0], np.cumsum(increments)[:-1]))
    e_modal[:, 0] += left_values
    e_modal[:, 0] -= np.mean(e_modal[:, 0])

    phi_modal = npleg.legint(e_modal, m=1, lbnd=-1, scl=0.5 * h, axis=1)
    phi_left = np.concatenate(([0.0], np.cumsum(h * e_modal[:, 0])[:-1]))
    phi_modal[:, 0] += phi_left
    phi_modal[:, 0] -= np.mean(phi_modal[:, 0])

    e_nodal = e_modal @ legendre_vandermonde(basis.nodes, k + 1).T
    e_mean = float(np.mean(e_modal[:, 0]))
    return FieldState(e_modal, phi_modal, e_nodal, e_mean, h)


def electric_energy(field, x_grid, basis):
    """``0.5 * int E^2 dx``, exact for the degree-(k+1) field."""
    nodes, weights = gauss_legendre_rule(basis.degree + 2)
    e_values = field.e_modal @ legendre_vandermonde(nodes, field.e_modal.shape[1] - 1).T
    return 0.25 * x_grid.cell_width * float(np.sum((e_values**2) @ weights))
