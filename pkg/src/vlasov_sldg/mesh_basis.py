"""Grids, Legendre bases and the nodal phase-space representation.

The distribution function is stored nodally: ``values[ix, iv, a, b]`` is f at
x-node ``a`` of x-cell ``ix`` and v-node ``b`` of v-cell ``iv``, with nodes the
Gauss-Legendre points of each cell.  Modal coefficients use Legendre
polynomials normalized so that ``P_j(1) = 1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import legendre as npleg

from .errors import InvalidArgumentError, OutOfDomainError

MAX_QUADRATURE_POINTS = 16
MAX_DEGREE = 9


def gauss_legendre_rule(n):
    """Return the ``n``-point Gauss-Legendre nodes and weights on [-1, 1]."""
    if not isinstance(n, (int, np.integer)) or not 1 <= n <= MAX_QUADRATURE_POINTS:
        raise InvalidArgumentError(
            f"quadrature size must be an integer in [1, {MAX_QUADRATURE_POINTS}], got {n!r}"
        )
    nodes, weights = npleg.leggauss(int(n))
    return nodes, weights


def legendre_vandermonde(points, degree):
    """Matrix ``V[i, j] = P_j(points[i])`` for ``j <= degree``."""
    return npleg.legvander(np.asarray(points, dtype=float), degree)


@dataclass(frozen=True, eq=False)
class DgBasis:
    degree: int
    nodes: np.ndarray
    weights: np.ndarray
    nodal_to_modal: np.ndarray
    modal_to_nodal: np.ndarray

    @property
    def n_nodes(self):
        return self.degree + 1

    def to_modal(self, values, axis=-1):
        """Nodal -> modal along ``axis``."""
        values = np.moveaxis(values, axis, -1)
        return np.moveaxis(values @ self.nodal_to_modal.T, -1, axis)

    def to_nodal(self, coeffs, axis=-1):
        coeffs = np.moveaxis(coeffs, axis, -1)
        return np.moveaxis(coeffs @ self.modal_to_nodal.T, -1, axis)


def build_basis(k):
    """Gauss-Legendre nodal basis of polynomial degree ``k`` (order ``k + 1``)."""
    if not isinstance(k, (int, np.integer)) or not 0 <= k <= MAX_DEGREE:
        raise InvalidArgumentError(f"basis degree must be an integer in [0, {MAX_DEGREE}], got {k!r}")
    k = int(k)
    nodes, weights = gauss_legendre_rule(k + 1)
    vander = legendre_vandermonde(nodes, k)
    # Discrete orthogonality of the Gauss rule gives the inverse in closed form.
    scale = (2.0 * np.arange(k + 1) + 1.0) / 2.0
    inverse = scale[:, None] * vander.T * weights[None, :]
    return DgBasis(k, nodes, weights, inverse, vander)


class _UniformCells:
    """Shared geometry for uniform 1D cell partitions."""

    n_cells: int
    length: float
    origin: float

    @property
    def cell_width(self):
        return self.length / self.n_cells

    @property
    def edges(self):
        return self.origin + self.cell_width * np.arange(self.n_cells + 1)

    @property
    def centers(self):
        return self.origin + self.cell_width * (np.arange(self.n_cells) + 0.5)

    def node_coordinates(self, basis):
        """Physical node positions, shape ``(n_cells, k + 1)``."""
        left = self.edges[:-1]
        return left[:, None] + 0.5 * self.cell_width * (basis.nodes[None, :] + 1.0)

    def _validate(self):
        if not isinstance(self.n_cells, (int, np.integer)) or self.n_cells < 2:
            raise InvalidArgumentError(f"need at least 2 cells, got {self.n_cells!r}")
        if not np.isfinite(self.length) or self.length <= 0:
            raise InvalidArgumentError(f"domain length must be positive, got {self.length!r}")
        if not np.isfinite(self.origin):
            raise InvalidArgumentError("grid origin must be finite")


@dataclass(frozen=True)
class PeriodicGrid1D(_UniformCells):
    n_cells: int
    length: float
    origin: float = 0.0

    def __post_init__(self):
        self._validate()

    def locate(self, x):
        """Cell index and reference coordinate of ``x`` after periodic wrap."""
        h = self.cell_width
        y = np.mod(np.asarray(x, dtype=float) - self.origin, self.length)
        idx = np.minimum(np.floor(y / h).astype(int), self.n_cells - 1)
        ref = 2.0 * (y - idx * h) / h - 1.0
        return idx, ref


@dataclass(frozen=True)
class VelocityGrid(_UniformCells):
    """Bounded velocity interval ``[v_min, v_max]`` cut into uniform cells."""

    n_cells: int
    v_min: float
    v_max: float

    def __post_init__(self):
        if not (self.v_min < 0.0 < self.v_max):
            raise InvalidArgumentError(
                f"velocity domain must straddle zero, got [{self.v_min}, {self.v_max}]"
            )
        self._validate()

    @property
    def length(self):
        return self.v_max - self.v_min

    @property
    def origin(self):
        return self.v_min

    def locate(self, v):
        v = np.asarray(v, dtype=float)
        if np.any((v < self.v_min) | (v > self.v_max)):
            raise OutOfDomainError(f"velocity outside [{self.v_min}, {self.v_max}]")
        h = self.cell_width
        y = v - self.v_min
        idx = np.minimum(np.floor(y / h).astype(int), self.n_cells - 1)
        ref = 2.0 * (y - idx * h) / h - 1.0
        return idx, ref


@dataclass(frozen=True)
class PhaseSpaceGrid:
    x_grid: PeriodicGrid1D
    v_grid: VelocityGrid
    basis: DgBasis

    @property
    def shape(self):
        n = self.basis.n_nodes
        return (self.x_grid.n_cells, self.v_grid.n_cells, n, n)

    @property
    def dof_per_dim(self):
        return (self.x_grid.n_cells * self.basis.n_nodes, self.v_grid.n_cells * self.basis.n_nodes)

    def x_nodes(self):
        return self.x_grid.node_coordinates(self.basis)

    def v_nodes(self):
        return self.v_grid.node_coordinates(self.basis)

    def mesh(self):
        """Node coordinates broadcast to the 4-index layout of ``values``."""
        x = self.x_nodes()[:, None, :, None]
        v = self.v_nodes()[None, :, None, :]
        return np.broadcast_to(x, self.shape), np.broadcast_to(v, self.shape)

    def quadrature_weights(self):
        """Tensor weights including Jacobians: sum(w * f) integrates f."""
        w = self.basis.weights
        hx, hv = self.x_grid.cell_width, self.v_grid.cell_width
        return 0.25 * hx * hv * w[:, None] * w[None, :]


def make_phase_space_grid(n_x_cells, length, n_v_cells, v_max, degree, v_min=None):
    basis = build_basis(degree)
    v_min = -v_max if v_min is None else v_min
    return PhaseSpaceGrid(PeriodicGrid1D(n_x_cells, length), VelocityGrid(n_v_cells, v_min, v_max), basis)


@dataclass(eq=False)
class DistributionFunction:
    values: np.ndarray
    grid: PhaseSpaceGrid = field(repr=False)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != self.grid.shape:
            raise InvalidArgumentError(
                f"values shape {self.values.shape} does not match grid {self.grid.shape}"
            )

    def copy(self):
        return DistributionFunction(self.values.copy(), self.grid)

    def with_values(self, values):
        return DistributionFunction(values, self.grid)

    def modal(self):
        """Tensor Legendre coefficients, same 4-index layout."""
        basis = self.grid.basis
        return basis.to_modal(basis.to_modal(self.values, axis=2), axis=3)

    def cell_averages(self):
        """Cell means, shape ``(n_x_cells, n_v_cells)``."""
        return self.modal()[:, :, 0, 0]

    def is_finite(self):
        return bool(np.all(np.isfinite(self.values)))


def sample_initial_condition(f0, grid):
    """Evaluate ``f0(x, v)`` at every tensor Gauss point of ``grid``."""
    x, v = grid.mesh()
    try:
        values = np.asarray(f0(x, v), dtype=float)
        if values.shape != grid.shape:
            values = np.broadcast_to(values, grid.shape).astype(float)
    except (TypeError, ValueError):
        values = np.vectorize(lambda a, b: float(f0(a, b)))(x, v)
    bad = ~np.isfinite(values)
    if bad.any():
        where = np.argwhere(bad)[0]
        ix, iv, a, b = (int(i) for i in where)
        raise InvalidArgumentError(
            f"initial condition is not finite at x={x[ix, iv, a, b]:.6g}, v={v[ix, iv, a, b]:.6g} "
            f"(cell ({ix}, {iv}), node ({a}, {b}))"
        )
    return DistributionFunction(np.array(values, dtype=float), grid)


def evaluate(f, x, v):
    """Point value of the piecewise tensor polynomial ``f`` at ``(x, v)``.

    Accepts scalars or equally shaped arrays; ``x`` wraps periodically.
    """
    grid = f.grid
    scalar = np.ndim(x) == 0 and np.ndim(v) == 0
    x, v = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(v, dtype=float))
    ix, rx = grid.x_grid.locate(x)
    iv, rv = grid.v_grid.locate(v)
    k = grid.basis.degree
    coeffs = f.modal()[ix, iv]  # (..., k+1, k+1)
    px = legendre_vandermonde(rx, k)
    pv = legendre_vandermonde(rv, k)
    out = np.einsum("...a,...ab,...b->...", px, coeffs, pv)
    return float(np.ravel(out)[0]) if scalar else out
