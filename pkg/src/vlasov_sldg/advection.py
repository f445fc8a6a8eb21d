"""One-dimensional semi-Lagrangian translation kernels.

All kernels solve ``u_t = a u_xi`` over one step by exact translation of the
profile by a shift ``delta``: ``u_new(xi) = u_old(xi - delta)``.  The sLdG
kernel translates the piecewise polynomial and projects it back onto the dG
space; every output cell reads at most two adjacent input cells.  The spline
kernel interpolates uniform periodic samples with a cyclic cubic spline.

Lines are arrays shaped ``(n_lines, n_cells, k + 1)`` of nodal values
(sLdG) or ``(n_lines, n_points)`` of samples (spline); each line carries its
own shift so a whole sweep is a single vectorized call.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError
from .mesh_basis import DgBasis, legendre_vandermonde


def split_shift(shift, width):
    """Decompose ``shift / width`` into integer cell offset and fraction in [0, 1)."""
    ratio = np.asarray(shift, dtype=float) / width
    offset = np.floor(ratio)
    frac = ratio - offset
    # ratio slightly below an integer can round frac up to exactly 1.0
    wrap = frac >= 1.0
    offset = np.where(wrap, offset + 1.0, offset)
    frac = np.where(wrap, 0.0, frac)
    return offset.astype(np.int64), frac


def _overlap_matrices(frac, basis):
    """Modal matrices (A, B) for each fractional shift in ``frac``.

    Output cell ``i`` overlaps the right part of input cell ``i-m-1`` (length
    ``frac*h``, matrix A) and the left part of cell ``i-m`` (matrix B).  In
    reference coordinates ``s`` of the output cell the integrands are
    polynomials of degree ``2k``; ``k+1`` Gauss points per piece are exact.
    """
    frac = np.atleast_1d(np.asarray(frac, dtype=float))
    k = basis.degree
    g, w = basis.nodes, basis.weights
    scale = (2.0 * np.arange(k + 1) + 1.0) / 2.0

    s_right = frac[:, None] + (1.0 - frac[:, None]) * g[None, :]
    s_left = (frac[:, None] - 1.0) + frac[:, None] * g[None, :]
    jac_right = 1.0 - frac
    jac_left = frac

    p_out_r = legendre_vandermonde(s_right, k)
    p_in_r = legendre_vandermonde(s_right - 2.0 * frac[:, None], k)
    p_out_l = legendre_vandermonde(s_left, k)
    p_in_l = legendre_vandermonde(s_left - 2.0 * frac[:, None] + 2.0, k)

    right = np.einsum("q,nqj,nql->njl", w, p_out_r, p_in_r) * (scale[None, :, None] * jac_right[:, None, None])
    left = np.einsum("q,nqj,nql->njl", w, p_out_l, p_in_l) * (scale[None, :, None] * jac_left[:, None, None])

    exact = frac == 0.0
    if exact.any():
        left[exact] = 0.0
        right[exact] = np.eye(k + 1)
    return left, right


def _source_points(frac, basis):
    """Reference points of the source cell sampled by the overlap quadrature.

    Shape ``(n, 2(k+1))``: the right-piece points (feeding matrix B) followed
    by the left-piece points (feeding A of the next output cell).
    """
    frac = np.atleast_1d(np.asarray(frac, dtype=float))
    g = basis.nodes[None, :]
    r_right = frac[:, None] + (1.0 - frac[:, None]) * g - 2.0 * frac[:, None]
    r_left = (frac[:, None] - 1.0) + frac[:, None] * g - 2.0 * frac[:, None] + 2.0
    return np.concatenate([r_right, r_left], axis=1)


@dataclass(frozen=True, eq=False)
class TranslationStencil:
    """Two-cell modal update for one shift: ``c_new[i] = A c[i-m-1] + B c[i-m]``."""

    cell_offset: int
    frac: float
    left_matrix: np.ndarray
    right_matrix: np.ndarray
    basis: DgBasis

    def nodal_matrices(self):
        b = self.basis
        return (
            b.modal_to_nodal @ self.left_matrix @ b.nodal_to_modal,
            b.modal_to_nodal @ self.right_matrix @ b.nodal_to_modal,
        )


def build_translation_stencil(shift, cell_width, basis):
    if not np.isfinite(cell_width) or cell_width <= 0:
        raise InvalidArgumentError(f"cell width must be positive, got {cell_width!r}")
    if not np.isfinite(shift):
        raise InvalidArgumentError(f"shift must be finite, got {shift!r}")
    offset, frac = split_shift(shift, cell_width)
    left, right = _overlap_matrices(frac, basis)
    return TranslationStencil(int(offset), float(frac), left[0], right[0], basis)


class LineTranslator:
    """Precomputed sLdG stencils for a batch of lines with per-line shifts.

    Nodal-space matrices are formed once, so repeated application (the
    x-advection half steps share their shifts) is two batched matmuls.
    """

    def __init__(self, shifts, cell_width, basis):
        shifts = np.atleast_1d(np.asarray(shifts, dtype=float))
        if not np.isfinite(cell_width) or cell_width <= 0:
            raise InvalidArgumentError(f"cell width must be positive, got {cell_width!r}")
        if not np.all(np.isfinite(shifts)):
            raise InvalidArgumentError("shifts must be finite")
        self.basis = basis
        self.offsets, self.fracs = split_shift(shifts, cell_width)
        left, right = _overlap_matrices(self.fracs, basis)
        m2n, n2m = basis.modal_to_nodal, basis.nodal_to_modal
        self.left = m2n @ left @ n2m
        self.right = m2n @ right @ n2m
        self._cell_width = cell_width
        self._samplers = None

    @property
    def samplers(self):
        """Per-line matrices mapping nodal values to the points the stencil reads."""
        if self._samplers is None:
            pts = _source_points(self.fracs, self.basis)
            self._samplers = legendre_vandermonde(pts, self.basis.degree) @ self.basis.nodal_to_modal
        return self._samplers

    def __len__(self):
        return len(self.offsets)

    def apply(self, lines):
        lines = np.asarray(lines, dtype=float)
        n_lines, n_cells, n_nodes = lines.shape
        if n_lines != len(self) or n_nodes != self.basis.n_nodes:
            raise InvalidArgumentError(
                f"line batch {lines.shape} does not match {len(self)} stencils of {self.basis.n_nodes} nodes"
            )
        cur = (np.arange(n_cells)[None, :] - self.offsets[:, None]) % n_cells
        prev = (cur - 1) % n_cells
        src_cur = np.take_along_axis(lines, cur[:, :, None], axis=1)
        src_prev = np.take_along_axis(lines, prev[:, :, None], axis=1)
        return np.einsum("lij,lcj->lci", self.right, src_cur) + np.einsum("lij,lcj->lci", self.left, src_prev)


def apply_sldg_translation(line, stencil):
    """Translate one periodic line of nodal values, shape ``(n_cells, k + 1)``."""
    line = np.asarray(line, dtype=float)
    if line.ndim != 2 or line.shape[1] != stencil.basis.n_nodes:
        raise InvalidArgumentError(
            f"line must have shape (n_cells, {stencil.basis.n_nodes}), got {line.shape}"
        )
    n_cells = line.shape[0]
    if n_cells < 2:
        raise InvalidArgumentError("a periodic line needs at least 2 cells")
    basis = stencil.basis
    coeffs = basis.to_modal(line)
    cur = np.roll(coeffs, stencil.cell_offset, axis=0)
    prev = np.roll(coeffs, stencil.cell_offset + 1, axis=0)
    new = cur @ stencil.right_matrix.T + prev @ stencil.left_matrix.T
    return basis.to_nodal(new)


def translate_lines_sldg(lines, shifts, cell_width, basis):
    return LineTranslator(shifts, cell_width, basis).apply(lines)


# --- cubic spline baseline -------------------------------------------------


def solve_cyclic_tridiagonal(lower, diag, upper, rhs):
    """Solve a periodic tridiagonal system along axis 0 of ``rhs``.

    Row ``i`` reads ``lower[i] x[i-1] + diag[i] x[i] + upper[i] x[i+1]`` with
    indices modulo ``n``.  Sherman-Morrison reduces it to two Thomas solves.
    """
    rhs = np.asarray(rhs, dtype=float)
    n = rhs.shape[0]
    a = np.broadcast_to(np.asarray(lower, dtype=float), (n,)).copy()
    b = np.broadcast_to(np.asarray(diag, dtype=float), (n,)).copy()
    c = np.broadcast_to(np.asarray(upper, dtype=float), (n,)).copy()
    if n < 3:
        raise InvalidArgumentError("cyclic tridiagonal solve needs n >= 3")

    gamma = -b[0]
    b[0] -= gamma
    b[-1] -= a[0] * c[-1] / gamma
    u = np.zeros(n)
    u[0] = gamma
    u[-1] = c[-1]

    x = _thomas(a, b, c, rhs)
    z = _thomas(a, b, c, u)
    fact = (x[0] + a[0] * x[-1] / gamma) / (1.0 + z[0] + a[0] * z[-1] / gamma)
    extra = (1,) * (rhs.ndim - 1)
    return x - z.reshape((n,) + extra) * fact


def _thomas(a, b, c, d):
    n = d.shape[0]
    cp = np.empty(n)
    dp = np.empty_like(d, dtype=float)
    cp[0] = c[0] / b[0]
    dp[0] = d[0] / b[0]
    for i in range(1, n):
        denom = b[i] - a[i] * cp[i - 1]
        cp[i] = c[i] / denom
        dp[i] = (d[i] - a[i] * dp[i - 1]) / denom
    x = np.empty_like(dp)
    x[-1] = dp[-1]
    for i in range(n - 2, -1, -1):
        x[i] = dp[i] - cp[i] * x[i + 1]
    return x


@dataclass(frozen=True, eq=False)
class SplineLine:
    """Periodic C2 cubic spline through uniform samples (unit index spacing).

    ``coefficients`` holds the spline second derivatives (moments) at the
    sample points, in index units.
    """

    samples: np.ndarray
    coefficients: np.ndarray

    @property
    def n(self):
        return self.samples.shape[-1]

    def __call__(self, position):
        """Evaluate at fractional sample positions (periodic)."""
        pos = np.asarray(position, dtype=float)
        j = np.floor(pos).astype(np.int64)
        t = pos - j
        j0 = j % self.n
        j1 = (j + 1) % self.n
        return _spline_piece(self.samples, self.coefficients, j0, j1, t)


def _spline_piece(y, moments, j0, j1, t):
    y0 = np.take(y, j0, axis=-1)
    y1 = np.take(y, j1, axis=-1)
    m0 = np.take(moments, j0, axis=-1)
    m1 = np.take(moments, j1, axis=-1)
    s = 1.0 - t
    return s * y0 + t * y1 + ((s**3 - s) * m0 + (t**3 - t) * m1) / 6.0


def _spline_moments(samples):
    """Moments for samples along the last axis."""
    y = np.moveaxis(samples, -1, 0)
    rhs = 6.0 * (np.roll(y, -1, axis=0) - 2.0 * y + np.roll(y, 1, axis=0))
    return np.moveaxis(solve_cyclic_tridiagonal(1.0, 4.0, 1.0, rhs), 0, -1)


def build_periodic_spline(samples):
    samples = np.asarray(samples, dtype=float)
    if samples.ndim != 1 or samples.shape[0] < 4:
        raise InvalidArgumentError(f"periodic spline needs at least 4 samples, got shape {samples.shape}")
    return SplineLine(samples, _spline_moments(samples))


def translate_lines_spline(lines, shifts, spacing):
    """Spline translation of each row of ``lines`` (shape ``(n_lines, n)``)."""
    lines = np.asarray(lines, dtype=float)
    n = lines.shape[-1]
    if n < 4:
        raise InvalidArgumentError(f"periodic spline needs at least 4 samples, got {n}")
    if not np.isfinite(spacing) or spacing <= 0:
        raise InvalidArgumentError(f"sample spacing must be positive, got {spacing!r}")
    shifts = np.broadcast_to(np.asarray(shifts, dtype=float), lines.shape[:-1])
    if not np.all(np.isfinite(shifts)):
        raise InvalidArgumentError("shifts must be finite")
    offset, frac = split_shift(shifts, spacing)
    moments = _spline_moments(lines)
    # foot of sample i is i - offset - frac = (i - offset - 1) + (1 - frac)
    base = np.arange(n) - offset[..., None] - 1
    j0 = base % n
    j1 = (base + 1) % n
    t = np.broadcast_to(1.0 - frac[..., None], j0.shape)
    y0 = np.take_along_axis(lines, j0, axis=-1)
    y1 = np.take_along_axis(lines, j1, axis=-1)
    m0 = np.take_along_axis(moments, j0, axis=-1)
    m1 = np.take_along_axis(moments, j1, axis=-1)
    s = 1.0 - t
    return s * y0 + t * y1 + ((s**3 - s) * m0 + (t**3 - t) * m1) / 6.0


def apply_spline_translation(samples, shift, spacing):
    samples = np.asarray(samples, dtype=float)
    if samples.ndim != 1:
        raise InvalidArgumentError("expected a 1D array of samples")
    return translate_lines_spline(samples[None, :], [shift], spacing)[0]


# --- positivity limiter ------------------------------------------------------


def limit_positivity_lines(lines, weights, samplers=None):
    """Average-preserving linear scaling limiter on every cell of ``lines``.

    ``lines`` has shape ``(n_lines, n_cells, k + 1)`` of nodal values and
    ``weights`` are the Gauss weights on [-1, 1].  With ``samplers`` (one
    ``(p, k + 1)`` matrix per line) the minimum is also taken over those
    extra points.  Cells whose average is already negative are clamped to
    zero.  Returns ``(limited, n_clamped)``.
    """
    lines = np.asarray(lines, dtype=float)
    avg = 0.5 * (lines @ weights)
    low = lines.min(axis=-1)
    if samplers is not None:
        low = np.minimum(low, np.einsum("lpj,lcj->lcp", samplers, lines).min(axis=-1))
    needs = low < 0.0
    if not needs.any():
        return lines, 0
    clamp = avg < 0.0
    scale_cells = needs & ~clamp
    out = lines.copy()
    if scale_cells.any():
        m = avg[scale_cells]
        theta = np.minimum(1.0, m / (m - low[scale_cells]))
        out[scale_cells] = m[:, None] + theta[:, None] * (lines[scale_cells] - m[:, None])
    out[clamp] = 0.0
    return out, int(np.count_nonzero(clamp))


def limit_positivity(cell_values, cell_average):
    """Limit a single cell given its quadrature average.

    Returns the limited nodal values and whether the cell had to be clamped
    (negative average).
    """
    values = np.asarray(cell_values, dtype=float)
    if cell_average < 0.0:
        return np.zeros_like(values), True
    low = values.min()
    if low >= 0.0:
        return values.copy(), False
    theta = min(1.0, cell_average / (cell_average - low))
    return cell_average + theta * (values - cell_average), False
