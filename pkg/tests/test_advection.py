import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vlasov_sldg.advection import (
    LineTranslator,
    apply_sldg_translation,
    apply_spline_translation,
    build_periodic_spline,
    build_translation_stencil,
    limit_positivity,
    limit_positivity_lines,
    solve_cyclic_tridiagonal,
    split_shift,
    translate_lines_spline,
)
from vlasov_sldg.errors import InvalidArgumentError
from vlasov_sldg.mesh_basis import build_basis, gauss_legendre_rule, legendre_vandermonde


# --- independent oracle: pointwise evaluation + dense projection -------------


def eval_line(line, h, xi):
    """Point values of a periodic piecewise polynomial given by nodal values."""
    n_cells, n_nodes = line.shape
    nodes, _ = gauss_legendre_rule(n_nodes)
    coeffs = np.linalg.solve(legendre_vandermonde(nodes, n_nodes - 1), line.T).T
    y = np.mod(xi, n_cells * h)
    cell = np.minimum((y // h).astype(int), n_cells - 1)
    ref = 2.0 * (y - cell * h) / h - 1.0
    return np.einsum("...j,...j->...", legendre_vandermonde(ref, n_nodes - 1), coeffs[cell])


def project_translated(line, h, shift, n_quad=10):
    """L2 projection of u(xi - shift) onto the same dG space, with a
    10-point Gauss rule on each side of the interior discontinuity."""
    n_cells, n_nodes = line.shape
    k = n_nodes - 1
    q, w = gauss_legendre_rule(n_quad)
    frac = shift / h - np.floor(shift / h)
    pieces = [(-1.0, 2 * frac - 1.0), (2 * frac - 1.0, 1.0)]
    nodes, _ = gauss_legendre_rule(n_nodes)
    out = np.zeros_like(line)
    for i in range(n_cells):
        modal = np.zeros(n_nodes)
        for a, b in pieces:
            if b <= a:
                continue
            s = 0.5 * (a + b) + 0.5 * (b - a) * q
            xi = i * h + 0.5 * h * (s + 1.0)
            vals = eval_line(line, h, xi - shift)
            modal += 0.5 * (b - a) * (legendre_vandermonde(s, k).T @ (w * vals))
        modal *= (2 * np.arange(n_nodes) + 1) / 2.0
        out[i] = legendre_vandermonde(nodes, k) @ modal
    return out


def sample_line(func, n_cells, h, basis):
    xi = h * (np.arange(n_cells)[:, None] + 0.5 * (basis.nodes[None, :] + 1.0))
    return func(xi)


def line_mass(line, basis):
    return float(np.sum(line @ basis.weights))


def line_l2sq(line, basis):
    return float(np.sum(line**2 @ basis.weights))


# --- stencil -----------------------------------------------------------------


def test_split_shift_negative_and_rounding():
    m, a = split_shift(np.array([-0.25, -1e-17, 2.0, 3.5]), 1.0)
    assert m.tolist() == [-1, 0, 2, 3]
    np.testing.assert_allclose(a, [0.75, 0.0, 0.0, 0.5])
    assert np.all((a >= 0) & (a < 1))


def test_stencil_zero_shift():
    s = build_translation_stencil(0.0, 0.5, build_basis(3))
    assert s.cell_offset == 0 and s.frac == 0.0
    assert np.all(s.left_matrix == 0)
    np.testing.assert_array_equal(s.right_matrix, np.eye(4))


def test_stencil_whole_cell_shift():
    s = build_translation_stencil(0.5, 0.5, build_basis(2))
    assert s.cell_offset == 1 and s.frac == 0.0
    assert np.all(s.left_matrix == 0)
    np.testing.assert_array_equal(s.right_matrix, np.eye(3))


def test_stencil_piecewise_constant_quarter_shift():
    # a translated indicator overlaps the target cell by 3/4 (own cell) and 1/4 (left cell)
    s = build_translation_stencil(0.25, 1.0, build_basis(0))
    assert s.cell_offset == 0
    np.testing.assert_allclose(s.left_matrix, [[0.25]], atol=1e-15)
    np.testing.assert_allclose(s.right_matrix, [[0.75]], atol=1e-15)


@pytest.mark.parametrize("shift,h", [(np.nan, 1.0), (np.inf, 1.0), (0.1, 0.0), (0.1, -1.0)])
def test_stencil_bad_arguments(shift, h):
    with pytest.raises(InvalidArgumentError):
        build_translation_stencil(shift, h, build_basis(1))


@settings(max_examples=60, deadline=None)
@given(k=st.integers(0, 9), shift=st.floats(-50, 50, allow_nan=False))
def test_stencil_constant_and_mass_rows(k, shift):
    s = build_translation_stencil(shift, 0.7, build_basis(k))
    total = s.left_matrix + s.right_matrix
    e0 = np.zeros(k + 1)
    e0[0] = 1.0
    np.testing.assert_allclose(total @ e0, e0, atol=1e-13)
    np.testing.assert_allclose(total[0], e0, atol=1e-13)


# --- sLdG line translation ---------------------------------------------------


def test_constant_line_unchanged():
    basis = build_basis(3)
    line = np.full((12, 4), 1.7)
    for shift in (0.013, -3.3, 77.1):
        out = apply_sldg_translation(line, build_translation_stencil(shift, 0.4, basis))
        np.testing.assert_allclose(out, line, rtol=0, atol=1e-13)


def test_whole_cell_shift_is_relabeling(rng):
    basis = build_basis(2)
    line = rng.standard_normal((10, 3))
    out = apply_sldg_translation(line, build_translation_stencil(0.3, 0.3, basis))
    np.testing.assert_allclose(out, np.roll(line, 1, axis=0), rtol=0, atol=1e-14)


def test_dimension_mismatch():
    stencil = build_translation_stencil(0.1, 1.0, build_basis(2))
    with pytest.raises(InvalidArgumentError):
        apply_sldg_translation(np.zeros((8, 4)), stencil)
    with pytest.raises(InvalidArgumentError):
        LineTranslator([0.1, 0.2], 1.0, build_basis(2)).apply(np.zeros((3, 8, 3)))


def test_sine_against_dense_projection():
    n, length = 64, 1.0
    h = length / n
    basis = build_basis(2)
    line = sample_line(lambda x: np.sin(2 * np.pi * x / length), n, h, basis)
    shift = 0.3 * h
    out = apply_sldg_translation(line, build_translation_stencil(shift, h, basis))
    oracle = project_translated(line, h, shift)
    assert np.abs(out - oracle).max() <= 1e-10


@pytest.mark.parametrize("k", [0, 1, 3, 5])
def test_large_random_shift_against_dense_projection(k, rng):
    n, h = 9, 0.37
    basis = build_basis(k)
    line = rng.standard_normal((n, k + 1))
    shift = rng.uniform(-30, 30)
    out = apply_sldg_translation(line, build_translation_stencil(shift, h, basis))
    np.testing.assert_allclose(out, project_translated(line, h, shift), rtol=0, atol=1e-12)


def test_batched_translator_matches_single_lines(rng):
    basis = build_basis(3)
    lines = rng.standard_normal((6, 11, 4))
    shifts = rng.uniform(-5, 5, 6)
    batched = LineTranslator(shifts, 0.2, basis).apply(lines)
    for i in range(6):
        single = apply_sldg_translation(lines[i], build_translation_stencil(shifts[i], 0.2, basis))
        np.testing.assert_allclose(batched[i], single, rtol=0, atol=1e-13)


@pytest.mark.parametrize("ratio", [1.5, 10.0, 123.4, 999.9, -1000.0])
def test_no_cfl_restriction(ratio, rng):
    basis = build_basis(2)
    h = 0.1
    line = rng.uniform(0, 1, (16, 3))
    out = apply_sldg_translation(line, build_translation_stencil(ratio * h, h, basis))
    assert np.all(np.isfinite(out))
    m0 = line_mass(line, basis)
    assert abs(line_mass(out, basis) - m0) <= 1e-12 * abs(m0)
    assert line_l2sq(out, basis) <= line_l2sq(line, basis) * (1 + 1e-12)


@settings(max_examples=80, deadline=None)
@given(k=st.integers(0, 6), n=st.integers(2, 20), shift=st.floats(-100, 100, allow_nan=False),
       seed=st.integers(0, 2**32 - 1))
def test_l2_contraction_and_mass(k, n, shift, seed):
    basis = build_basis(k)
    line = np.random.default_rng(seed).standard_normal((n, k + 1))
    out = apply_sldg_translation(line, build_translation_stencil(shift, 0.25, basis))
    before, after = line_l2sq(line, basis), line_l2sq(out, basis)
    assert after <= before * (1 + 1e-12)
    scale = float(np.sum(np.abs(line) @ basis.weights))
    assert abs(line_mass(out, basis) - line_mass(line, basis)) <= 1e-12 * scale


def test_composition_consistency():
    n, length = 32, 2 * np.pi
    h = length / n
    basis = build_basis(2)
    line = sample_line(np.sin, n, h, basis)
    d1 = 2.37 * h
    d2 = 3 * h - d1
    two_steps = apply_sldg_translation(
        apply_sldg_translation(line, build_translation_stencil(d1, h, basis)),
        build_translation_stencil(d2, h, basis),
    )
    oracle = project_translated(project_translated(line, h, d1), h, d2)
    np.testing.assert_allclose(two_steps, oracle, rtol=0, atol=1e-12)
    relabeled = np.roll(line, 3, axis=0)
    # two projections of a degree-2 profile: O(h^3) deviation from the relabeling
    assert np.abs(two_steps - relabeled).max() <= 5 * h**3


# --- cyclic tridiagonal and splines -----------------------------------------


def test_cyclic_tridiagonal_against_dense(rng):
    n = 9
    a, b, c = rng.uniform(0.5, 1, n), rng.uniform(3, 4, n), rng.uniform(0.5, 1, n)
    dense = np.diag(b) + np.diag(a[1:], -1) + np.diag(c[:-1], 1)
    dense[0, -1] = a[0]
    dense[-1, 0] = c[-1]
    rhs = rng.standard_normal((n, 3))
    np.testing.assert_allclose(solve_cyclic_tridiagonal(a, b, c, rhs), np.linalg.solve(dense, rhs), atol=1e-13)


def test_spline_constant():
    s = build_periodic_spline(np.full(10, 3.0))
    np.testing.assert_allclose(s(np.linspace(0, 10, 37)), 3.0, atol=1e-14)


def test_spline_interpolates_samples():
    n = 64
    y = np.sin(2 * np.pi * np.arange(n) / n)
    s = build_periodic_spline(y)
    assert np.abs(s(np.arange(n)) - y).max() <= 1e-12


def test_spline_fourth_order_midpoints():
    errs = []
    for n in (32, 64):
        y = np.sin(2 * np.pi * np.arange(n) / n)
        mid = np.arange(n) + 0.5
        errs.append(np.abs(build_periodic_spline(y)(mid) - np.sin(2 * np.pi * mid / n)).max())
    assert 12.0 <= errs[0] / errs[1] <= 20.0


def test_spline_is_c2():
    rng = np.random.default_rng(3)
    s = build_periodic_spline(rng.standard_normal(12))
    eps = 1e-5
    for knot in (3.0, 11.0):
        left = s(np.array([knot - 2 * eps, knot - eps, knot]))
        right = s(np.array([knot, knot + eps, knot + 2 * eps]))
        d2_left = (left[0] - 2 * left[1] + left[2]) / eps**2
        d2_right = (right[0] - 2 * right[1] + right[2]) / eps**2
        assert abs(d2_left - d2_right) <= 1e-3 * max(1.0, abs(d2_left))


@pytest.mark.parametrize("n", [0, 3])
def test_spline_too_few_samples(n):
    with pytest.raises(InvalidArgumentError):
        build_periodic_spline(np.ones(n))
    with pytest.raises(InvalidArgumentError):
        apply_spline_translation(np.ones(n), 0.1, 1.0)


def test_spline_translation_identity_and_shift(rng):
    y = rng.standard_normal(20)
    np.testing.assert_allclose(apply_spline_translation(y, 0.0, 0.5), y, atol=1e-14)
    np.testing.assert_allclose(apply_spline_translation(y, 0.5, 0.5), np.roll(y, 1), atol=1e-14)


def test_spline_translation_order():
    errs = []
    for n in (32, 64):
        h = 2 * np.pi / n
        x = h * np.arange(n)
        out = apply_spline_translation(np.sin(x), 0.5 * h, h)
        errs.append(np.abs(out - np.sin(x - 0.5 * h)).max())
    assert abs(np.log2(errs[0] / errs[1]) - 4.0) <= 0.3


@settings(max_examples=50, deadline=None)
@given(n=st.integers(4, 40), shift=st.floats(-200, 200, allow_nan=False), seed=st.integers(0, 2**32 - 1))
def test_spline_translation_preserves_sum(n, shift, seed):
    y = np.random.default_rng(seed).uniform(0, 1, n)
    out = apply_spline_translation(y, shift, 0.3)
    assert abs(out.sum() - y.sum()) <= 1e-12 * abs(y.sum())


def test_batched_spline_matches_single(rng):
    lines = rng.standard_normal((4, 16))
    shifts = rng.uniform(-3, 3, 4)
    batched = translate_lines_spline(lines, shifts, 0.25)
    for i in range(4):
        np.testing.assert_allclose(batched[i], apply_spline_translation(lines[i], shifts[i], 0.25), atol=1e-14)


# --- limiter -----------------------------------------------------------------


def test_limiter_leaves_nonnegative_cell():
    vals = np.array([0.0, 0.2, 1.0])
    out, flagged = limit_positivity(vals, 0.4)
    np.testing.assert_array_equal(out, vals)
    assert not flagged


def test_limiter_scaling():
    basis = build_basis(2)
    vals = np.array([-0.1, 0.5, 0.5])
    avg = 0.5 * basis.weights @ vals
    out, flagged = limit_positivity(vals, avg)
    theta = avg / (avg - (-0.1))
    np.testing.assert_allclose(out, avg + theta * (vals - avg), rtol=1e-15)
    assert out.min() >= -1e-14
    assert abs(0.5 * basis.weights @ out - avg) <= 1e-13
    assert not flagged


def test_limiter_negative_average_clamps():
    out, flagged = limit_positivity(np.full(3, -0.2), -0.2)
    assert flagged
    np.testing.assert_array_equal(out, np.zeros(3))


def test_limiter_lines_counts_and_preserves_average(rng):
    basis = build_basis(3)
    lines = rng.uniform(-0.2, 1.0, (5, 7, 4))
    lines[0, 0] = -1.0
    out, clamped = limit_positivity_lines(lines, basis.weights)
    assert clamped == 1
    avg_in = 0.5 * lines @ basis.weights
    avg_out = 0.5 * out @ basis.weights
    keep = avg_in >= 0
    np.testing.assert_allclose(avg_out[keep], avg_in[keep], atol=1e-14)
    assert out.min() >= -1e-14


def test_presweep_limiting_keeps_averages_nonnegative(rng):
    basis = build_basis(2)
    # nonnegative at the nodes of cell 5 but negative on (-0.77, 0)
    line = np.zeros((12, 3))
    line[5] = [0.0, 0.0, 1.0]
    shifts = np.array([0.6 * 0.5])
    translator = LineTranslator(shifts, 0.5, basis)
    raw = translator.apply(line[None])
    pre, _ = limit_positivity_lines(line[None], basis.weights, translator.samplers)
    limited = translator.apply(pre)
    assert (0.5 * limited @ basis.weights).min() >= -1e-15
    assert abs(line_mass(limited[0], basis) - line_mass(line, basis)) <= 1e-14
    assert (0.5 * raw @ basis.weights).min() < 0
