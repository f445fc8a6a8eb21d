"""Fast invariant checks behind ``vlasov check`` (a few seconds in total)."""

from __future__ import annotations

import numpy as np

from .advection import LineTranslator, translate_lines_spline
from .config import RunConfig
from .diagnostics import compute_invariants
from .fields import compute_density, solve_poisson
from .integrator import StepConfig, Stepper
from .mesh_basis import PeriodicGrid1D, build_basis, gauss_legendre_rule
from .runner import build_initial


def _quadrature():
    worst = 0.0
    for n in range(1, 11):
        x, w = gauss_legendre_rule(n)
        for p in range(2 * n):
            exact = 0.0 if p % 2 else 2.0 / (p + 1)
            worst = max(worst, abs(w @ x**p - exact))
    return worst <= 1e-13, f"max monomial error {worst:.2e}"


def _round_trip():
    rng = np.random.default_rng(0)
    worst = 0.0
    for k in range(10):
        b = build_basis(k)
        u = rng.standard_normal(k + 1)
        worst = max(worst, np.abs(b.to_nodal(b.to_modal(u)) - u).max())
    return worst <= 1e-12, f"max round-trip error {worst:.2e}"


def _translation():
    rng = np.random.default_rng(1)
    basis = build_basis(2)
    lines = rng.standard_normal((16, 24, 3))
    shifts = rng.uniform(-500.0, 500.0, 16)
    out = LineTranslator(shifts, 0.5, basis).apply(lines)
    w = basis.weights
    mass = np.abs((out @ w).sum(axis=1) - (lines @ w).sum(axis=1))
    l2_in = (lines**2 @ w).sum(axis=1)
    l2_out = (out**2 @ w).sum(axis=1)
    ok = mass.max() <= 1e-11 and np.all(l2_out <= l2_in * (1 + 1e-12))
    return ok, f"mass drift {mass.max():.2e}, L2 ratio max {np.max(l2_out / l2_in):.15f}"


def _spline_mass():
    rng = np.random.default_rng(2)
    lines = rng.standard_normal((8, 32))
    out = translate_lines_spline(lines, rng.uniform(-40, 40, 8), 0.3)
    drift = np.abs(out.sum(axis=1) - lines.sum(axis=1)).max() / np.abs(lines).sum(axis=1).max()
    return drift <= 1e-12, f"relative sum drift {drift:.2e}"


def _poisson():
    grid = PeriodicGrid1D(32, 4 * np.pi)
    basis = build_basis(2)
    x = grid.node_coordinates(basis)
    eps, kx = 0.01, 0.5

    class Rho:
        values = 1.0 + eps * np.cos(kx * x)

    field = solve_poisson(Rho, grid, basis)
    err = np.abs(field.e_nodal - eps / kx * np.sin(kx * x)).max() / eps
    return err <= 1e-4, f"relative nodal field error {err:.2e}"


def _uniform_fixed_point():
    cfg = RunConfig(scenario="uniform", order=3, dof_per_dim=30)
    scenario, f = build_initial(cfg)
    stepper = Stepper(f.grid, StepConfig(0.1))
    g = f
    for _ in range(10):
        g, _ = stepper.step(g)
    err = np.abs(g.values - f.values).max()
    return err <= 1e-12, f"max change over 10 steps {err:.2e}"


def _landau_step():
    cfg = RunConfig(scenario="landau_weak", order=3, dof_per_dim=48)
    scenario, f = build_initial(cfg)
    before = compute_invariants(f)
    g, field = Stepper(f.grid, StepConfig(0.1)).step(f)
    after = compute_invariants(g, solve_poisson(compute_density(g), g.grid.x_grid, g.grid.basis))
    dm = abs(after.mass - before.mass) / before.mass
    return dm <= 1e-12, f"relative mass change {dm:.2e}"


CHECKS = (
    ("gauss quadrature exactness", _quadrature),
    ("modal/nodal round trip", _round_trip),
    ("sLdG mass and L2 contraction", _translation),
    ("spline translation mass", _spline_mass),
    ("Poisson solve on cosine density", _poisson),
    ("uniform Maxwellian fixed point", _uniform_fixed_point),
    ("Landau step mass conservation", _landau_step),
)


def run_checks():
    """Yield ``(name, passed, detail)`` for every check."""
    for name, check in CHECKS:
        try:
            ok, detail = check()
        except Exception as exc:  # report, don't abort the remaining checks
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        yield name, bool(ok), detail
