"""Semi-Lagrangian discontinuous Galerkin solver for 1x+1v Vlasov-Poisson."""

from .advection import (
    LineTranslator,
    SplineLine,
    TranslationStencil,
    apply_sldg_translation,
    apply_spline_translation,
    build_periodic_spline,
    build_translation_stencil,
    limit_positivity,
)
from .config import RunConfig, parse_config
from .diagnostics import InvariantRecord, compute_invariants, fit_exponential_rate, relative_error_series
from .fields import FieldState, compute_density, electric_energy, solve_poisson
from .integrator import StepConfig, Stepper, advect_v, advect_x, run, strang_step
from .mesh_basis import (
    DgBasis,
    DistributionFunction,
    PeriodicGrid1D,
    PhaseSpaceGrid,
    VelocityGrid,
    build_basis,
    evaluate,
    gauss_legendre_rule,
    make_phase_space_grid,
    sample_initial_condition,
)
from .scenarios import Scenario, make_scenario

__version__ = "0.1.0"
