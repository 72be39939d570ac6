"""Exact solution space of the 1D Dirac equation with a square-well potential."""
from .basis import (
    Arrow,
    BasisKind,
    Character,
    Direction,
    Region,
    basis_derivative,
    basis_spinor,
    phase_velocity_direction,
    phi,
    spinor,
    theta,
)
from .core import (
    DEFAULT_TOL,
    DiracWellError,
    EdgeEnergy,
    EnergyRegime,
    InvalidParams,
    Kinematics,
    MismatchedEnergy,
    NoKleinZone,
    Regime,
    SingularMatching,
    StepTooCoarse,
    Tolerances,
    WellParams,
    WrongRegime,
    classify,
    kinematics,
)
from .matching import (
    NoBoundState,
    SolutionSet,
    closed_form_coefficients,
    continuity_determinant,
    determinant_surrogate,
    solve_left_incidence,
    solve_regime,
    solve_right_incidence,
    superpose,
)
from .observables import (
    CurrentProfile,
    current,
    current_profile,
    density,
    flux_balance,
    wall_current_quench,
)
from .oracle import chained_check, integrate_dirac, component_relation_residual, second_order_residual
from .spectrum import (
    BoundState,
    Branch,
    conventional_spectrum,
    klein_bound_states,
    klein_condition,
    klein_roots,
    klein_spectrum,
    n_max,
    nonrelativistic_limit,
    verify_boundary_condition,
)
from .table import SweepResult, ansatz_string, full_solution, sweep

__version__ = "0.1.0"
