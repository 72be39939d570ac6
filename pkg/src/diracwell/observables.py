"""Probability current, density and the bound-state flux conditions."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import simpson

from .core import DEFAULT_TOL, Regime, WrongRegime, WellParams
from .matching import SolutionSet

SIGMA3 = np.diag([1.0, -1.0]).astype(complex)
SIGMA1 = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)


def current(psi) -> np.ndarray | float:
    """Current density ``-i psi^dagger sigma3 sigma1 psi = 2 Im(conj(psi+) psi-)``.

    Accepts a single spinor or a ``(2, ...)`` stack.
    """
    psi = np.asarray(psi, dtype=complex)
    J = 2.0 * np.imag(np.conj(psi[0]) * psi[1])
    return float(J) if J.ndim == 0 else J


def current_matrix_form(psi) -> complex:
    """Same quantity evaluated literally from the sigma matrices (for cross-checks)."""
    psi = np.asarray(psi, dtype=complex)
    return complex(-1j * np.conj(psi) @ SIGMA3 @ SIGMA1 @ psi)


def density(psi) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    return np.abs(psi[0]) ** 2 + np.abs(psi[1]) ** 2


@dataclass(frozen=True)
class CurrentProfile:
    x: np.ndarray
    J: np.ndarray
    piecewise_means: dict
    wall_values: tuple[float, float]
    spreads: dict  # max |J - mean| per region

    @property
    def samples(self) -> list[tuple[float, float]]:
        return list(zip(self.x.tolist(), self.J.tolist()))


def _region_grids(params: WellParams, n_points: int, L: float | None):
    a = params.a
    L = 2 * a if L is None else L
    return {
        "left": np.linspace(-L, 0.0, n_points),
        "inside": np.linspace(0.0, a, n_points),
        "right": np.linspace(a, a + L, n_points),
    }


def current_profile(sol: SolutionSet, n_points: int = 1001, L: float | None = None) -> CurrentProfile:
    """Sample J region by region from the exact piecewise wavefunction."""
    grids = _region_grids(sol.params, n_points, L)
    xs, Js, means, spreads = [], [], {}, {}
    for name, x in grids.items():
        J = current(sol.piece(name, x))
        xs.append(x)
        Js.append(J)
        means[name] = float(J.mean())
        spreads[name] = float(np.abs(J - J.mean()).max())
    a = sol.params.a
    walls = (current(sol.piece("inside", 0.0)), current(sol.piece("inside", a)))
    return CurrentProfile(np.concatenate(xs), np.concatenate(Js), means, walls, spreads)


def _require_klein_superposition(sol: SolutionSet):
    if sol.regime.tag is not Regime.KLEIN_ZONE or "AA" not in sol.coefficients:
        raise WrongRegime("need a superposed Klein-zone solution")


def flux_scale(sol: SolutionSet) -> float:
    """Inside flux normalizer ``max(|AA|^2, |BB|^2) * 2 beta / (1 + beta^2)``."""
    AA, BB = sol.coefficients["AA"], sol.coefficients["BB"]
    beta = sol.kin.beta
    return float(max(abs(AA) ** 2, abs(BB) ** 2) * 2 * beta / (1 + beta * beta))


def flux_balance(sol: SolutionSet, tol: float = DEFAULT_TOL.flux) -> tuple[float, float, bool]:
    """Right- and left-moving inside fluxes ``|AA|^2``, ``|BB|^2`` and whether they balance."""
    _require_klein_superposition(sol)
    lhs = float(abs(sol.coefficients["AA"]) ** 2)
    rhs = float(abs(sol.coefficients["BB"]) ** 2)
    return lhs, rhs, bool(abs(lhs - rhs) <= tol * max(lhs, rhs))


def flux_imbalance(sol: SolutionSet) -> float:
    lhs, rhs, _ = flux_balance(sol)
    top = max(lhs, rhs)
    return abs(lhs - rhs) / top if top else 0.0


def wall_current_quench(sol: SolutionSet, params: WellParams | None = None) -> tuple[float, float]:
    """Current at both walls, taken from the inside wavefunction."""
    _require_klein_superposition(sol)
    a = (params or sol.params).a
    return current(sol.piece("inside", 0.0)), current(sol.piece("inside", a))


def is_quenched(sol: SolutionSet, tol: float = DEFAULT_TOL.flux) -> bool:
    J0, Ja = wall_current_quench(sol)
    scale = flux_scale(sol)
    return max(abs(J0), abs(Ja)) <= tol * scale


def normalize_inside_l2(sol: SolutionSet, n_points: int = 4001) -> SolutionSet:
    """Rescale so that the density integrates to one over the well."""
    x = np.linspace(0.0, sol.params.a, n_points)
    norm = simpson(density(sol.piece("inside", x)), x=x)
    if norm == 0:
        return sol
    return sol.scaled(1.0 / np.sqrt(norm))
