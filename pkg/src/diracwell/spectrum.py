"""Bound-state energies.

Klein-zone states (``-V + m < E < -m``) come in two closed-form branches,
``k a = n pi`` (labelled "10a") and ``p a = n pi`` (labelled "10b"); both zero the wall
condition ``cos((p + k) a) - cos((p - k) a)``.  The wall relation
``Psi(a) = (-1)**(n+1) sigma3 Psi(0)`` singles out the first branch and
``Psi(a) = +-Psi(0)`` the second.  States with ``|E| < m`` have no closed
form and are located from the continuity determinant.
"""
from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .core import (
    DEFAULT_TOL,
    EDGE_RTOL,
    EdgeEnergy,
    NoKleinZone,
    Regime,
    WellParams,
    WrongRegime,
    classify,
    kinematics,
)
from .matching import NoBoundState, SolutionSet, determinant_surrogate, solve_regime
from .observables import SIGMA3

logger = logging.getLogger(__name__)


class Branch(enum.Enum):
    K_QUANTIZED = "10a"
    P_QUANTIZED = "10b"
    CONVENTIONAL = "conventional"


SELECTED_BY = {Branch.K_QUANTIZED: "sigma3", Branch.P_QUANTIZED: "plain", Branch.CONVENTIONAL: None}


@dataclass(frozen=True)
class BoundState:
    n: int
    E: float
    branch: Branch
    parity_sign: int
    k: float
    p: float
    edge: bool = False
    coincident_with: int | None = None  # n on the other Klein branch at the same energy

    @property
    def selected_by(self) -> str | None:
        return SELECTED_BY[self.branch]

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "E": self.E,
            "branch": self.branch.value,
            "parity": self.parity_sign,
            "k": self.k,
            "p": self.p,
            "edge": self.edge,
            "selected_by": self.selected_by,
            "coincident_with": self.coincident_with,
        }


def _require_klein(params: WellParams):
    if not params.has_klein_zone:
        raise NoKleinZone(f"no Klein zone (V <= 2m): V={params.V!r}, m={params.m!r}")


def n_max(params: WellParams) -> int:
    """Largest n for which a Klein-zone state exists on either branch."""
    _require_klein(params)
    m, V, a = params.m, params.V, params.a
    return math.floor(m * a / math.pi * math.sqrt((V / m - 1.0) ** 2 - 1.0))


def klein_energy(n: int, params: WellParams, branch: Branch) -> float:
    m, a = params.m, params.a
    root = math.sqrt(1.0 + (n * math.pi / (m * a)) ** 2)
    if branch is Branch.K_QUANTIZED:
        return -m * root
    if branch is Branch.P_QUANTIZED:
        return -params.V + m * root
    raise ValueError(f"not a Klein branch: {branch!r}")


def _wave_numbers(E: float, params: WellParams) -> tuple[float, float]:
    m = params.m
    eps = E + params.V
    return math.sqrt(abs(E * E - m * m)), math.sqrt(abs(eps * eps - m * m))


def _klein_parity(n: int, branch: Branch) -> int:
    # k-quantized: Psi(a) = (-1)**(n+1) sigma3 Psi(0); p-quantized: Psi(a) = (-1)**n Psi(0)
    if branch is Branch.K_QUANTIZED:
        return (-1) ** (n + 1)
    return (-1) ** n


def klein_spectrum(params: WellParams, branch: Branch | str) -> list[BoundState]:
    branch = Branch(branch)
    nm = n_max(params)
    lo, hi = params.klein_zone
    atol = EDGE_RTOL * params.m
    states = []
    for n in range(nm + 1):
        E = klein_energy(n, params, branch)
        k, p = _wave_numbers(E, params)
        edge = abs(E - lo) <= atol or abs(E - hi) <= atol
        states.append(BoundState(n, E, branch, _klein_parity(n, branch), k, p, edge=edge))
    return states


def klein_bound_states(params: WellParams, include_edges: bool = True) -> list[BoundState]:
    """Both Klein branches merged in increasing energy; coincident pairs are cross-labelled."""
    a_states = klein_spectrum(params, Branch.K_QUANTIZED)
    b_states = klein_spectrum(params, Branch.P_QUANTIZED)
    tol = 1e-10 * params.m
    out = []
    for s in a_states:
        twin = next((b for b in b_states if abs(b.E - s.E) <= tol), None)
        out.append(s if twin is None else _with_twin(s, twin.n))
    for s in b_states:
        twin = next((t for t in a_states if abs(t.E - s.E) <= tol), None)
        out.append(s if twin is None else _with_twin(s, twin.n))
    if not include_edges:
        out = [s for s in out if not s.edge]
    return sorted(out, key=lambda s: (s.E, s.branch.value))


def _with_twin(state: BoundState, n: int) -> BoundState:
    return BoundState(state.n, state.E, state.branch, state.parity_sign, state.k, state.p, state.edge, n)


def klein_condition(E: float, params: WellParams) -> float:
    """``cos((p + k) a) - cos((p - k) a)``; vanishes exactly at Klein-zone bound states."""
    regime = classify(E, params)
    if regime.is_edge:
        raise EdgeEnergy(f"E={E!r} is a zone edge")
    if regime.tag is not Regime.KLEIN_ZONE:
        raise WrongRegime(f"E={E!r} is not in the Klein zone ({regime})")
    kin = kinematics(E, params)
    a = params.a
    return math.cos((kin.p + kin.k) * a) - math.cos((kin.p - kin.k) * a)


def _open_grid(lo: float, hi: float, n: int, pad: float) -> np.ndarray:
    grid = np.linspace(lo, hi, n)
    grid[0] = lo + pad
    grid[-1] = hi - pad
    return grid


def _scan_roots(f, grid: np.ndarray, xtol: float, touch_tol: float) -> list[float]:
    """Sign-change brackets refined by Brent's method, plus touching zeros of |f|.

    Touching zeros are only searched for when ``touch_tol > 0``.
    """
    values = np.array([f(x) for x in grid])
    roots = []
    for i in range(len(grid) - 1):
        f0, f1 = values[i], values[i + 1]
        if f0 == 0.0:
            roots.append(float(grid[i]))
        elif f0 * f1 < 0:
            roots.append(brentq(f, grid[i], grid[i + 1], xtol=xtol, maxiter=400))
    if values[-1] == 0.0:
        roots.append(float(grid[-1]))
    mag = np.abs(values)
    for i in range(1, len(grid) - 1 if touch_tol > 0 else 1):
        # double roots (coincident branches) do not change sign
        same_sign = values[i - 1] * values[i] > 0 and values[i] * values[i + 1] > 0
        if same_sign and mag[i] < mag[i - 1] and mag[i] <= mag[i + 1]:
            res = minimize_scalar(
                lambda x: abs(f(x)),
                bounds=(grid[i - 1], grid[i + 1]),
                method="bounded",
                options={"xatol": xtol},
            )
            if abs(f(res.x)) < touch_tol:
                roots.append(float(res.x))
    roots.sort()
    merged = []
    for r in roots:
        if not merged or r - merged[-1] > 10 * xtol:
            merged.append(r)
    return merged


def klein_roots(params: WellParams, n_grid: int | None = None, xtol: float | None = None) -> list[float]:
    """Zeros of :func:`klein_condition` inside the open Klein zone, by dense scan."""
    _require_klein(params)
    lo, hi = params.klein_zone
    m = params.m
    if n_grid is None:
        n_grid = max(4001, 400 * (n_max(params) + 1))
    if xtol is None:
        xtol = 1e-14 * max(m, abs(lo))
    pad = 1e-9 * m
    grid = _open_grid(lo, hi, n_grid, pad)
    return _scan_roots(lambda E: klein_condition(E, params), grid, xtol, touch_tol=1e-12)


def root_branches(E: float, params: WellParams, tol: float = 1e-8) -> set[Branch]:
    """Which closed-form branch(es) a Klein-zone root belongs to."""
    k, p = _wave_numbers(E, params)
    a = params.a
    out = set()
    if abs(math.sin(k * a)) < tol:
        out.add(Branch.K_QUANTIZED)
    if abs(math.sin(p * a)) < tol:
        out.add(Branch.P_QUANTIZED)
    return out


def bound_solution(state: BoundState, params: WellParams) -> SolutionSet:
    """Wavefunction of a bound state: superposed scattering solution or decaying-tail solution."""
    sol = solve_regime(state.E, params)
    if isinstance(sol, NoBoundState):
        raise WrongRegime(f"E={state.E!r} is not a bound state (residual {sol.residual:.2e})")
    return sol


def boundary_condition_residual(
    state: BoundState, params: WellParams, which: str
) -> tuple[float, int]:
    """Relative mismatch of a wall relation and the sign used.

    ``which="sigma3"`` tests ``Psi(a) = s sigma3 Psi(0)`` with ``s`` the
    state's parity; ``which="plain"`` tests ``Psi(a) = +-Psi(0)`` and
    reports the better of the two signs.
    """
    sol = bound_solution(state, params)
    psi0 = sol.piece("inside", 0.0)
    psia = sol.piece("inside", params.a)
    scale = max(float(np.abs(psi0).max()), float(np.abs(psia).max()))
    if scale == 0:
        return 0.0, 1
    if which == "sigma3":
        s = state.parity_sign if state.branch is Branch.CONVENTIONAL else (-1) ** (state.n + 1)
        return float(np.abs(psia - s * (SIGMA3 @ psi0)).max()) / scale, s
    if which == "plain":
        best = min((float(np.abs(psia - s * psi0).max()) / scale, s) for s in (1, -1))
        return best
    raise ValueError(f"unknown boundary condition {which!r}")


def verify_boundary_condition(
    state: BoundState, params: WellParams, which: str, tol: float = DEFAULT_TOL.boundary_condition
) -> bool:
    try:
        residual, _ = boundary_condition_residual(state, params, which)
    except (EdgeEnergy, WrongRegime):
        return False
    return residual <= tol


def _sigma3_parity(sol: SolutionSet) -> int:
    psi0 = sol.piece("inside", 0.0)
    psia = sol.piece("inside", sol.params.a)
    plus = np.abs(psia - SIGMA3 @ psi0).max()
    minus = np.abs(psia + SIGMA3 @ psi0).max()
    return 1 if plus <= minus else -1


def conventional_spectrum(
    params: WellParams,
    n_grid: int | None = None,
    bound_tol: float = DEFAULT_TOL.bound_residual,
    threshold_gap: float = 1e-6,
) -> list[BoundState]:
    """Bound states with ``|E| < m``, from sign changes of the determinant surrogate.

    States closer than ``threshold_gap * m`` to the continuum edges ``+-m``
    are left out: a thin well always binds one such state, but its tail is
    so long that it is indistinguishable from the edge.  Pass
    ``threshold_gap=0`` to keep them.
    """
    m, V, a = params.m, params.V, params.a
    p_max = math.sqrt(abs((m + V) ** 2 - m * m))
    if n_grid is None:
        n_grid = max(400, 12 * math.ceil(1 + p_max * a / math.pi))
    cuts = sorted({-m, m, *(e for e in params.edges if -m < e < m)})
    pad = 1e-9 * m
    roots = []
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        if hi - lo <= 4 * pad:
            continue
        grid = _open_grid(lo, hi, n_grid, pad)

        def f(E):
            return determinant_surrogate(E, params)

        roots.extend(_scan_roots(f, grid, xtol=1e-13 * m, touch_tol=0.0))
    states = []
    for E in sorted(roots):
        if m - abs(E) < threshold_gap * m:
            continue
        sol = solve_regime(E, params, bound_tol=bound_tol)
        if isinstance(sol, NoBoundState):
            logger.debug("discarding bracket at E=%r, residual %.2e", E, sol.residual)
            continue
        k, p = _wave_numbers(E, params)
        states.append(BoundState(len(states), E, Branch.CONVENTIONAL, _sigma3_parity(sol), k, p))
    return states


def nonrelativistic_limit(params: WellParams, n: int) -> tuple[float, float, float]:
    """Binding energy ``|E_n| - m`` of k-quantized state n against ``n^2 pi^2 / (2 m a^2)``."""
    nm = n_max(params)
    if not 0 <= n <= nm:
        raise ValueError(f"no k-quantized state n={n} (n_max={nm})")
    m, a = params.m, params.a
    x = n * math.pi / (m * a)
    binding = m * x * x / (math.sqrt(1.0 + x * x) + 1.0)
    e_nr = (n * math.pi) ** 2 / (2 * m * a * a)
    rel = abs(binding - e_nr) / e_nr if e_nr else 0.0
    return binding, e_nr, rel
