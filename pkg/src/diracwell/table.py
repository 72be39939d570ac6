"""Whole-table access: one solution object per energy, and energy sweeps."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import DEFAULT_TOL, Regime, WellParams, classify, kinematics
from .matching import (
    NoBoundState,
    SolutionSet,
    ansatz_for,
    continuity_determinant,
    determinant_surrogate,
    solve_left_incidence,
    solve_regime,
)
from .observables import flux_imbalance
from .spectrum import klein_condition


def full_solution(E: float, params: WellParams) -> SolutionSet | NoBoundState:
    """Solution of the zone E belongs to.

    Below ``-m`` this is the superposed state; its left- and
    right-incidence ingredients are in ``.parts``.
    """
    return solve_regime(E, params)


def ansatz_string(E: float, params: WellParams) -> str:
    """Human-readable ansatz of the zone, ``left | inside | right``.

    Zones with two outside pieces list the left-incidence and
    right-incidence pieces separated by ``;``.
    """
    regime = classify(E, params)
    if regime.is_edge:
        return f"Edge({regime.edge:g})"
    ans = ansatz_for(E, params)
    ip, im = ans.inside_plus.label, ans.inside_minus.label
    if not ans.is_scattering:
        return f"C{ans.left_out.label} | A{ip}+B{im} | D{ans.right_out.label}"
    lin, lout = ans.left_incident.label, ans.left_out.label
    rin, rout = ans.right_incident.label, ans.right_out.label
    if regime.tag is Regime.SCATTER_ABOVE:
        return f"{lin}+R{lout} | A{ip}+B{im} | T{rout}"
    return f"{lin}+R{lout} ; T̂{lout} | 𝔸{ip}+𝔹{im} | T{rout} ; {rin}+R̂{rout}"


COLUMNS = (
    "E",
    "regime",
    "R2",
    "T2",
    "RT_sum",
    "AA2",
    "BB2",
    "flux_imbalance",
    "klein_condition",
    "det_abs",
    "det_surrogate",
)


@dataclass(frozen=True)
class SweepResult:
    energies: np.ndarray
    regimes: list
    values: dict  # column name -> float array (NaN where not applicable)
    params: WellParams
    metadata: dict = field(default_factory=dict)

    def records(self) -> list[dict]:
        rows = []
        for i, E in enumerate(self.energies):
            row = {"E": float(E), "regime": self.regimes[i]}
            for name in COLUMNS[2:]:
                v = float(self.values[name][i])
                row[name] = None if math.isnan(v) else v
            rows.append(row)
        return rows


def _grid(params: WellParams, E_min: float, E_max: float, n_points: int, include_edges: bool):
    if n_points < 2 or not E_max > E_min:
        raise ValueError("need E_min < E_max and n_points >= 2")
    grid = np.linspace(E_min, E_max, n_points)
    step = (E_max - E_min) / (n_points - 1)
    nudged = []
    if include_edges:
        return grid, nudged
    atol = DEFAULT_TOL.edge * params.m
    for i, E in enumerate(grid):
        if any(abs(E - e) <= atol for e in params.edges):
            new = E + 0.5 * step if E + 0.5 * step <= E_max else E - 0.5 * step
            nudged.append({"from": float(E), "to": float(new)})
            grid[i] = new
    return grid, nudged


def _point(E: float, params: WellParams) -> dict:
    nan = float("nan")
    out = dict.fromkeys(COLUMNS[2:], nan)
    regime = classify(E, params)
    if regime.is_edge:
        return out
    kin = kinematics(E, params)
    out["det_abs"] = abs(continuity_determinant(E, params, kin))
    if regime.tag.is_bound_type:
        out["det_surrogate"] = determinant_surrogate(E, params, kin)
        return out
    left = solve_left_incidence(E, params, kin)
    R2 = abs(left.coefficients["R"]) ** 2
    T2 = abs(left.coefficients["T"]) ** 2
    out.update(R2=R2, T2=T2, RT_sum=R2 + T2)
    if regime.tag is not Regime.SCATTER_ABOVE:
        sup = solve_regime(E, params, kin)
        out["AA2"] = abs(sup.coefficients["AA"]) ** 2
        out["BB2"] = abs(sup.coefficients["BB"]) ** 2
    if regime.tag is Regime.KLEIN_ZONE:
        out["flux_imbalance"] = flux_imbalance(sup)
        out["klein_condition"] = klein_condition(E, params)
    return out


def sweep(
    params: WellParams, E_min: float, E_max: float, n_points: int, include_edges: bool = False
) -> SweepResult:
    """Evaluate per-energy summaries on a uniform grid.

    Grid points within the edge tolerance of a zone boundary are moved by
    half a step (recorded in ``metadata["nudged"]``) unless
    ``include_edges`` is set, in which case edge rows carry NaNs.
    """
    grid, nudged = _grid(params, E_min, E_max, n_points, include_edges)
    regimes = []
    values = {name: np.empty(len(grid)) for name in COLUMNS[2:]}
    for i, E in enumerate(grid):
        regimes.append(str(classify(E, params)))
        for name, v in _point(float(E), params).items():
            values[name][i] = v
    metadata = {
        "E_min": E_min,
        "E_max": E_max,
        "n_points": n_points,
        "include_edges": include_edges,
        "nudged": nudged,
    }
    return SweepResult(grid, regimes, values, params, metadata)
