"""Independent check of the closed-form solutions by direct ODE integration.

The stationary Dirac equation is integrated as the first-order system

    d psi+/dx = (m + E - U(x)) psi-
    d psi-/dx = (m - E + U(x)) psi+

with ``U(x) = -V`` on ``[0, a]`` and zero elsewhere, using a fixed-step
classical Runge-Kutta scheme.  Walls are never stepped across: each region
is integrated on its own and the wall values are chained.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .basis import Arrow, BasisKind, Region, basis_derivative, basis_spinor
from .core import DEFAULT_TOL, EdgeEnergy, StepTooCoarse, WellParams, kinematics
from .matching import SolutionSet

RK4_ORDER = 4
MAX_PHASE_STEP = 2e-3  # upper bound on h*q in chained checks


@dataclass(frozen=True)
class IntegrationReport:
    max_component_error: float | None
    endpoint_spinor: np.ndarray
    step: float
    method_order: int
    x: np.ndarray
    path: np.ndarray
    richardson_error: float | None = None


def _rk4(f, x0: float, y0: tuple[complex, complex], h: float, n: int):
    """Classical RK4 for a two-component system; returns the full path."""
    u, w = y0
    x = x0
    us = [u]
    ws = [w]
    h2 = 0.5 * h
    for _ in range(n):
        k1u, k1w = f(x, u, w)
        k2u, k2w = f(x + h2, u + h2 * k1u, w + h2 * k1w)
        k3u, k3w = f(x + h2, u + h2 * k2u, w + h2 * k2w)
        k4u, k4w = f(x + h, u + h * k3u, w + h * k3w)
        u = u + h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u)
        w = w + h / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w)
        x = x0 + (len(us)) * h
        us.append(u)
        ws.append(w)
    return np.array([us, ws], dtype=complex)


def dirac_rhs(E: float, m: float, U: float):
    """Right-hand side for a region with constant potential value ``U``."""
    cu = m + E - U
    cw = m - E + U

    def f(x, u, w):
        return cu * w, cw * u

    return f


def _region_potential(params: WellParams, x0: float, x1: float) -> float:
    a = params.a
    if x0 < 0.0 < x1 or x0 < a < x1:
        raise ValueError(f"[{x0}, {x1}] crosses a wall; integrate each region separately")
    return params.potential(0.5 * (x0 + x1))


def integrate_dirac(
    E: float,
    params: WellParams,
    psi0,
    x0: float,
    x1: float,
    n_steps: int = 10_000,
    closed_form=None,
    richardson: bool = True,
    richardson_tol: float = DEFAULT_TOL.richardson,
) -> IntegrationReport:
    """Integrate from ``x0`` to ``x1`` inside one region.

    ``closed_form`` is an optional callable ``x -> (2, len(x))`` spinor array
    compared against the numerical path at every grid point.  With
    ``richardson`` the run is repeated at half the step and
    :class:`StepTooCoarse` is raised if the endpoints differ by more than
    ``richardson_tol`` (relative to ``max(1, |psi|)``).
    """
    if not x1 > x0:
        raise ValueError("need x0 < x1")
    U = _region_potential(params, x0, x1)
    f = dirac_rhs(E, params.m, U)
    psi0 = np.asarray(psi0, dtype=complex)
    y0 = (complex(psi0[0]), complex(psi0[1]))
    h = (x1 - x0) / n_steps
    path = _rk4(f, x0, y0, h, n_steps)
    x = x0 + h * np.arange(n_steps + 1)
    x[-1] = x1
    end = path[:, -1]
    rich = None
    if richardson:
        fine = _rk4(f, x0, y0, h / 2, 2 * n_steps)[:, -1]
        rich = float(np.abs(end - fine).max() / max(1.0, float(np.abs(fine).max())))
        if rich > richardson_tol:
            raise StepTooCoarse(f"step {h:.3e}: h vs h/2 endpoints differ by {rich:.3e}")
    err = None
    if closed_form is not None:
        err = float(np.abs(path - np.asarray(closed_form(x))).max())
    return IntegrationReport(err, end, h, RK4_ORDER, x, path, rich)


@dataclass(frozen=True)
class OracleReport:
    region_errors: dict
    max_error: float
    scale: float
    L: float

    def passed(self, tol: float = DEFAULT_TOL.oracle) -> bool:
        return self.max_error <= tol


def tail_length(sol: SolutionSet) -> float:
    """Outside sampling length: ``2a``, shortened for evanescent tails so growth stays bounded."""
    L = 2.0 * sol.params.a
    if not sol.kin.osc_outside:
        L = min(L, 5.0 / sol.kin.k)
    return L


def chained_check(
    sol: SolutionSet, L: float | None = None, n_steps: int = 10_000, richardson: bool = True
) -> OracleReport:
    """Integrate left tail, well and right tail in turn and compare with ``sol``.

    The solution is first scaled to unit peak amplitude on the sampled
    grid, so the reported error is relative to the wavefunction's size.
    Only the starting value at ``x = -L`` is taken from ``sol``.
    """
    params = sol.params
    a = params.a
    if L is None:
        L = tail_length(sol)
    grid = np.concatenate([np.linspace(-L, 0, 201), np.linspace(0, a, 201), np.linspace(a, a + L, 201)])
    pieces = [sol.piece("left", grid[:201]), sol.piece("inside", grid[201:402]), sol.piece("right", grid[402:])]
    scale = max(float(np.abs(p).max()) for p in pieces)
    unit = sol.scaled(1.0 / scale)
    spans = (("left", -L, 0.0), ("inside", 0.0, a), ("right", a, a + L))
    psi = unit.piece("left", -L)
    errors = {}
    for name, x0, x1 in spans:
        q = sol.kin.p if name == "inside" else sol.kin.k
        rep = integrate_dirac(
            sol.E,
            params,
            psi,
            x0,
            x1,
            n_steps=max(n_steps, math.ceil((x1 - x0) * q / MAX_PHASE_STEP)),
            closed_form=lambda x, name=name: unit.piece(name, x),
            richardson=richardson,
        )
        errors[name] = rep.max_component_error
        psi = rep.endpoint_spinor
    return OracleReport(errors, max(errors.values()), scale, L)


def convergence_study(sol: SolutionSet, region: str = "inside", n_list=None) -> tuple[list[int], list[float]]:
    """Endpoint error against the closed form for successively halved steps."""
    params = sol.params
    a = params.a
    L = tail_length(sol)
    x0, x1 = {"left": (-L, 0.0), "inside": (0.0, a), "right": (a, a + L)}[region]
    q = sol.kin.p if region == "inside" else sol.kin.k
    if n_list is None:
        n0 = max(4, math.ceil(q * (x1 - x0) / 0.4))
        n_list = [n0 * 2**j for j in range(5)]
    psi0 = sol.piece(region, x0)
    exact = sol.piece(region, x1)
    scale = max(float(np.abs(psi0).max()), float(np.abs(exact).max()))
    errors = []
    for n in n_list:
        rep = integrate_dirac(sol.E, params, psi0, x0, x1, n_steps=n, richardson=False)
        errors.append(float(np.abs(rep.endpoint_spinor - exact).max()) / scale)
    return list(n_list), errors


def _local_energy(E: float, params: WellParams, kind: BasisKind) -> float:
    return E + params.V if kind.region is Region.INSIDE else E


def component_relation_residual(E: float, params: WellParams, family: BasisKind, x: float, sign: int | None = None) -> float:
    """Mismatch of the first-order component relation for one basis family.

    Up families test ``psi- = psi+' / (m + s e)`` and down families
    ``psi+ = psi-' / (m + s e)``, where ``e`` is the local energy
    (``E`` outside, ``E + V`` inside).  The natural sign is ``s = +1`` for
    up and ``s = -1`` for down; passing the other sign shows the mismatch.
    """
    kin = kinematics(E, params)
    e = _local_energy(E, params, family)
    m = params.m
    if sign is None:
        sign = 1 if family.arrow is Arrow.UP else -1
    denom = m + sign * e
    if denom == 0:
        raise EdgeEnergy(f"m + ({sign})E vanishes at E={E!r}")
    psi = basis_spinor(family, x, kin)
    dpsi = basis_derivative(family, x, kin)
    if family.arrow is Arrow.UP:
        return float(abs(psi[1] - dpsi[0] / denom))
    return float(abs(psi[0] - dpsi[1] / denom))


def second_order_residual(E: float, params: WellParams, family: BasisKind, x: float) -> float:
    """``max |psi'' + (e^2 - m^2) psi|`` over both components, with the local energy ``e``."""
    kin = kinematics(E, params)
    e = _local_energy(E, params, family)
    psi = basis_spinor(family, x, kin)
    d2 = basis_derivative(family, x, kin, order=2)
    return float(np.abs(d2 + (e * e - params.m**2) * psi).max())


def dirac_residual(E: float, params: WellParams, family: BasisKind, x) -> float:
    """Max residual of the first-order Dirac system for a basis family in its own region."""
    kin = kinematics(E, params)
    m = params.m
    U = -params.V if family.region is Region.INSIDE else 0.0
    psi = basis_spinor(family, x, kin)
    d = basis_derivative(family, x, kin)
    r1 = d[0] - (m + E - U) * psi[1]
    r2 = d[1] - (m - E + U) * psi[0]
    return float(max(np.abs(r1).max(), np.abs(r2).max()))
