"""Property battery behind ``diracwell verify``."""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .basis import Arrow, BasisKind, Character, Region
from .core import DEFAULT_TOL, Regime, Tolerances, WellParams, classify, kinematics
from .matching import closed_form_coefficients, solve_left_incidence, solve_regime, solve_right_incidence
from .observables import current, current_profile, flux_imbalance, flux_scale, wall_current_quench
from .oracle import chained_check, convergence_study, component_relation_residual, second_order_residual
from .spectrum import (
    Branch,
    conventional_spectrum,
    klein_bound_states,
    klein_spectrum,
    verify_boundary_condition,
)

SEED = 20100101


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str

    def __post_init__(self):
        object.__setattr__(self, "passed", bool(self.passed))


def row_interval(row: int, params: WellParams, span: float | None = None) -> tuple[float, float] | None:
    """Widest energy interval classified as ``row``, or None if the row is absent.

    The two unbounded rows are cut ``span`` (default 4m) beyond the last edge.
    """
    span = 4 * params.m if span is None else span
    cuts = sorted(set(params.edges))
    cuts = [cuts[0] - span, *cuts, cuts[-1] + span]
    best = None
    for lo, hi in zip(cuts, cuts[1:]):
        if classify(0.5 * (lo + hi), params).row == row and (best is None or hi - lo > best[1] - best[0]):
            best = (lo, hi)
    return best


def row_energies(row: int, params: WellParams, samples: int) -> tuple[WellParams, list[float]]:
    """Representative energies of a row.

    Scattering rows get evenly spaced interior points.  Bound-type rows get
    their lowest bound states; the well is widened (doubling ``a``) until
    the row holds ``samples`` of them.
    """
    if row in (2, 3):
        tag = Regime.BOUND_UPPER if row == 2 else Regime.BOUND_LOWER
        p = params
        for _ in range(8):
            Es = [s.E for s in conventional_spectrum(p) if classify(s.E, p).tag is tag]
            if len(Es) >= samples:
                return p, Es[:samples]
            p = replace(p, a=2 * p.a)
        return p, Es
    interval = row_interval(row, params)
    if interval is None:
        return params, []
    lo, hi = interval
    Es = [lo + (hi - lo) * (i + 1) / (samples + 1) for i in range(samples)]
    return params, [E for E in Es if classify(E, params).row == row]


def _random_scattering_energies(params: WellParams, n: int, rng) -> list[float]:
    intervals = [row_interval(r, params) for r in (1, 4, 7)]
    intervals = [iv for iv in intervals if iv is not None]
    out = []
    for i in range(n):
        lo, hi = intervals[i % len(intervals)]
        pad = 1e-6 * params.m
        out.append(float(rng.uniform(lo + pad, hi - pad)))
    return out


def check_unitarity(params, tol: Tolerances, perturb_beta=0.0, n=300) -> CheckResult:
    rng = np.random.default_rng(SEED)
    worst = 0.0
    for E in _random_scattering_energies(params, n, rng):
        kin = kinematics(E, params)
        if perturb_beta:
            kin = kin.perturbed(perturb_beta)
        c = solve_left_incidence(E, params, kin).coefficients
        worst = max(worst, abs(abs(c["R"]) ** 2 + abs(c["T"]) ** 2 - 1))
    return CheckResult("unitarity |R|^2+|T|^2=1", worst <= tol.unitarity, f"max dev {worst:.2e} over {n} energies")


def check_closed_form(params, tol: Tolerances, perturb_beta=0.0, n=50) -> CheckResult:
    name = "closed-form vs generic solve"
    if not params.has_klein_zone:
        return CheckResult(name, True, "n/a: no Klein zone")
    rng = np.random.default_rng(SEED + 1)
    lo, hi = params.klein_zone
    worst = 0.0
    for E in rng.uniform(lo + 1e-6, hi - 1e-6, n):
        kin = kinematics(E, params)
        if perturb_beta:
            kin = kin.perturbed(perturb_beta)
        cf = closed_form_coefficients(E, params, kin)
        gl = solve_left_incidence(E, params, kin).coefficients
        gr = solve_right_incidence(E, params, kin).coefficients
        for key, val in (("A", gl["A"]), ("B", gl["B"]), ("A_hat", gr["A_hat"]), ("B_hat", gr["B_hat"])):
            worst = max(worst, abs(val - cf[key]) / abs(cf[key]))
    return CheckResult(name, worst <= tol.closed_form, f"max rel diff {worst:.2e}")


def check_oracle_row(row: int, params, tol: Tolerances, samples=3) -> CheckResult:
    name = f"oracle agreement, row {row}"
    if row_interval(row, params) is None:
        return CheckResult(name, True, "n/a: zone absent for this well")
    p, Es = row_energies(row, params, samples)
    if not Es:
        return CheckResult(name, False, "no sample energies found")
    worst = 0.0
    for E in Es:
        sol = solve_regime(E, p)
        worst = max(worst, chained_check(sol).max_error)
    sol = solve_regime(Es[0], p)
    region = "inside" if sol.kin.osc_inside else "left"
    _, errs = convergence_study(sol, region)
    ratios = [e0 / e1 for e0, e1 in zip(errs[:-1], errs[1:])]
    order_ok = all(12.0 <= r <= 20.0 for r in ratios)
    detail = f"max err {worst:.2e} at a={p.a:g} ({len(Es)} energies); halving ratios {', '.join(f'{r:.1f}' for r in ratios)}"
    return CheckResult(name, worst <= tol.oracle and order_ok and len(Es) == samples, detail)


def _all_families():
    for region in Region:
        for character in Character:
            for arrow in Arrow:
                for sign in (1, -1):
                    yield BasisKind(region, character, sign, arrow)


def family_energy(kind: BasisKind, params: WellParams) -> float:
    """An energy at which ``kind`` is the right family in its own region.

    The local energy is picked from a few candidates so that the other
    region does not sit on a zone edge.
    """
    m = params.m
    magnitudes = (2.0, 2.37, 3.1) if kind.character is Character.OSCILLATORY else (0.5, 0.31, 0.73)
    sign = 1.0 if kind.arrow is Arrow.UP else -1.0
    shift = -params.V if kind.region is Region.INSIDE else 0.0
    for mag in magnitudes:
        E = sign * mag * m + shift
        other = E if kind.region is Region.INSIDE else E + params.V
        if abs(abs(other) - m) > 1e-3 * m:
            return E
    return E


def check_residuals(params, tol: Tolerances, n_x=10) -> CheckResult:
    rng = np.random.default_rng(SEED + 2)
    worst = 0.0
    for kind in _all_families():
        E = family_energy(kind, params)
        for x in rng.uniform(-1.0, 1.0, n_x):
            worst = max(worst, component_relation_residual(E, params, kind, x), second_order_residual(E, params, kind, x))
    return CheckResult("component-relation and second-order residuals", worst <= tol.residual, f"max {worst:.2e}")


def check_bound_conditions(params, tol: Tolerances) -> CheckResult:
    name = "flux balance and wall-current quench at Klein states"
    if not params.has_klein_zone:
        return CheckResult(name, True, "n/a: no Klein zone")
    worst = 0.0
    states = klein_bound_states(params, include_edges=False)
    for st in states:
        sol = solve_regime(st.E, params)
        J0, Ja = wall_current_quench(sol)
        worst = max(worst, flux_imbalance(sol), max(abs(J0), abs(Ja)) / flux_scale(sol))
    return CheckResult(name, worst <= tol.flux, f"{len(states)} states, worst {worst:.2e}")


def check_depth_independence(params, tol: Tolerances) -> CheckResult:
    name = "k-quantized energies independent of V"
    if not params.has_klein_zone:
        return CheckResult(name, True, "n/a: no Klein zone")
    ref = [s.E for s in klein_spectrum(params, Branch.K_QUANTIZED)]
    ok = True
    for factor in (2.0, 10.0, 100.0):
        other = [s.E for s in klein_spectrum(replace(params, V=params.V * factor), Branch.K_QUANTIZED)]
        ok &= other[: len(ref)] == ref
    return CheckResult(name, ok, f"{len(ref)} levels compared at V x 2, 10, 100")


def check_selection(params, tol: Tolerances) -> CheckResult:
    name = "boundary-condition selection"
    if not params.has_klein_zone:
        return CheckResult(name, True, "n/a: no Klein zone")
    bad = []
    for st in klein_bound_states(params, include_edges=False):
        if st.coincident_with is not None:
            continue
        with_sigma3 = verify_boundary_condition(st, params, "sigma3", tol.boundary_condition)
        plain = verify_boundary_condition(st, params, "plain", tol.boundary_condition)
        want = (True, False) if st.branch is Branch.K_QUANTIZED else (False, True)
        if (with_sigma3, plain) != want:
            bad.append(f"{st.branch.value} n={st.n}")
    return CheckResult(name, not bad, "ok" if not bad else "failed: " + ", ".join(bad))


def check_current_conservation(params, tol: Tolerances, perturb_beta=0.0, n=30) -> CheckResult:
    rng = np.random.default_rng(SEED + 3)
    worst_flat = worst_wall = 0.0
    for E in _random_scattering_energies(params, n, rng):
        kin = kinematics(E, params)
        if perturb_beta:
            kin = kin.perturbed(perturb_beta)
        sol = solve_left_incidence(E, params, kin)
        prof = current_profile(sol, n_points=201)
        scale = max(abs(v) for v in prof.piecewise_means.values()) or 1.0
        worst_flat = max(worst_flat, max(prof.spreads.values()) / scale)
        a = params.a
        j_walls = [
            abs(current(sol.piece("left", 0.0)) - current(sol.piece("inside", 0.0))),
            abs(current(sol.piece("inside", a)) - current(sol.piece("right", a))),
        ]
        worst_wall = max(worst_wall, max(j_walls))
    ok = worst_flat <= tol.current and worst_wall <= tol.current_wall
    return CheckResult("current conservation", ok, f"flatness {worst_flat:.2e}, wall jump {worst_wall:.2e}")


def run_battery(
    params: WellParams,
    tol: Tolerances = DEFAULT_TOL,
    rows=None,
    samples: int = 3,
    perturb_beta: float = 0.0,
) -> list[CheckResult]:
    """Run every check, or only the oracle rows listed in ``rows``."""
    if rows:
        return [check_oracle_row(r, params, tol, samples) for r in rows]
    results = [
        check_unitarity(params, tol, perturb_beta),
        check_closed_form(params, tol, perturb_beta),
        check_residuals(params, tol),
        check_bound_conditions(params, tol),
        check_depth_independence(params, tol),
        check_selection(params, tol),
        check_current_conservation(params, tol, perturb_beta),
    ]
    results += [check_oracle_row(r, params, tol, samples) for r in range(1, 8)]
    return results
