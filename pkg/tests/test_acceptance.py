"""Acceptance gate: eleven end-to-end criteria at their stated tolerances.

Each criterion prints one ``PASS``/``FAIL`` line (collected in the pytest
terminal summary, or printed directly with ``python tests/test_acceptance.py``).
"""
from __future__ import annotations

import math

import numpy as np
from scipy.optimize import bisect

import reference
from diracwell import (
    Branch,
    WellParams,
    chained_check,
    closed_form_coefficients,
    conventional_spectrum,
    current,
    current_profile,
    klein_bound_states,
    klein_condition,
    klein_roots,
    klein_spectrum,
    n_max,
    nonrelativistic_limit,
    component_relation_residual,
    second_order_residual,
    solve_left_incidence,
    solve_regime,
    solve_right_incidence,
    verify_boundary_condition,
)
from diracwell.basis import Arrow, BasisKind, Character, Region
from diracwell.core import classify
from diracwell.observables import flux_imbalance, flux_scale, wall_current_quench
from diracwell.oracle import convergence_study
from diracwell.spectrum import root_branches
from diracwell.verify import family_energy

SEED = 20240601
RESULTS: list[str] = []


def report(number: int, title: str, passed: bool, detail: str) -> None:
    RESULTS.append(f"criterion {number:2d} {'PASS' if passed else 'FAIL'}  {title}: {detail}")
    assert passed, detail


def _scatter_energies(rng, n, params):
    m, V = params.m, params.V
    pad = 1e-6
    zones = [(m + pad, m + 20), (-V + m + pad, -m - pad), (-V - m - 20, -V - m - pad)]
    return [float(rng.uniform(*zones[i % 3])) for i in range(n)]


def test_criterion_01_klein_closed_form():
    params = WellParams(1, 5, 1)
    E1 = next(s.E for s in klein_spectrum(params, Branch.K_QUANTIZED) if s.n == 1)
    exact = -math.sqrt(1 + math.pi**2)
    closed_err = abs(E1 - exact)
    # bracket from a coarse scan, then plain bisection on the wall condition
    grid = np.linspace(-4 + 1e-6, -1 - 1e-6, 301)
    vals = [klein_condition(float(E), params) for E in grid]
    brackets = [(grid[i], grid[i + 1]) for i in range(300) if vals[i] * vals[i + 1] < 0]
    found = [bisect(klein_condition, lo, hi, args=(params,), xtol=1e-14) for lo, hi in brackets]
    bis_err = min(abs(r - exact) for r in found)
    mp_err = min(abs(r - exact) for r in reference.klein_roots(1, 5, 1, n_grid=3000))
    ok = closed_err <= 1e-12 and bis_err <= 1e-10 and mp_err <= 1e-10
    report(1, "Klein k a = pi level, closed form", ok, f"closed {closed_err:.1e}, bisection {bis_err:.1e}, mpmath {mp_err:.1e}")


def test_criterion_02_depth_independence():
    lists = {V: [s.E for s in klein_spectrum(WellParams(1, V, 1), Branch.K_QUANTIZED)] for V in (2.5, 5, 50, 500)}
    ok = True
    for levels in lists.values():
        for other in lists.values():
            n = min(len(levels), len(other))
            ok &= levels[:n] == other[:n]
    sizes = {V: len(v) for V, v in lists.items()}
    report(2, "k-quantized energies independent of V", ok, f"bitwise equal prefixes, levels per V {sizes}")


def test_criterion_03_n_max_count():
    params = WellParams(1, 5, 10)
    nm = n_max(params)
    roots = klein_roots(params)
    counts = {Branch.K_QUANTIZED: 0, Branch.P_QUANTIZED: 0}
    extras = 0
    for r in roots:
        owners = root_branches(r, params)
        if not owners:
            extras += 1
        for b in owners:
            counts[b] += 1
    closed = {b: sum(1 for s in klein_spectrum(params, b) if not s.edge) for b in counts}
    ok = nm == 12 and counts == closed and extras == 0 and all(c == nm for c in counts.values())
    report(
        3,
        "n_max root count",
        ok,
        f"n_max={nm}, scan roots k-quantized={counts[Branch.K_QUANTIZED]} p-quantized={counts[Branch.P_QUANTIZED]}, extras={extras}",
    )


def test_criterion_04_nonrelativistic_limit():
    params = WellParams(1000, 5000, 1)
    worst = 0.0
    for n in (1, 2, 3):
        E = next(s.E for s in klein_spectrum(params, Branch.K_QUANTIZED) if s.n == n)
        e_nr = n * n * math.pi**2 / (2 * params.m * params.a**2)
        worst = max(worst, abs((abs(E) - params.m) - e_nr) / e_nr, nonrelativistic_limit(params, n)[2])
    report(4, "nonrelativistic limit", worst < 1e-4, f"max rel error {worst:.2e} for n=1..3")


def test_criterion_05_unitarity():
    params = WellParams(1, 5, 1)
    rng = np.random.default_rng(SEED)
    worst = 0.0
    for E in _scatter_energies(rng, 1000, params):
        c = solve_left_incidence(E, params).coefficients
        worst = max(worst, abs(abs(c["T"]) ** 2 + abs(c["R"]) ** 2 - 1))
    report(5, "unitarity", worst < 1e-12, f"max | |T|^2+|R|^2-1 | = {worst:.2e} over 1000 energies")


def test_criterion_06_bound_state_conditions():
    params = WellParams(1, 5, 1)
    states = klein_bound_states(params, include_edges=False)
    worst = 0.0
    for st in states:
        sol = solve_regime(st.E, params)
        J0, Ja = wall_current_quench(sol)
        worst = max(worst, flux_imbalance(sol), max(abs(J0), abs(Ja)) / flux_scale(sol))
    rng = np.random.default_rng(SEED + 6)
    spectral = [s.E for s in klein_bound_states(params)]
    off = []
    while len(off) < 20:
        E = float(rng.uniform(-4, -1))
        if min(abs(E - s) for s in spectral) > 0.05:
            off.append(E)
    weakest = math.inf
    for E in off:
        sol = solve_regime(E, params)
        J0, Ja = wall_current_quench(sol)
        violation = max(flux_imbalance(sol), max(abs(J0), abs(Ja)) / flux_scale(sol))
        weakest = min(weakest, violation)
    ok = bool(states) and worst < 1e-10 and weakest > 1e-3
    report(6, "bound-state conditions", ok, f"{len(states)} states worst {worst:.1e}; off-spectrum min violation {weakest:.2e}")


def test_criterion_07_boundary_selection():
    sets = [WellParams(1, 5, 1), WellParams(1, 7.3, 1), WellParams(1, 20, 1)]
    checked = 0
    bad = []
    for params in sets:
        for st in klein_bound_states(params, include_edges=False):
            with_sigma3 = verify_boundary_condition(st, params, "sigma3")
            plain = verify_boundary_condition(st, params, "plain")
            want = (True, False) if st.branch is Branch.K_QUANTIZED else (False, True)
            checked += 1
            if (with_sigma3, plain) != want:
                bad.append(f"V={params.V} {st.branch.value} n={st.n}")
    report(7, "boundary-condition selection", not bad, f"{checked} states over 3 wells" + (f", failed {bad}" if bad else ""))


def test_criterion_08_closed_form_vs_generic():
    params = WellParams(1, 5, 1)
    rng = np.random.default_rng(SEED + 8)
    worst = 0.0
    for E in rng.uniform(-4 + 1e-6, -1 - 1e-6, 100):
        cf = closed_form_coefficients(float(E), params)
        left = solve_left_incidence(float(E), params).coefficients
        right = solve_right_incidence(float(E), params).coefficients
        for key, got in (("A", left["A"]), ("B", left["B"]), ("A_hat", right["A_hat"]), ("B_hat", right["B_hat"])):
            worst = max(worst, abs(got - cf[key]) / abs(cf[key]))
    report(8, "closed form vs generic solve", worst < 1e-11, f"max rel diff {worst:.2e} over 100 energies")


def _row_samples():
    base = WellParams(1, 5, 1)
    wide = WellParams(1, 5, 10)
    levels = conventional_spectrum(wide)
    return {
        1: (base, [1.5, 3.0, 4.5]),
        2: (wide, [s.E for s in levels if s.E > 0][:3]),
        3: (wide, [s.E for s in levels if s.E < 0][:3]),
        4: (base, [-3.5, -2.5, -1.5]),
        5: (base, [-4.75, -4.5, -4.25]),
        6: (base, [-5.75, -5.5, -5.25]),
        7: (base, [-9.0, -7.5, -6.5]),
    }


def test_criterion_09_oracle_equivalence():
    worst_err = 0.0
    ratios = []
    for row, (params, energies) in _row_samples().items():
        assert len(energies) == 3 and all(classify(E, params).row == row for E in energies)
        for E in energies:
            sol = solve_regime(E, params)
            worst_err = max(worst_err, chained_check(sol).max_error)
            region = "inside" if sol.kin.osc_inside else "left"
            _, errs = convergence_study(sol, region)
            r = [a / b for a, b in zip(errs, errs[1:])]
            ratios.append(r)
    order_ok = all(all(12 <= x <= 20 for x in r) and abs(r[-1] - 16) <= 1.5 for r in ratios)
    final = [r[-1] for r in ratios]
    report(
        9,
        "RK4 oracle equivalence",
        worst_err < 1e-8 and order_ok,
        f"7 rows x 3 energies, max error {worst_err:.1e}, final halving ratios {min(final):.1f}..{max(final):.1f}",
    )


def test_criterion_10_analytic_residuals():
    params = WellParams(1, 5, 1)
    rng = np.random.default_rng(SEED + 10)
    worst = 0.0
    families = [
        BasisKind(region, character, sign, arrow)
        for region in Region
        for character in Character
        for arrow in Arrow
        for sign in (1, -1)
    ]
    for kind in families:
        E = family_energy(kind, params)
        for x in rng.uniform(-1, 1, 10):
            worst = max(worst, component_relation_residual(E, params, kind, x), second_order_residual(E, params, kind, x))
    report(10, "analytic residuals", worst < 1e-13, f"max residual {worst:.1e} over {len(families)} families x 10 points")


def test_criterion_11_current_conservation():
    params = WellParams(1, 5, 1)
    worst_flat = worst_wall = 0.0
    for E in (1.5, 3.0, 8.0, -1.5, -2.5, -3.5, -4.5, -5.5, -6.5, -10.0):
        for sol in (solve_left_incidence(E, params), solve_right_incidence(E, params)):
            prof = current_profile(sol, n_points=501)
            worst_flat = max(worst_flat, max(prof.spreads.values()))
            a = params.a
            worst_wall = max(
                worst_wall,
                abs(current(sol.piece("left", 0.0)) - current(sol.piece("inside", 0.0))),
                abs(current(sol.piece("inside", a)) - current(sol.piece("right", a))),
            )
    ok = worst_flat < 1e-10 and worst_wall < 1e-11
    report(11, "current conservation", ok, f"region spread {worst_flat:.1e}, wall jump {worst_wall:.1e}")


if __name__ == "__main__":
    import sys

    failed = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                failed += 1
    print("\n".join(RESULTS))
    sys.exit(1 if failed else 0)
