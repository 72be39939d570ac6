import math

import numpy as np
import pytest

from diracwell import NoBoundState, WellParams, ansatz_string, classify, full_solution, sweep
from diracwell.table import COLUMNS


def test_row_seven_ansatz(well):
    sol = full_solution(-6.5, well)
    assert sol.regime.row == 7
    assert {k.label for _, k in sol.inside} == {"φ⁺₊↓", "φ⁺₋↓"}


def test_row_six_ansatz(well):
    sol = full_solution(-5.5, well)
    assert sol.regime.row == 6
    assert {k.label for _, k in sol.inside} == {"θ⁺₊↓", "θ⁺₋↓"}


def test_row_two_tails(well):
    assert ansatz_string(0.5, well) == "Cθ⁻₊↑ | Aφ⁺₊↑+Bφ⁺₋↑ | Dθ⁻₋↑"
    assert isinstance(full_solution(0.5, well), NoBoundState)


@pytest.mark.parametrize(
    "E, text",
    [
        (2.0, "φ⁻₊↑+Rφ⁻₋↑ | Aφ⁺₊↑+Bφ⁺₋↑ | Tφ⁻₊↑"),
        (-0.5, "Cθ⁻₊↓ | Aφ⁺₊↑+Bφ⁺₋↑ | Dθ⁻₋↓"),
        (-2.0, "φ⁻₋↓+Rφ⁻₊↓ ; T̂φ⁻₊↓ | 𝔸φ⁺₊↑+𝔹φ⁺₋↑ | Tφ⁻₋↓ ; φ⁻₊↓+R̂φ⁻₋↓"),
        (-4.5, "φ⁻₋↓+Rφ⁻₊↓ ; T̂φ⁻₊↓ | 𝔸θ⁺₊↑+𝔹θ⁺₋↑ | Tφ⁻₋↓ ; φ⁻₊↓+R̂φ⁻₋↓"),
        (-6.5, "φ⁻₋↓+Rφ⁻₊↓ ; T̂φ⁻₊↓ | 𝔸φ⁺₊↓+𝔹φ⁺₋↓ | Tφ⁻₋↓ ; φ⁻₊↓+R̂φ⁻₋↓"),
        (-1.0, "Edge(-1)"),
    ],
)
def test_ansatz_strings(well, E, text):
    assert ansatz_string(E, well) == text


def test_sweep_finds_klein_roots(well):
    res = sweep(well, -4.0, -1.0, 4001)
    kc = res.values["klein_condition"]
    E = res.energies
    ok = ~np.isnan(kc)
    E, kc = E[ok], kc[ok]
    flips = E[:-1][np.sign(kc[:-1]) != np.sign(kc[1:])]
    assert len(flips) == 2
    assert abs(flips[0] - (-math.sqrt(1 + math.pi**2))) < 1e-3
    assert abs(flips[1] - (-5 + math.sqrt(1 + math.pi**2))) < 1e-3


def test_sweep_unitarity(well):
    res = sweep(well, 1.0001, 10.0, 2001)
    assert np.abs(res.values["RT_sum"] - 1).max() < 1e-12


def test_two_points(well):
    res = sweep(well, 2.0, 3.0, 2)
    assert list(res.energies) == [2.0, 3.0]
    assert len(res.records()) == 2


def test_sweep_rejects_bad_grid(well):
    with pytest.raises(ValueError):
        sweep(well, 3.0, 2.0, 10)
    with pytest.raises(ValueError):
        sweep(well, 2.0, 3.0, 1)


def test_edges_nudged_or_kept(well):
    res = sweep(well, -2.0, 0.0, 3)
    assert res.metadata["nudged"] == [{"from": -1.0, "to": -0.5}, {"from": 0.0, "to": -0.5}]
    kept = sweep(well, -2.0, 0.0, 3, include_edges=True)
    assert kept.regimes[1] == "Edge(-1)"
    assert kept.records()[1]["det_abs"] is None


def test_dispatch_matches_classify_and_is_deterministic(well):
    a = sweep(well, -8.0, 3.0, 997)
    b = sweep(well, -8.0, 3.0, 997)
    for E, r in zip(a.energies, a.regimes):
        assert r == str(classify(float(E), well))
    assert a.regimes == b.regimes
    for name in COLUMNS[2:]:
        assert np.array_equal(a.values[name], b.values[name], equal_nan=True)


def test_columns_per_zone(well):
    rec = {r["regime"]: r for r in sweep(well, -7.0, 3.0, 11).records()}
    assert rec["SCATTER_ABOVE"]["AA2"] is None
    assert rec["KLEIN_ZONE"]["klein_condition"] is not None
    assert rec["BOUND_UPPER"]["det_surrogate"] is not None
    assert rec["BOUND_UPPER"]["R2"] is None


def test_determinant_surrogate_changes_sign_at_level(well):
    E0 = 0.0072321001194568186
    lo = sweep(well, E0 - 1e-3, E0 - 1e-4, 2).values["det_surrogate"]
    hi = sweep(well, E0 + 1e-4, E0 + 1e-3, 2).values["det_surrogate"]
    assert np.sign(lo[0]) == np.sign(lo[1]) != np.sign(hi[0]) == np.sign(hi[1])


def test_non_klein_well():
    res = sweep(WellParams(1, 1.5, 1), -4.0, 2.0, 61)
    assert all(r != "KLEIN_ZONE" for r in res.regimes)
