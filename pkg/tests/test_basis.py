import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from diracwell import (
    Arrow,
    BasisKind,
    Character,
    Direction,
    Kinematics,
    Region,
    WellParams,
    basis_derivative,
    basis_spinor,
    kinematics,
    phase_velocity_direction,
    phi,
    theta,
)
from diracwell.basis import local_family
from diracwell.oracle import dirac_residual

ALL_FAMILIES = [
    BasisKind(region, character, sign, arrow)
    for region in Region
    for character in Character
    for arrow in Arrow
    for sign in (1, -1)
]

# local energy picking each (character, arrow) family for m = 1
LOCAL = {
    (Character.OSCILLATORY, Arrow.UP): 2.0,
    (Character.EVANESCENT, Arrow.UP): 0.5,
    (Character.EVANESCENT, Arrow.DOWN): -0.5,
    (Character.OSCILLATORY, Arrow.DOWN): -2.0,
}


def energy_for(kind, V):
    e = LOCAL[(kind.character, kind.arrow)]
    return e - V if kind.region is Region.INSIDE else e


def kin_with(alpha=0.5, beta=0.5):
    return Kinematics(k=1.0, p=1.0, alpha=alpha, beta=beta, osc_outside=True, osc_inside=True)


def test_phi_outside_up_at_origin():
    s = basis_spinor(phi(Region.OUTSIDE, 1, Arrow.UP), 0.0, kin_with(alpha=math.sqrt(1 / 3)))
    assert s[0] == pytest.approx(0.8660254037844386, abs=1e-15)
    assert s[1] == pytest.approx(0.5j, abs=1e-15)
    assert abs(s[0]) ** 2 + abs(s[1]) ** 2 == pytest.approx(1.0, abs=1e-15)


@pytest.mark.parametrize("alpha", [0.1, 0.7, 3.0])
def test_theta_outside_minus_up_at_origin(alpha):
    s = basis_spinor(theta(Region.OUTSIDE, -1, Arrow.UP), 0.0, kin_with(alpha=alpha))
    norm = math.sqrt(1 + alpha * alpha)
    assert s[0] == pytest.approx(1 / norm)
    assert s[1] == pytest.approx(-alpha / norm)
    assert np.linalg.norm(s) == pytest.approx(1.0)


def test_phi_inside_minus_down_at_origin():
    s = basis_spinor(phi(Region.INSIDE, -1, Arrow.DOWN), 0.0, kin_with(beta=math.sqrt(0.5)))
    assert s[0] == pytest.approx(-0.5773502691896258j, abs=1e-15)
    assert s[1] == pytest.approx(0.816496580927726, abs=1e-15)


@pytest.mark.parametrize(
    "kind, direction",
    [
        (phi(Region.OUTSIDE, 1, Arrow.UP), Direction.PLUS_X),
        (phi(Region.OUTSIDE, 1, Arrow.DOWN), Direction.MINUS_X),
        (phi(Region.OUTSIDE, -1, Arrow.UP), Direction.MINUS_X),
        (phi(Region.OUTSIDE, -1, Arrow.DOWN), Direction.PLUS_X),
        (theta(Region.OUTSIDE, 1, Arrow.UP), Direction.NONE),
    ],
)
def test_phase_velocity_direction(kind, direction):
    assert phase_velocity_direction(kind) is direction


def test_labels_and_flip():
    kind = phi(Region.OUTSIDE, 1, Arrow.UP)
    assert kind.label == "φ⁻₊↑"
    assert kind.flipped().label == "φ⁻₋↑"
    assert theta(Region.INSIDE, -1, Arrow.DOWN).label == "θ⁺₋↓"


@pytest.mark.parametrize(
    "e, family",
    [
        (2.0, (Character.OSCILLATORY, Arrow.UP)),
        (0.5, (Character.EVANESCENT, Arrow.UP)),
        (-0.5, (Character.EVANESCENT, Arrow.DOWN)),
        (-2.0, (Character.OSCILLATORY, Arrow.DOWN)),
    ],
)
def test_local_family(e, family):
    assert local_family(e, 1.0) == family


@pytest.mark.parametrize("kind", ALL_FAMILIES, ids=lambda k: k.label)
def test_unit_norm(kind, well):
    kin = kinematics(energy_for(kind, well.V), well)
    s0 = basis_spinor(kind, 0.0, kin)
    assert np.linalg.norm(s0) == pytest.approx(1.0, abs=1e-15)
    if kind.character is Character.OSCILLATORY:
        x = np.linspace(-3, 3, 13)
        assert np.allclose(np.linalg.norm(basis_spinor(kind, x, kin), axis=0), 1.0, atol=1e-14)


@pytest.mark.parametrize("kind", ALL_FAMILIES, ids=lambda k: k.label)
def test_dirac_equation_residual(kind, well):
    x = np.linspace(-1.0, 1.0, 41)
    assert dirac_residual(energy_for(kind, well.V), well, kind, x) < 1e-12


@pytest.mark.parametrize("kind", [k for k in ALL_FAMILIES if k.region is Region.OUTSIDE], ids=lambda k: k.label)
def test_component_relation_by_central_difference(kind, well):
    E = energy_for(kind, well.V)
    kin = kinematics(E, well)
    h = 1e-5
    for x in (-0.7, 0.0, 0.4):
        d = (basis_spinor(kind, x + h, kin) - basis_spinor(kind, x - h, kin)) / (2 * h)
        psi = basis_spinor(kind, x, kin)
        # psi- = psi+' / (m + E) and psi+ = psi-' / (m - E) both hold outside
        assert abs(psi[1] - d[0] / (1 + E)) < 1e-8
        assert abs(psi[0] - d[1] / (1 - E)) < 1e-8


def test_derivative_orders(well):
    kind = phi(Region.INSIDE, 1, Arrow.UP)
    kin = kinematics(-2.0, well)
    x = 0.3
    d2 = basis_derivative(kind, x, kin, order=2)
    assert np.allclose(d2, -(kin.p**2) * basis_spinor(kind, x, kin))


@given(
    V=st.floats(min_value=0.5, max_value=30),
    e=st.sampled_from(list(LOCAL.items())),
    x=st.floats(min_value=-2, max_value=2),
)
def test_dirac_residual_property(V, e, x):
    params = WellParams(1.0, V, 1.0)
    (character, arrow), local = e
    for region in Region:
        E = local - V if region is Region.INSIDE else local
        other = E if region is Region.INSIDE else E + V
        # skip when the other region sits on an edge
        if abs(abs(other) - 1.0) < 1e-6:
            continue
        for sign in (1, -1):
            kind = BasisKind(region, character, sign, arrow)
            scale = max(1.0, float(np.abs(basis_spinor(kind, x, kinematics(E, params))).max()))
            assert dirac_residual(E, params, kind, x) < 1e-12 * scale * max(1.0, V)
