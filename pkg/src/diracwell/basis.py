"""Spinor basis families inside and outside the well.

A spinor is a complex array whose leading axis holds ``(psi_plus,
psi_minus)``; evaluating a family on an array of positions gives shape
``(2, *x.shape)``.

Family naming follows phi/theta (oscillatory/evanescent), superscript
+/- (inside/outside), subscript sign of the exponent, and an arrow for the
sign of the local energy.  The incident wave of a negative-energy beam
coming from the left, ``(-i alpha, 1) exp(-ikx)``, is the outside family
``phi_{-,down}``; its reflection ``(i alpha, 1) exp(ikx)`` is
``phi_{+,down}``.
"""
from __future__ import annotations

import cmath
import enum
from dataclasses import dataclass

import numpy as np

from .core import Kinematics

Spinor = np.ndarray


def spinor(upper: complex, lower: complex) -> Spinor:
    return np.array([upper, lower], dtype=complex)


class Region(enum.Enum):
    INSIDE = "+"
    OUTSIDE = "-"


class Character(enum.Enum):
    OSCILLATORY = "φ"
    EVANESCENT = "θ"


class Arrow(enum.Enum):
    UP = "↑"
    DOWN = "↓"


class Direction(enum.Enum):
    PLUS_X = "+x"
    MINUS_X = "-x"
    NONE = "none"


_SUPER = {Region.INSIDE: "⁺", Region.OUTSIDE: "⁻"}
_SUB = {1: "₊", -1: "₋"}


@dataclass(frozen=True)
class BasisKind:
    region: Region
    character: Character
    sign: int
    arrow: Arrow

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError(f"sign must be +1 or -1, got {self.sign!r}")

    @property
    def label(self) -> str:
        return f"{self.character.value}{_SUPER[self.region]}{_SUB[self.sign]}{self.arrow.value}"

    def flipped(self) -> "BasisKind":
        return BasisKind(self.region, self.character, -self.sign, self.arrow)

    def __str__(self) -> str:
        return self.label


def phi(region: Region, sign: int, arrow: Arrow) -> BasisKind:
    return BasisKind(region, Character.OSCILLATORY, sign, arrow)


def theta(region: Region, sign: int, arrow: Arrow) -> BasisKind:
    return BasisKind(region, Character.EVANESCENT, sign, arrow)


def local_family(local_energy: float, m: float) -> tuple[Character, Arrow]:
    """Character and energy arrow appropriate for a local kinetic energy.

    ``local_energy`` is ``E`` outside and ``E + V`` inside.
    """
    character = Character.OSCILLATORY if abs(local_energy) > m else Character.EVANESCENT
    arrow = Arrow.UP if local_energy >= 0 else Arrow.DOWN
    return character, arrow


def _wave_data(kind: BasisKind, kin: Kinematics) -> tuple[complex, complex, complex]:
    """Return (upper, lower, exponent rate) before normalization."""
    if kind.region is Region.OUTSIDE:
        q, ratio = kin.k, kin.alpha
    else:
        # beta is not symmetric in E+V; the down families take beta_down
        # or they fail to solve the Dirac equation for E+V < 0.
        q = kin.p
        ratio = kin.beta if kind.arrow is Arrow.UP else kin.beta_down
        if kind.sign > 0:
            ratio *= 1.0 + kin.beta_skew
    s = kind.sign
    if kind.character is Character.OSCILLATORY:
        off = s * 1j * ratio
        rate = s * 1j * q
    else:
        off = s * ratio
        rate = s * q
    if kind.arrow is Arrow.UP:
        upper, lower = 1.0, off
    else:
        upper, lower = off, 1.0
    norm = np.sqrt(1.0 + ratio * ratio)
    return upper / norm, lower / norm, rate


def basis_spinor(kind: BasisKind, x, kin: Kinematics) -> Spinor:
    upper, lower, rate = _wave_data(kind, kin)
    x = np.asarray(x, dtype=float)
    wave = np.exp(rate * x)
    return np.stack([upper * wave, lower * wave]).astype(complex)


def spinor_at(kind: BasisKind, x: float, kin: Kinematics) -> tuple[complex, complex]:
    """Scalar fast path of :func:`basis_spinor` for a single point."""
    upper, lower, rate = _wave_data(kind, kin)
    wave = cmath.exp(rate * x)
    return upper * wave, lower * wave


def basis_derivative(kind: BasisKind, x, kin: Kinematics, order: int = 1) -> Spinor:
    """Analytic ``order``-th derivative in x of a basis spinor."""
    _, _, rate = _wave_data(kind, kin)
    return rate**order * basis_spinor(kind, x, kin)


def phase_velocity_direction(kind: BasisKind) -> Direction:
    """Propagation direction of an oscillatory family.

    ``exp(+iqx)`` moves toward +x for positive energy and toward -x for
    negative energy.
    """
    if kind.character is Character.EVANESCENT:
        return Direction.NONE
    forward = kind.sign if kind.arrow is Arrow.UP else -kind.sign
    return Direction.PLUS_X if forward > 0 else Direction.MINUS_X
