"""Well parameters, energy zones and the kinematic map.

Natural units (hbar = c = 1) throughout.  The potential is an attractive
square well of depth ``V`` on ``[0, a]``: ``V(x) = -V`` inside, zero outside,
entering the Dirac equation as the time component of a vector.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, fields, replace

EDGE_RTOL = 1e-12


class DiracWellError(Exception):
    """Base class for all errors raised by this package."""


class InvalidParams(DiracWellError, ValueError):
    pass


class EdgeEnergy(DiracWellError):
    """Energy sits on a zone boundary where a wave number vanishes."""


class SingularMatching(DiracWellError):
    """The wall-continuity system is (numerically) singular."""


class NoKleinZone(DiracWellError):
    pass


class WrongRegime(DiracWellError):
    pass


class MismatchedEnergy(DiracWellError):
    pass


class StepTooCoarse(DiracWellError):
    pass


@dataclass(frozen=True)
class Tolerances:
    """Default tolerance block; the CLI can override it from ``DIRACWELL_TOL``."""

    edge: float = 1e-12
    unitarity: float = 1e-12
    continuity: float = 1e-12
    closed_form: float = 1e-11
    bound_residual: float = 1e-9
    flux: float = 1e-10
    boundary_condition: float = 1e-9
    oracle: float = 1e-8
    richardson: float = 1e-8
    residual: float = 1e-13
    current: float = 1e-10
    current_wall: float = 1e-11
    root: float = 1e-10

    def override(self, text: str) -> "Tolerances":
        """Return a copy updated from ``"name=value,name=value"``."""
        known = {f.name for f in fields(self)}
        updates = {}
        for item in filter(None, (s.strip() for s in text.split(","))):
            name, sep, value = item.partition("=")
            name = name.strip()
            if not sep or name not in known:
                raise InvalidParams(f"bad tolerance override {item!r}")
            updates[name] = float(value)
        return replace(self, **updates)


DEFAULT_TOL = Tolerances()


@dataclass(frozen=True)
class WellParams:
    m: float
    V: float
    a: float
    has_klein_zone: bool = field(init=False)

    def __post_init__(self):
        for name in ("m", "V", "a"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise InvalidParams(f"{name} must be finite and > 0, got {value!r}")
        object.__setattr__(self, "has_klein_zone", self.V > 2 * self.m)

    def potential(self, x: float) -> float:
        return -self.V if 0.0 <= x <= self.a else 0.0

    @property
    def edges(self) -> tuple[float, ...]:
        """The six zone-boundary energies, in decreasing order when V > 2m."""
        m, V = self.m, self.V
        return (m, 0.0, -m, -V + m, -V, -V - m)

    @property
    def klein_zone(self) -> tuple[float, float] | None:
        """Open interval ``(-V + m, -m)`` or None when it is empty."""
        if not self.has_klein_zone:
            return None
        return (-self.V + self.m, -self.m)

    def to_dict(self) -> dict:
        return {"m": self.m, "V": self.V, "a": self.a}


class Regime(enum.Enum):
    SCATTER_ABOVE = 1
    BOUND_UPPER = 2
    BOUND_LOWER = 3
    KLEIN_ZONE = 4
    EVANESCENT_INSIDE = 5
    EVANESCENT_INSIDE_LOWER = 6
    SCATTER_BELOW = 7
    EDGE = 0

    @property
    def row(self) -> int | None:
        return self.value or None

    @property
    def is_bound_type(self) -> bool:
        return self in (Regime.BOUND_UPPER, Regime.BOUND_LOWER)


ROW_LABELS = {
    Regime.SCATTER_ABOVE: "E > +m",
    Regime.BOUND_UPPER: "+m > E > 0",
    Regime.BOUND_LOWER: "0 > E > -m",
    Regime.KLEIN_ZONE: "-m > E > -V+m",
    Regime.EVANESCENT_INSIDE: "-V+m > E > -V",
    Regime.EVANESCENT_INSIDE_LOWER: "-V > E > -V-m",
    Regime.SCATTER_BELOW: "E < -V-m",
}


@dataclass(frozen=True)
class EnergyRegime:
    tag: Regime
    edge: float | None = None

    @property
    def row(self) -> int | None:
        return self.tag.row

    @property
    def is_edge(self) -> bool:
        return self.tag is Regime.EDGE

    def __str__(self) -> str:
        if self.is_edge:
            return f"Edge({self.edge:g})"
        return self.tag.name


def _near(x: float, y: float, tol: float) -> bool:
    return abs(x - y) <= tol


def classify(E: float, params: WellParams, tol: float = EDGE_RTOL) -> EnergyRegime:
    """Map an energy onto its solution zone.

    The zone is fixed by the local kinetic energies outside (``E``) and
    inside (``E + V``).  For ``V > 2m`` this reproduces the seven ordered
    intervals exactly; for shallower wells the Klein zone is empty and the
    below-``-m`` energies fall into the inside-evanescent or scatter-below
    zones according to ``E + V``.
    """
    m = params.m
    atol = tol * m
    for edge in params.edges:
        if _near(E, edge, atol):
            return EnergyRegime(Regime.EDGE, edge)
    eps = E + params.V
    if E > m:
        return EnergyRegime(Regime.SCATTER_ABOVE)
    if E > 0:
        return EnergyRegime(Regime.BOUND_UPPER)
    if E > -m:
        return EnergyRegime(Regime.BOUND_LOWER)
    if eps > m:
        return EnergyRegime(Regime.KLEIN_ZONE)
    if eps > 0:
        return EnergyRegime(Regime.EVANESCENT_INSIDE)
    if eps > -m:
        return EnergyRegime(Regime.EVANESCENT_INSIDE_LOWER)
    return EnergyRegime(Regime.SCATTER_BELOW)


@dataclass(frozen=True)
class Kinematics:
    """Wave numbers and spinor ratios at one energy.

    ``k``/``alpha`` refer to the outside, ``p``/``beta`` to the inside.
    ``beta_down`` is the inside ratio used by the negative-energy (down)
    families: it takes ``|E+V|`` the way ``alpha`` takes ``|E|``, so it
    equals ``beta`` for ``E+V > 0`` and ``1/beta`` for ``E+V < 0``.
    """

    k: float
    p: float
    alpha: float
    beta: float
    osc_outside: bool
    osc_inside: bool
    beta_down: float | None = None
    beta_skew: float = 0.0  # relative error on the +p inside waves only; fault injection

    def __post_init__(self):
        if self.beta_down is None:
            object.__setattr__(self, "beta_down", self.beta)

    def perturbed(self, rel: float) -> "Kinematics":
        """Copy whose forward inside waves use a ratio off by ``1 + rel``.

        Scaling every inside ratio alike leaves the current conserved (the
        cross terms still cancel), so the fault is applied to one partial
        wave only, which is what a sign or transcription slip looks like.
        """
        return replace(self, beta_skew=rel)


def kinematics(E: float, params: WellParams, tol: float = EDGE_RTOL) -> Kinematics:
    m, V = params.m, params.V
    eps = E + V
    atol = tol * m
    if _near(abs(E), m, atol):
        raise EdgeEnergy(f"|E| = m at E={E!r}: outside wave number vanishes")
    if _near(abs(eps), m, atol):
        raise EdgeEnergy(f"|E+V| = m at E={E!r}: inside wave number vanishes")
    k = math.sqrt(abs(E * E - m * m))
    p = math.sqrt(abs(eps * eps - m * m))
    alpha = math.sqrt(abs((abs(E) - m) / (abs(E) + m)))
    beta = math.sqrt(abs((eps - m) / (eps + m)))
    beta_down = math.sqrt(abs((abs(eps) - m) / (abs(eps) + m)))
    return Kinematics(
        k=k,
        p=p,
        alpha=alpha,
        beta=beta,
        osc_outside=abs(E) > m,
        osc_inside=abs(eps) > m,
        beta_down=beta_down,
    )
