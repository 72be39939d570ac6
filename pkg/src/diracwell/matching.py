"""Wall matching: continuity of the spinor at x = 0 and x = a.

Every zone is solved the same way, as one 4x4 complex system in the
unknowns ``(left outgoing or tail, inside +, inside -, right outgoing or
tail)``.  The closed forms for the Klein zone are kept separately in
:func:`closed_form_coefficients` and serve as an independent check.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace

import numpy as np

from .basis import (
    Arrow,
    BasisKind,
    Character,
    Region,
    Spinor,
    basis_spinor,
    spinor_at,
    local_family,
    theta,
)
from .core import (
    DEFAULT_TOL,
    EnergyRegime,
    Kinematics,
    MismatchedEnergy,
    Regime,
    SingularMatching,
    EdgeEnergy,
    WellParams,
    WrongRegime,
    classify,
    kinematics,
)

SINGULAR_RTOL = 1e-12
CLOSED_FORM_DENOM_TOL = 1e-10


@dataclass(frozen=True)
class Ansatz:
    """Basis families used by one zone.

    For scattering zones ``left_incident`` travels toward +x and
    ``right_incident`` toward -x; for bound-type zones both are None and
    the outer unknowns are decaying tails.
    """

    left_out: BasisKind
    inside_plus: BasisKind
    inside_minus: BasisKind
    right_out: BasisKind
    left_incident: BasisKind | None = None
    right_incident: BasisKind | None = None

    @property
    def is_scattering(self) -> bool:
        return self.left_incident is not None


def ansatz_for(E: float, params: WellParams) -> Ansatz:
    m = params.m
    out_char, out_arrow = local_family(E, m)
    in_char, in_arrow = local_family(E + params.V, m)
    inside_plus = BasisKind(Region.INSIDE, in_char, 1, in_arrow)
    if out_char is Character.EVANESCENT:
        return Ansatz(
            left_out=theta(Region.OUTSIDE, 1, out_arrow),
            inside_plus=inside_plus,
            inside_minus=inside_plus.flipped(),
            right_out=theta(Region.OUTSIDE, -1, out_arrow),
        )
    forward = 1 if out_arrow is Arrow.UP else -1
    incident = BasisKind(Region.OUTSIDE, Character.OSCILLATORY, forward, out_arrow)
    return Ansatz(
        left_out=incident.flipped(),
        inside_plus=inside_plus,
        inside_minus=inside_plus.flipped(),
        right_out=incident,
        left_incident=incident,
        right_incident=incident.flipped(),
    )


Piece = tuple[complex, BasisKind]


def _merge(pieces) -> tuple[Piece, ...]:
    merged: dict[BasisKind, complex] = {}
    for coef, kind in pieces:
        merged[kind] = merged.get(kind, 0.0) + coef
    return tuple((c, k) for k, c in merged.items())


@dataclass(frozen=True)
class SolutionSet:
    """Coefficients and piecewise wavefunction for one energy.

    ``incidence`` is one of ``"left"``, ``"right"``, ``"superposed"`` or
    ``"bound"``.  Superposed solutions keep their two ingredients in
    ``parts``.  Right-region basis functions are evaluated at
    ``x - right_origin``; bound states use ``right_origin = a`` so that a
    steep tail does not underflow at the wall.
    """

    regime: EnergyRegime
    E: float
    params: WellParams
    kin: Kinematics
    coefficients: dict
    left: tuple[Piece, ...]
    inside: tuple[Piece, ...]
    right: tuple[Piece, ...]
    incidence: str
    parts: tuple["SolutionSet", "SolutionSet"] | None = None
    residual: float | None = None
    right_origin: float = 0.0

    def piece(self, region: str, x) -> Spinor:
        """Evaluate one region's expansion at x, regardless of where x lies."""
        terms = {"left": self.left, "inside": self.inside, "right": self.right}[region]
        x = np.asarray(x, dtype=float)
        if region == "right":
            x = x - self.right_origin
        out = np.zeros((2,) + x.shape, dtype=complex)
        for coef, kind in terms:
            out += coef * basis_spinor(kind, x, self.kin)
        return out

    def __call__(self, x) -> Spinor:
        x = np.asarray(x, dtype=float)
        a = self.params.a
        out = self.piece("inside", x)
        left = x < 0
        right = x > a
        if left.any():
            out[:, left] = self.piece("left", x[left])
        if right.any():
            out[:, right] = self.piece("right", x[right])
        return out

    def wall_mismatch(self) -> float:
        a = self.params.a
        d0 = self.piece("left", 0.0) - self.piece("inside", 0.0)
        da = self.piece("inside", a) - self.piece("right", a)
        return float(max(np.abs(d0).max(), np.abs(da).max()))

    @property
    def inside_amplitudes(self) -> tuple[complex, complex]:
        c = self.coefficients
        if "AA" in c:
            return c["AA"], c["BB"]
        if "A" in c:
            return c["A"], c["B"]
        return c["A_hat"], c["B_hat"]

    def scaled(self, factor: complex) -> "SolutionSet":
        def sc(pieces):
            return tuple((factor * c, k) for c, k in pieces)

        parts = None
        if self.parts is not None:
            parts = tuple(p.scaled(factor) for p in self.parts)
        return replace(
            self,
            coefficients={n: factor * v for n, v in self.coefficients.items()},
            left=sc(self.left),
            inside=sc(self.inside),
            right=sc(self.right),
            parts=parts,
        )

    def normalized(self, total: float = 1.0) -> "SolutionSet":
        """Rescale so that the inside amplitudes obey ``|A|^2 + |B|^2 = total``."""
        A, B = self.inside_amplitudes
        norm2 = abs(A) ** 2 + abs(B) ** 2
        if norm2 == 0:
            return self
        return self.scaled(math.sqrt(total / norm2))


@dataclass(frozen=True)
class NoBoundState:
    """Returned by :func:`solve_regime` when a bound-type zone has no state at E."""

    E: float
    regime: EnergyRegime
    determinant: float
    residual: float


def _resolve(E: float, params: WellParams, kin: Kinematics | None):
    regime = classify(E, params)
    if regime.is_edge:
        raise EdgeEnergy(f"E={E!r} lies on the zone edge {regime.edge!r}")
    if kin is None:
        kin = kinematics(E, params)
    return regime, kin


def continuity_matrix(
    E: float, params: WellParams, kin: Kinematics | None = None, ansatz: Ansatz | None = None
) -> np.ndarray:
    if kin is None:
        kin = kinematics(E, params)
    if ansatz is None:
        ansatz = ansatz_for(E, params)
    a = params.a
    # decaying tails are referenced to their own wall
    right_x = 0.0 if not ansatz.is_scattering else a
    M = np.zeros((4, 4), dtype=complex)
    M[0:2, 0] = spinor_at(ansatz.left_out, 0.0, kin)
    M[0:2, 1] = spinor_at(ansatz.inside_plus, 0.0, kin)
    M[0:2, 2] = spinor_at(ansatz.inside_minus, 0.0, kin)
    M[2:4, 1] = spinor_at(ansatz.inside_plus, a, kin)
    M[2:4, 2] = spinor_at(ansatz.inside_minus, a, kin)
    M[2:4, 3] = spinor_at(ansatz.right_out, right_x, kin)
    M[0:2, 1:3] *= -1
    M[2:4, 3] *= -1
    return M


def continuity_determinant(E: float, params: WellParams, kin: Kinematics | None = None) -> complex:
    return complex(np.linalg.det(continuity_matrix(E, params, kin)))


def determinant_surrogate(E: float, params: WellParams, kin: Kinematics | None = None) -> float:
    """Real-valued version of the continuity determinant for bound-type zones.

    Swapping the inside pair ``exp(+-ipx)`` for the real pair (sum,
    difference / i) multiplies the determinant by ``2i``; with evanescent
    tails outside the result is then real and changes sign at bound states.
    """
    if kin is None:
        kin = kinematics(E, params)
    det = continuity_determinant(E, params, kin)
    if kin.osc_inside:
        det *= 2j
    return det.real


def _relative_det(M: np.ndarray) -> float:
    scale = float(np.prod(np.linalg.norm(M, axis=0)))
    return abs(np.linalg.det(M)) / scale if scale else 0.0


def _scattering_solve(E, params, kin, rhs_side: str) -> tuple[np.ndarray, Ansatz]:
    ansatz = ansatz_for(E, params)
    if not ansatz.is_scattering:
        raise WrongRegime(f"E={E!r} has no propagating waves outside the well")
    M = continuity_matrix(E, params, kin, ansatz)
    rel = _relative_det(M)
    if rel < SINGULAR_RTOL:
        raise SingularMatching(f"continuity system singular at E={E!r} (relative det {rel:.3e})")
    rhs = np.zeros(4, dtype=complex)
    if rhs_side == "left":
        rhs[0:2] = -basis_spinor(ansatz.left_incident, 0.0, kin)
    else:
        rhs[2:4] = basis_spinor(ansatz.right_incident, params.a, kin)
    return np.linalg.solve(M, rhs), ansatz


def solve_left_incidence(
    E: float, params: WellParams, kin: Kinematics | None = None
) -> SolutionSet:
    """Unit-amplitude wave incident from the left: reflected R, inside A, B, transmitted T."""
    regime, kin = _resolve(E, params, kin)
    (R, A, B, T), ans = _scattering_solve(E, params, kin, "left")
    return SolutionSet(
        regime=regime,
        E=E,
        params=params,
        kin=kin,
        coefficients={"R": R, "A": A, "B": B, "T": T},
        left=((1.0 + 0j, ans.left_incident), (R, ans.left_out)),
        inside=((A, ans.inside_plus), (B, ans.inside_minus)),
        right=((T, ans.right_out),),
        incidence="left",
    )


def solve_right_incidence(
    E: float, params: WellParams, kin: Kinematics | None = None
) -> SolutionSet:
    """Mirror of :func:`solve_left_incidence`; the incident wave has unit amplitude at x = 0."""
    regime, kin = _resolve(E, params, kin)
    (T_hat, A_hat, B_hat, R_hat), ans = _scattering_solve(E, params, kin, "right")
    return SolutionSet(
        regime=regime,
        E=E,
        params=params,
        kin=kin,
        coefficients={"R_hat": R_hat, "A_hat": A_hat, "B_hat": B_hat, "T_hat": T_hat},
        left=((T_hat, ans.left_out),),
        inside=((A_hat, ans.inside_plus), (B_hat, ans.inside_minus)),
        right=((1.0 + 0j, ans.right_incident), (R_hat, ans.right_out)),
        incidence="right",
    )


def superpose(left: SolutionSet, right: SolutionSet) -> SolutionSet:
    """Sum of left- and right-incidence solutions at the same energy."""
    if left.params != right.params:
        raise MismatchedEnergy("solutions belong to different wells")
    if abs(left.E - right.E) > 1e-15 * max(abs(left.E), abs(right.E), 1e-300):
        raise MismatchedEnergy(f"energies differ: {left.E!r} vs {right.E!r}")
    cl, cr = left.coefficients, right.coefficients
    coefficients = dict(cl)
    coefficients.update(cr)
    coefficients["AA"] = cl.get("A", 0j) + cr.get("A_hat", 0j)
    coefficients["BB"] = cl.get("B", 0j) + cr.get("B_hat", 0j)
    return SolutionSet(
        regime=left.regime,
        E=left.E,
        params=left.params,
        kin=left.kin,
        coefficients=coefficients,
        left=_merge(left.left + right.left),
        inside=_merge(left.inside + right.inside),
        right=_merge(left.right + right.right),
        incidence="superposed",
        parts=(left, right),
    )


def closed_form_coefficients(
    E: float, params: WellParams, kin: Kinematics | None = None
) -> dict[str, complex]:
    """Explicit inside amplitudes A, B (left incidence) and A_hat, B_hat (right incidence).

    Valid in the Klein zone, where the outside waves have negative and the
    inside waves positive energy.
    """
    regime, kin = _resolve(E, params, kin)
    if regime.tag is not Regime.KLEIN_ZONE:
        raise WrongRegime(f"closed forms hold in the Klein zone only, E={E!r} is {regime}")
    a = params.a
    k, p, al, be = kin.k, kin.p, kin.alpha, kin.beta
    ab = al * be
    r = (ab - 1) / (ab + 1)
    e2 = cmath.exp(2j * p * a)
    denom = e2 * r * r - 1
    if abs(denom) < CLOSED_FORM_DENOM_TOL:
        raise SingularMatching(f"closed-form denominator {abs(denom):.3e} at E={E!r}")
    pref = 2j * al / (ab + 1) * math.sqrt((1 + be * be) / (1 + al * al)) / denom
    A = pref
    B = r * e2 * A
    B_hat = -pref * cmath.exp(1j * (k + p) * a)
    A_hat = r * B_hat
    return {"A": A, "B": B, "A_hat": A_hat, "B_hat": B_hat}


def _solve_bound(E, params, kin, regime, tol):
    ans = ansatz_for(E, params)
    M = continuity_matrix(E, params, kin, ans)
    _, s, vh = np.linalg.svd(M)
    residual = float(s[-1] / s[0])
    if residual > tol:
        return NoBoundState(E, regime, determinant_surrogate(E, params, kin), residual)
    v = vh[-1].conj()
    pivot = v[0] if abs(v[0]) > 1e-8 * np.abs(v).max() else v[np.argmax(np.abs(v))]
    C, A, B, D = v / pivot
    return SolutionSet(
        regime=regime,
        E=E,
        params=params,
        kin=kin,
        coefficients={"C": C, "A": A, "B": B, "D": D},
        left=((C, ans.left_out),),
        inside=((A, ans.inside_plus), (B, ans.inside_minus)),
        right=((D, ans.right_out),),
        incidence="bound",
        residual=residual,
        right_origin=params.a,
    )


def solve_regime(
    E: float,
    params: WellParams,
    kin: Kinematics | None = None,
    bound_tol: float = DEFAULT_TOL.bound_residual,
) -> SolutionSet | NoBoundState:
    """Solve the ansatz of whichever zone E falls in.

    Above +m: left incidence.  Bound-type zones: the decaying-tail solution
    if E is (within ``bound_tol``) a bound state, else :class:`NoBoundState`.
    Below -m: the superposition of left and right incidence.
    """
    regime, kin = _resolve(E, params, kin)
    if regime.tag is Regime.SCATTER_ABOVE:
        return solve_left_incidence(E, params, kin)
    if regime.tag.is_bound_type:
        return _solve_bound(E, params, kin, regime, bound_tol)
    return superpose(solve_left_incidence(E, params, kin), solve_right_incidence(E, params, kin))
