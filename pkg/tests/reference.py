"""Independent reference calculations in extended precision.

Nothing here imports the package.  Every region has a constant potential,
so the Dirac system can be propagated across the well with the exact 2x2
transfer matrix of the real first-order ODE

    psi+' = (m + e) psi-,   psi-' = (m - e) psi+,   e = E - U,

and bound states and scattering amplitudes follow from elementary
boundary conditions on the outside solutions.
"""
from __future__ import annotations

import mpmath as mp

mp.mp.dps = 40


def transfer(E, m, V, a):
    """Matrix taking (psi+, psi-) at x = 0 to x = a inside the well."""
    e = mp.mpf(E) + V
    q = mp.sqrt(mp.mpc(e * e - m * m))
    c = mp.cos(q * a)
    s = mp.sin(q * a) / q if q != 0 else mp.mpf(a)
    return mp.matrix([[c, (m + e) * s], [(m - e) * s, c]])


def bound_condition(E, m, V, a):
    """Real function vanishing at bound states with ``|E| < m``.

    Left tail ``exp(kx)`` fixes psi-/psi+ = k/(m+E) at x=0; the right tail
    ``exp(-kx)`` requires psi-/psi+ = -k/(m+E) at x=a.
    """
    E = mp.mpf(E)
    k = mp.sqrt(m * m - E * E)
    T = transfer(E, m, V, a)
    psi = T * mp.matrix([m + E, k])
    return mp.re(k * psi[0] + (m + E) * psi[1])


def bound_roots(m, V, a, n_grid=4000):
    """All zeros of :func:`bound_condition` on ``(-m, m)``, by scan plus refinement."""
    lo, hi = -mp.mpf(m), mp.mpf(m)
    pad = mp.mpf(m) * mp.mpf("1e-9")
    xs = [lo + pad + (hi - lo - 2 * pad) * i / n_grid for i in range(n_grid + 1)]
    fs = [bound_condition(x, m, V, a) for x in xs]
    roots = []
    for x0, x1, f0, f1 in zip(xs, xs[1:], fs, fs[1:]):
        if f0 * f1 < 0:
            roots.append(mp.findroot(lambda x: bound_condition(x, m, V, a), (x0, x1), solver="anderson"))
    return [float(r) for r in roots]


def klein_roots(m, V, a, n_grid=20000):
    """Zeros of cos((p+k)a) - cos((p-k)a) on the open Klein zone."""
    m, V, a = mp.mpf(m), mp.mpf(V), mp.mpf(a)

    def f(E):
        k = mp.sqrt(E * E - m * m)
        p = mp.sqrt((E + V) ** 2 - m * m)
        return mp.cos((p + k) * a) - mp.cos((p - k) * a)

    lo, hi = -V + m, -m
    pad = m * mp.mpf("1e-9")
    xs = [lo + pad + (hi - lo - 2 * pad) * i / n_grid for i in range(n_grid + 1)]
    fs = [f(x) for x in xs]
    roots = []
    for x0, x1, f0, f1 in zip(xs, xs[1:], fs, fs[1:]):
        if f0 * f1 < 0:
            roots.append(mp.findroot(f, (x0, x1), solver="bisect"))
    return [float(r) for r in roots]


def transmission(E, m, V, a):
    """``|t|^2`` for a wave incident from the left, outside ``|E| > m``.

    The outside plane waves are ``exp(+-ikx) (1, +-ik/(m+E))``; the incident
    one is whichever carries positive current ``2 Im(conj(psi+) psi-)``.
    """
    E = mp.mpf(E)
    k = mp.sqrt(E * E - m * m)
    up = mp.matrix([1, 1j * k / (m + E)])
    down = mp.matrix([1, -1j * k / (m + E)])
    if mp.im(mp.conj(up[0]) * up[1]) > 0:
        inc, inc_rate, ref = up, 1j * k, down
    else:
        inc, inc_rate, ref = down, -1j * k, up
    T = transfer(E, m, V, a)
    # T (inc + r ref) = t exp(inc_rate a) inc, unknowns r, t
    lhs_inc = T * inc
    lhs_ref = T * ref
    out = inc * mp.exp(inc_rate * a)
    M = mp.matrix([[lhs_ref[0], -out[0]], [lhs_ref[1], -out[1]]])
    r, t = mp.lu_solve(M, -lhs_inc)
    return float(abs(t) ** 2), float(abs(r) ** 2)
