"""
Checking the exact solutions with a Runge-Kutta integrator
==========================================================

Start from the exact spinor far to the left, integrate the Dirac equation
region by region and compare with the exact piecewise solution everywhere.
"""

from diracwell import WellParams, chained_check, conventional_spectrum, solve_regime
from diracwell.oracle import convergence_study

params = WellParams(m=1.0, V=5.0, a=1.0)
for E in (2.0, -2.0, -4.5, -5.5, -6.5):
    report = chained_check(solve_regime(E, params))
    print(f"E={E:+5.1f}: max deviation {report.max_error:.1e}")

#%%
# A bound level of a wider well, decaying tails on both sides
wide = WellParams(1.0, 5.0, 10.0)
level = conventional_spectrum(wide)[0]
print(f"level {level.E:+.9f}: max deviation {chained_check(solve_regime(level.E, wide)).max_error:.1e}")

#%%
# Halving the step cuts the error by about 2^4
steps, errors = convergence_study(solve_regime(2.0, params), "inside")
for n, err in zip(steps, errors):
    print(f"  {n:5d} steps: {err:.3e}")
