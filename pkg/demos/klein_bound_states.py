"""
Bound states inside the Klein zone
==================================

For a deep well (V > 2m) there is an energy window -V+m < E < -m where the
particle oscillates both outside and inside the well.  Superposing waves
sent in from the left and from the right gives a standing wave whose
inside amplitudes balance only at special energies.
"""

import math

from diracwell import WellParams, klein_bound_states, klein_condition, solve_regime, verify_boundary_condition
from diracwell.observables import flux_imbalance, wall_current_quench

params = WellParams(m=1.0, V=5.0, a=1.0)
print("Klein zone:", params.klein_zone)

# Two closed-form families: k a = n pi and p a = n pi
for state in klein_bound_states(params):
    tag = " (zone edge)" if state.edge else ""
    print(f"  {state.branch.value:>3} n={state.n}  E={state.E:+.12f}{tag}")

#%%
# Both families zero the same wall condition
for state in klein_bound_states(params, include_edges=False):
    print(f"  condition at {state.E:+.6f}: {klein_condition(state.E, params):+.2e}")
print(f"  condition at -2 (off spectrum): {klein_condition(-2.0, params):+.4f}")

#%%
# At a level the standing wave carries no current through either wall
for E in (-math.sqrt(1 + math.pi**2), -2.0):
    sol = solve_regime(E, params)
    J0, Ja = wall_current_quench(sol)
    print(f"  E={E:+.6f}  flux imbalance {flux_imbalance(sol):.2e}  J(0)={J0:+.2e}  J(a)={Ja:+.2e}")

#%%
# Two different wall relations pick out one family each
for state in klein_bound_states(params, include_edges=False):
    sigma3 = verify_boundary_condition(state, params, "sigma3")
    plain = verify_boundary_condition(state, params, "plain")
    print(f"  {state.branch.value}: Psi(a)=+-sigma3 Psi(0) {sigma3}, Psi(a)=+-Psi(0) {plain}")
