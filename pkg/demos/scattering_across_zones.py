"""
Transmission through the well, zone by zone
===========================================

Outside the mass gap (|E| > m) a wave can come in from the left.  The
inside solution changes character with E + V, which shows up in |T|^2.
"""

import numpy as np

from diracwell import WellParams, classify, solve_left_incidence

params = WellParams(m=1.0, V=5.0, a=1.0)

energies = np.concatenate([np.linspace(-9.0, -1.05, 12), np.linspace(1.05, 6.0, 6)])
print(f"{'E':>8}  {'zone':<24} {'|T|^2':>10} {'|R|^2':>10} {'sum - 1':>10}")
for E in energies:
    c = solve_left_incidence(float(E), params).coefficients
    T2, R2 = abs(c["T"]) ** 2, abs(c["R"]) ** 2
    print(f"{E:8.3f}  {str(classify(float(E), params)):<24} {T2:10.6f} {R2:10.6f} {T2 + R2 - 1:+10.1e}")

#%%
# Transmission resonances: |T| = 1 whenever p a is a multiple of pi
for n in (2, 3):
    E = -params.V + np.sqrt(params.m**2 + (n * np.pi / params.a) ** 2)
    if E > params.m:
        c = solve_left_incidence(float(E), params).coefficients
        print(f"p a = {n} pi at E={E:.6f}: |T|^2 = {abs(c['T']) ** 2:.15f}")
