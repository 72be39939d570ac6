"""
Ordinary bound states in the mass gap
=====================================

Levels with |E| < m have no closed form.  They are the zeros of the wall
determinant, bracketed on a grid and polished with a root finder.  Widening
the well adds levels; for a heavy particle the Klein-zone levels approach
the particle-in-a-box ladder.
"""

from diracwell import WellParams, conventional_spectrum, nonrelativistic_limit

for a in (1.0, 3.0, 10.0):
    levels = conventional_spectrum(WellParams(1.0, 5.0, a))
    print(f"a={a:5.1f}: " + ", ".join(f"{s.E:+.6f}" for s in levels))

#%%
# Heavy particle: binding energies against n^2 pi^2 / (2 m a^2)
heavy = WellParams(m=1000.0, V=5000.0, a=1.0)
for n in (1, 2, 3, 10):
    binding, box, rel = nonrelativistic_limit(heavy, n)
    print(f"n={n:2d}  |E|-m={binding:.9f}  box={box:.9f}  rel. diff {rel:.1e}")
