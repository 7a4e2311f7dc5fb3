"""
The coherence cone of a qutrit
==============================

Start from ``(|0> + |1>)/sqrt(2)`` on a three-level system with level
spacing one and ask: for each output population, how large can ``|rho[1,0]|``
be after a covariant Gibbs-preserving channel?
"""

import numpy as np

from thermogap import ento

q = 0.5

# A single point first. The Gibbs populations (4/7, 2/7, 1/7) sit in the
# interior; the optimiser lands on the corner (6/7, 4/7) of the entry box.
rec = ento.max_coherence_ento(q, 4 / 7, 2 / 7)
print(rec.case_id, rec.g00_star, rec.g11_star, rec.rho10_max, np.sqrt(6) / 7)

# The full transition matrix and its Kraus operators follow from the diagonal.
G = ento.optimal_transition(q, 4 / 7, 2 / 7)
print(np.round(G, 4))
channel = ento.kraus_from_transition(G)
print(ento.check_channel(channel, q))

# Sweep a lattice. Infeasible points carry nan, which is handy for masking.
grid = 41
recs = ento.sweep_cone(q, grid)
values = np.array([r.rho10_max for r in recs]).reshape(grid, grid)
print("feasible points:", int(np.sum(~np.isnan(values))))
print("largest coherence:", np.nanmax(values))

# Compare against a brute-force scan of the (G00, G11) box for a few points.
for r in recs[::97]:
    if r.feasible:
        print(f"({r.p0:.3f}, {r.p1:.3f})  analytic {r.rho10_max:.6f}  "
              f"lattice {ento.lp_oracle_max(q, r.p0, r.p1, grid_n=1000):.6f}")

# The feasible populations coincide with thermo-majorization.
print(ento.thermo_majorization_reachable(q, ento.P_IN, [0.375, 0.5, 0.125]))
print(ento.thermo_majorization_reachable(q, ento.P_IN, [1.0, 0.0, 0.0]))

# Write the heatmap.
from thermogap.svg import cone_svg

with open("cone.svg", "w", encoding="utf-8") as fh:
    fh.write(cone_svg(ento.sweep_cone(q, 120)))
print("wrote cone.svg")
