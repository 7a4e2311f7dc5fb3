"""
How large is the gap, and how robust?
=====================================

At the population (3/8, 1/2, 1/8) for ``q = 1/2`` covariant channels reach
``sqrt(3)/4`` while thermal operations stop at ``3/8``.
"""

import numpy as np

from thermogap import gap
from thermogap.bath import make_bath

print(gap.pointb_values(0.5))

# Certified lower bounds on the gap for nearby transition matrices.
for eps in (0.0, 1e-4, 5e-4):
    main = gap.gap_bound_main(0.5, eps, 0.0)
    refined, f = gap.gap_bound_refined(0.5, eps, 0.0)
    print(f"eps={eps:g}  main={main:.3e}  refined={refined:.3e}  f={f:.4f}")

# Where does the certificate survive?
qs = np.linspace(0.05, 0.6, 12)
for rec in gap.sweep_gap(qs, [0.0], [0.0]):
    print(f"q={rec.q:.2f}  gap={rec.delta10:.4f}  bound={rec.bound_main:.2e}  near_vacuous={rec.near_vacuous}")

# Monte Carlo on a finite bath: sample unitaries with the point-(b) zero
# pattern, take their normal form and look at the best coherence found.
b = make_bath(0.5, 4, 2.0)
summary = gap.empirical_gap(b, 50, 0.25, seed=0, pattern="point-b", normal_form=True)
meta = summary.metadata()
for key in ("n_in_window", "observed_max", "target", "epsilon_eff", "delta_eff", "bound_respected"):
    print(key, meta[key])
