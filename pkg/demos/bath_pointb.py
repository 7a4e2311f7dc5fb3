"""
Thermal operations with a finite bath
=====================================

Thermal operations need an explicit bath. Here the bath is a truncated ladder
with degeneracies ``2**n``, which matches Gibbs scaling exactly at ``q = 1/2``.
"""

import numpy as np

from thermogap import bath as bt
from thermogap.core import initial_state

q, K = 0.5, 6
b = bt.make_bath(q, K, 1 / q)
print(b.degeneracies, b.Z)
print(bt.bath_delta_report(b).as_dict())

# The permutation unitary aimed at the population (3/8, 1/2, 1/8).
U = bt.optimal_pointb_unitary(b)
print("unitarity:", max(U.unitarity_residuals()))
print(np.round(bt.transition_from_unitary(U, b), 6))
print("coherence:", bt.coherence_from_unitary(U, b), 0.5 * (1 - q * q * (K - 1) / (K + 1)))

# The same number from an explicit partial trace on a smaller bath.
small = bt.make_bath(q, 4, 2.0)
Us = bt.optimal_pointb_unitary(small)
out = bt.dense_channel_oracle(Us, small, initial_state())
print("dense:", abs(out[1, 0]), "inner products:", bt.coherence_from_unitary(Us, small))

# Larger baths approach the thermal-operation limit (1 - q^2)/2 = 0.375 from above.
for k in (6, 10, 14, 30, 100):
    print(k, bt.pointb_counting(bt.make_bath(q, k, 1 / q))["coherence"])

# Any unitary with the same zero pattern has the same singular values in u00.
for seed in range(3):
    V = bt.random_pointb_completion(b, seed)
    print(seed, bt.verify_sigma_pattern(V, b), bt.coherence_from_unitary(V, b))

# SVD normal form keeps G and can only raise the coherence.
V = bt.random_block_unitary(small, 0)
N = bt.svd_normal_form(V, small)
print(bt.coherence_from_unitary(V, small), "->", bt.coherence_from_unitary(N, small))
