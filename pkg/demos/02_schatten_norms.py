"""Normalized Schatten norms, polar factors, and partial-isometry thresholding.

The normalized p-Schatten norm is the p-power mean of the singular values:
the identity has norm one in every dimension, and a full sign flip in one
of two dimensions costs 2^(1-1/p).
"""

import numpy as np

import repstab as rs

for p in (1.0, 1.5, 2.0, 4.0):
    print(f"p={p}: ||I_8||'_p = {rs.schatten_norm_normalized(np.eye(8), p):.6f}, "
          f"||diag(1,-1) - I||'_p = {rs.schatten_norm_normalized(np.diag([1., -1.]) - np.eye(2), p):.6f} "
          f"(expected {2 ** (1 - 1 / p):.6f})")

# the norm only sees singular values, so it is unitarily invariant
rng = np.random.default_rng(0)
a = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
from repstab.rng import random_unitary
u, v = random_unitary(5, rng), random_unitary(5, rng)
print(f"\nunitary invariance: {rs.schatten_norm_normalized(a, 2.0):.12f} "
      f"== {rs.schatten_norm_normalized(u @ a @ v, 2.0):.12f}")

# nearest unitary = polar factor
m = a + 3 * np.eye(5)
w = rs.nearest_unitary(m)
print(f"polar factor unitarity error: {np.abs(w @ w.conj().T - np.eye(5)).max():.2e}")

# thresholding keeps only the near-isometric part of an operator
t, right, left = rs.threshold_partial_isometry(np.diag([1.0, 0.9, 0.3, 0.05]), 0.5)
print(f"\nthreshold 0.5 on diag(1, .9, .3, .05): kept rank {right.shape[1]}")
print(f"T*T is the projection onto the kept right subspace: "
      f"{np.allclose((t.conj().T @ t) @ (t.conj().T @ t), t.conj().T @ t)}")
