"""Finite groups from multiplication tables and their irreducible tables.

Every group in this package is a validated multiplication table over
element indices 0..n-1. Irreducible representations are found numerically
by averaging a random Hermitian matrix over the regular representation and
reading off the eigenspaces, then frozen into a canonical order that all
multiplicity vectors refer to.
"""

import numpy as np

import repstab as rs

# A group can come from a raw table ...
z3 = rs.validate_group([[0, 1, 2], [1, 2, 0], [2, 0, 1]], name="Z3-by-hand")
print(f"{z3}: order {z3.order}, classes {z3.classes}")

# ... or from the built-in constructors.
s3 = rs.symmetric_group(3)
print(f"{s3}: conjugacy class sizes {[len(c) for c in s3.classes]}")

# The irreducible table: dims, characters, and explicit unitary matrices.
table = rs.irrep_table(s3, seed=0)
print(f"\nS3 irreducible dimensions: {table.dims.tolist()} "
      f"(sum of squares = {int(np.sum(table.dims ** 2))} = group order)")
for k, irrep in enumerate(table.irreps):
    print(f"  irrep {k}: dim {irrep.dim}, character {np.round(irrep.character, 6)}")

# Any exact representation decomposes into integer multiplicities.
reg = rs.regular_representation(s3)
print(f"\nregular representation multiplicities: "
      f"{rs.multiplicities(reg, table).tolist()}  (each irrep appears dim-many times)")

# Restriction along a homomorphism acts linearly on multiplicity vectors.
z2 = rs.cyclic_group(2)
z2_table = rs.irrep_table(z2)
into_s3 = rs.group_hom(z2, s3, [0, 1], require_injective=True)  # 1 -> a transposition
m = rs.restriction_matrix(into_s3, z2_table, table)
print(f"\nrestriction matrix Z2 -> S3 (columns are S3 irreps):\n{m}")
print("the 2-dim irrep restricts to trivial + sign:", m[:, 2].tolist())
