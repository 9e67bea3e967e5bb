"""
Equiangular lines and the Kronecker lift
========================================

Three lines at 60 degrees in the plane, the six diagonals of the
icosahedron and a 9-line SIC in C^3 each give a seed matrix whose top
eigenvalue has multiplicity k.  Lifting the seed with a Kronecker product
yields optimal packings of d+k vectors in every admissible dimension d.
"""

import numpy as np

from coherence_forge import (
    Field,
    construct_best,
    equiangular_system,
    factor_to_vectors,
    gram,
    improved_lower_bound,
    kronecker_lift,
    lift_seed_from_lines,
    sic_system,
)

# The seed from three planar lines: unit diagonal, +-1 elsewhere.
lines = equiangular_system(2)
seed = lift_seed_from_lines(lines)
print(np.round(seed.c, 3))
print("lambda_max =", round(seed.lambda_max, 9), "multiplicity", seed.mult)

# d = 4 needs 6 = 2 * 3 vectors, so each seed entry becomes a 2x2 block.
g = kronecker_lift(seed.c, seed.lambda_max, seed.mult, 4)
print("\ncoherence at d=4:", g.coherence, " bound:", improved_lower_bound(Field.REAL, 4, 2))

# Turn the Gram matrix back into explicit vectors in R^4.
v = factor_to_vectors(g)
print("vectors:", v.shape, " reconstruction error:", np.linalg.norm(gram(v) - g.gram))

# The same pipeline over the complex numbers uses a SIC.
sic = sic_system(3)
off = np.abs(gram(sic.vectors))[~np.eye(9, dtype=bool)]
print("\nSIC in C^3: distinct |<x_i, x_j>|, i != j:", np.unique(np.round(off, 12)))
for d in (6, 15, 24):
    c = construct_best(Field.COMPLEX, d, 3)
    print(f"C^{d}: {c.construction_id}  coherence {c.coherence:.9f}  optimal {c.is_exact}")

# When d misses the residue class the best smaller system is padded.
c = construct_best(Field.REAL, 5, 2)
print("\nR^5, 7 vectors:", c.construction_id, round(c.coherence, 9))
