"""
Mutually unbiased bases and Steiner frames
==========================================

When no maximal equiangular system is available, batteries of mutually
unbiased bases or equiangular tight frames built from Steiner systems and
Hadamard matrices still give good seeds.  The last section chains a prime,
a Paley Hadamard matrix and a Bose triple system into one packing.
"""

import math

import numpy as np

from coherence_forge import (
    Field,
    bose_triples,
    construct_best,
    improved_lower_bound,
    kronecker_lift,
    lift_seed_from_mubs,
    lift_seed_from_steiner,
    mub_battery,
    steiner_etf,
    steiner_pairs,
    steiner_pipeline,
    sylvester_hadamard,
)

# Four mutually unbiased bases of C^3.
mubs = mub_battery(Field.COMPLEX, 3)
cross = np.abs(mubs.bases[1].conj().T @ mubs.bases[2])
print("cross magnitudes:", np.unique(np.round(cross, 12)), "= 1/sqrt(3)", round(1 / math.sqrt(3), 12))
seed = lift_seed_from_mubs(mubs)
g = kronecker_lift(seed.c, seed.lambda_max, seed.mult, 9)
print("C^9, 12 vectors: coherence", round(g.coherence, 9),
      " lower bound", round(improved_lower_bound(Field.COMPLEX, 9, 3), 9))

# Three real unbiased bases of R^4 reach 1/4 with 12 vectors in R^8.
c = construct_best(Field.REAL, 8, 4)
print("R^8, 12 vectors:", c.construction_id, c.coherence)

# A Steiner frame from all pairs of 4 points and a 4x4 Hadamard matrix.
s = steiner_pairs(4)
b = steiner_etf(s, sylvester_hadamard(2))
print("\nB is", b.shape, "; B B* = ", np.unique(np.round(b @ b.T, 12)).tolist())
seed = lift_seed_from_steiner(b, s.r, s.ell)
print("R^10, 16 vectors:", round(kronecker_lift(seed.c, seed.lambda_max, seed.mult, 10).coherence, 12))

# Prime 7 -> Paley H_8 -> Bose system on 15 points -> 120 vectors in R^85.
inst = steiner_pipeline()
print(f"\nprime {inst.prime}, Steiner system with {inst.steiner.k} blocks, r = {inst.steiner.r}")
print("coherence", round(inst.gram.coherence, 12), "predicted", round(inst.value, 12))
b15 = steiner_etf(bose_triples(15), inst.hadamard)
print("frame check B B* = 24 I:", np.allclose(b15 @ b15.T, 24 * np.eye(35)))
