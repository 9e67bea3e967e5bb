"""
Isotropic measures and the first moment
=======================================

Any spanning finite measure can be whitened into an isotropic one.  For
isotropic measures the expected modulus of the inner product of two
independent samples is at most a constant that depends only on k, with
equality at uniform measures on maximal equiangular systems.
"""

import numpy as np

from coherence_forge import (
    Field,
    FiniteMeasure,
    alpha,
    equiangular_system,
    first_moment,
    iso_bound_check,
    lone_estimate,
    sic_system,
    whiten,
)

rng = np.random.default_rng(7)

# Equality cases.
for name, vs in (("3 lines in R^2", equiangular_system(2)), ("SIC in C^2", sic_system(2)),
                 ("SIC in C^3", sic_system(3))):
    check = iso_bound_check(FiniteMeasure.uniform(vs.vectors))
    print(f"{name:15s} first moment {check.value:.9f}  bound {check.bound:.9f}  extremal {check.extremal}")

# Random measures, whitened first, stay below the bound.
worst = 0.0
for _ in range(200):
    x = rng.normal(size=(3, 10))
    x /= np.linalg.norm(x, axis=0)
    w = rng.random(10)
    _, iso = whiten(FiniteMeasure(Field.REAL, 3, x, w / w.sum()))
    worst = max(worst, first_moment(iso))
print(f"\nlargest first moment over 200 random measures on R^3: {worst:.6f} <= {alpha(Field.REAL, 3):.6f}")

# An upper estimate of Lambda for the three-line measure: close to 2/3.
mu = FiniteMeasure.uniform(equiangular_system(2).vectors)
print("\nLambda upper estimate, three lines:", round(lone_estimate(mu, grid=3600), 6))
