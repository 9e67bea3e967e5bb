"""
Lower bounds on coherence
=========================

How small can the largest inner product among d+k unit vectors in
dimension d be?  Two closed-form lower bounds answer this: the Welch
bound and a sharper bound built from the first moment of isotropic
measures.  This script prints both across a range of d.
"""

from coherence_forge import Field, best_lower, improved_lower_bound, welch_bound

# For fixed k and growing d the improved bound overtakes Welch.
for k in (2, 4, 8):
    print(f"k = {k}")
    print("   d     welch  improved  winner")
    for d in (k, 2 * k, 5 * k, 20 * k, 100 * k):
        w = welch_bound(d, k)
        im = improved_lower_bound(Field.REAL, d, k)
        print(f"{d:4d}  {w:.6f}  {im:.6f}  {'improved' if im > w else 'welch'}")
    print()

# The report bundles both bounds with every shipped construction.
rep = best_lower(Field.REAL, 8, 4)
print("R^8, 12 vectors: best lower", round(rep.best_lower, 7))
for cand in sorted(rep.upper_candidates, key=lambda c: c.value):
    print(f"  {cand.construction_id:36s} {cand.value:.7f}")

# Where an equiangular system exists and d is in the right residue class,
# the improved bound is attained.
exact = [d for d in range(1, 40) if best_lower(Field.REAL, d, 2).exact is not None]
print("\nk = 2: bound attained at d =", exact)
