"""
Certificates and tables
=======================

verify_gram checks that a matrix is a Gram matrix of unit vectors in the
declared dimension and compares its coherence with the proven optimum.
emit_table sweeps d and records what is achieved.  The same features are
available on the command line as ``coherence-forge``.
"""

import numpy as np

from coherence_forge import Field, certify_construction, emit_table, table_csv, verify_gram

construction, cert = certify_construction(Field.REAL, 21, 7)
print(cert.to_json())

# Nudging one inner product breaks positive semidefiniteness (and the rank
# bound), so the certificate fails.
a = construction.gram.gram.copy()
a[0, 1] = a[1, 0] = a[0, 1] * 1.01
bad = verify_gram(a, Field.REAL, 21, 7)
print("\nperturbed: checks", bad.checks, "optimal", bad.optimal)

# Table over d for k = 2.
print()
print(table_csv(emit_table(Field.REAL, 2, 4, 12)))

# Shell equivalents:
#   coherence-forge construct --field R --d 21 --k 7 --out r21
#   coherence-forge verify --gram r21.gram.txt --field R --d 21 --k 7
#   coherence-forge table --field R --k 2 --d-min 4 --d-max 12 --out k2.csv
