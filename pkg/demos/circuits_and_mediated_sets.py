"""
Circuit polynomials and mediated sets
=====================================

A circuit polynomial ``sum_j b_j x^{alpha(j)} + c x^beta`` is nonnegative
exactly when ``|c|`` is at most its circuit number. Whether it is also a sum
of binomial squares depends on the maximal mediated set of its simplex.
"""

import numpy as np

from soncgp import CircuitPolynomial, circuit_nonneg, classify_circuit, maximal_mediated_set

# the boundary sits at |c| = 6^(1/6) 4^(1/4)
theta = CircuitPolynomial([(0, 0), (6, 0), (0, 4)], [7 / 12, 1, 1], (1, 1), -1).theta
print("circuit number:", theta, "closed form:", 6 ** (1 / 6) * 4 ** (1 / 4))
for c in np.linspace(-2.2, 2.2, 8):
    cp = CircuitPolynomial([(0, 0), (6, 0), (0, 4)], [7 / 12, 1, 1], (1, 1), float(c))
    print(f"c = {c:+.2f}  nonnegative: {circuit_nonneg(cp)}")

# scaled standard simplices are H-simplices: every lattice point is mediated
ms = maximal_mediated_set([(0, 0), (6, 0), (0, 6)])
print("lattice points:", ms.n_lattice_points, "mediated:", len(ms.pstar), "H-simplex:", ms.is_h_simplex)

# the Motzkin triangle is not: its interior point (2, 2) is not mediated
ms = maximal_mediated_set([(0, 0), (4, 2), (2, 4)])
print("Motzkin triangle mediated set:", ms.sorted_points())
motzkin = CircuitPolynomial([(0, 0), (4, 2), (2, 4)], [1 / 3, 1 / 3, 1 / 3], (2, 2), -1)
print("Motzkin circuit:", classify_circuit(motzkin, ms))
