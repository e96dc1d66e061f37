"""
The mean state
==============

M(rho) keeps the characteristic function where |Xi| = 1 and drops the rest.
The same state comes from averaging rho over Weyl conjugations by the
symplectic complement of its stabilizer group.
"""

import numpy as np

from stablab import dense, measures, stab, zd

d, n = 3, 2
rng = dense.make_rng(5, "mean-demo")

# a random state squeezed into one eigenspace of a single Weyl operator
rho = stab.partial_stabilizer_state(n, d, 1, rng)
group = stab.stabilizer_group(rho, d)
print("stabilizer group:", group.support)
print(group.to_json())

m1 = stab.mean_state_threshold(rho, d).state
m2 = stab.mean_state_twirl(rho, d).state
print("threshold vs twirl:", np.linalg.norm(m1 - m2))
print("complement rank:", zd.symplectic_complement(group.support).rank)

# M(rho) is the closest stabilizer state in relative entropy
s_rho = measures.von_neumann_entropy(rho)
s_m = measures.von_neumann_entropy(m1)
print("S(rho) =", s_rho, " S(M) =", s_m)
print("D(rho||M) =", measures.relative_entropy(rho, m1), " S(M) - S(rho) =", s_m - s_rho)

# generic states have a trivial group and M = I/d^n
print(np.allclose(stab.mean_state(dense.random_state(n, d, seed=1), d), np.eye(9) / 9))
