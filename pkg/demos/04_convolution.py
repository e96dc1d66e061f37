"""
Quantum convolution and the central limit convergence
=================================================

For d = 7 the pair (s, t) = (2, 2) satisfies s^2 + t^2 = 1 mod 7.  Repeated
self-convolution drives a state to its mean state while entropy increases.
"""

import numpy as np

from stablab import conv, dense, stab

for d in (3, 5, 7, 11):
    print(d, [(p.s, p.t) for p in conv.find_params(d)])

params = conv.default_params(7)
rho = dense.random_state(1, 7, seed=0)
traj = conv.iterate(rho, params, 8)
print(traj.to_csv())

# the distance to M(rho) shrinks at every step
dist = traj.column("trace_dist_to_mean")
print("first L below 1e-3:", int(np.argmax(dist < 1e-3)))

# on characteristic functions the convolution is a pointwise product
a = dense.random_state(1, 7, seed=1)
fast = conv.convolve(a, rho, params, "fast")
slow = conv.convolve(a, rho, params, "dense")
print("fast vs dense:", np.abs(fast - slow).max())

# two qudits, cut between them: conditional entropy is monotone too
rho2 = dense.random_state(2, 7, seed=2)
traj2 = conv.iterate(rho2, params, 3, cut=[0], alpha=2.0)
print(traj2.column("cond_entropy"))

# a stabilizer whose group carries a nontrivial phase is moved, not fixed
one = dense.projector(np.eye(7)[1])
print(np.argmax(np.diag(conv.convolve(one, one, params)).real), stab.is_stabilizer(one, 7))
