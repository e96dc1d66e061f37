"""
Phase space of a qutrit
=======================

Weyl operators, the characteristic function and the discrete Wigner function,
and the rank inequalities that tie them to the max-entropy.
"""

import math

import numpy as np

from stablab import dense, stab, weyl, wigner

d = 3

# X shifts, Z clocks; w(1, 1) carries the omega^(-2^-1 p q) phase
X, Z = weyl.clock_shift(d)
print(np.round(weyl.weyl([1, 1], d), 3))

# |0><0| is stabilized by Z, so its characteristic function lives on the p axis
zero = dense.projector([1, 0, 0])
xi = weyl.char_function(zero, d)
print(xi.to_csv())

# the Wigner function is 1/3 on a line of three points
w = wigner.wigner_function(zero, d)
print(w.to_csv())

# the same table comes out of the symplectic Fourier transform of Xi
print("kernel sign:", wigner.sft_kernel_sign())
print("max deviation:", np.abs(wigner.wigner_via_symplectic_ft(xi).values - w.values).max())

# rank inequalities for a few states on two qutrits (in dits)
rows = [
    ("maximally mixed", np.eye(9) / 9),
    ("pure stabilizer", stab.random_stabilizer_state(2, d, 2, dense.make_rng(0, "demo"))),
    ("mixed stabilizer", stab.random_stabilizer_state(2, d, 1, dense.make_rng(1, "demo"))),
    ("random pure", dense.random_state(2, d, k=1, seed=2)),
    ("random mixed", dense.random_state(2, d, seed=3)),
]
print(f"{'state':18s} {'S_max':>6s} {'log chi_P':>10s} {'log chi_W':>10s}")
for name, rho in rows:
    s_max = math.log(dense.rank_eps(rho), d)
    lp = math.log(weyl.pauli_rank(rho, d), d)
    lw = math.log(wigner.wigner_rank(rho, d), d)
    print(f"{name:18s} {s_max:6.2f} {lp:10.2f} {lw:10.2f}")
# S_max + log chi_P >= 2 with equality for stabilizers,
# S_max + log chi_W >= 2 with equality only for the pure one,
# log chi_P + log chi_W >= 4 with equality for stabilizers.
