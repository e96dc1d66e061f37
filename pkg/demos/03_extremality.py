"""
Stabilizer states are extremal
==============================

Entropies grow and entanglement shrinks when a state is replaced by its mean
state.  Here on two qubits with a planted stabilizer.
"""

import numpy as np

from stablab import dense, measures, stab

rng = dense.make_rng(3, "extremal-demo")
rho = stab.partial_stabilizer_state(2, 2, 1, rng)

for row in measures.extremality_report(rho, [0], 2):
    print(f"{row.measure:22s} rho={row.value_rho: .6f}  M={row.value_mean: .6f}  gap={row.gap: .2e}  ok={row.sign_ok}")

# Renyi conditional entropies come out of a fixed-point optimizer; the
# result object says whether it converged
res = measures.optimize_conditional(rho, [0], 2.0, 2)
print(res.value, res.converged, res.iterations)
print(np.round(res.sigma_b, 4))
