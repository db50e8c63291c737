"""
The width ratio R and hidden entanglement
=========================================

``R`` is the ratio of single-particle to coincidence width.  It is 1 only
for a product state.  Its minimum over ``eta`` is ``1 + beta`` at
``eta = sqrt(beta)``.  A free packet sweeps ``eta`` upward in time, so ``R``
can pass close to 1 while the Schmidt number stays fixed.
"""

import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from atomphoton import make_params, r_parameter
from atomphoton.entanglement import hidden_entanglement_scan, r_of_eta

beta = 1e-4
eta = np.logspace(-8, 4, 1201)
R = r_of_eta(eta, beta)
i = np.argmin(R)
print(f"min R = {R[i]:.8f} at eta = {eta[i]:.3e} (sqrt(beta) = {np.sqrt(beta):.3e})")

fig, ax = plt.subplots(figsize=(5, 3.6))
ax.loglog(eta, R - 1)
ax.axvline(np.sqrt(beta), ls=":", c="k")
ax.set_xlabel("eta")
ax.set_ylabel("R - 1")

# %%
# Time evolution: start tightly bound (``eta0 = 1e-4``) with ``beta = 0.01``.
# Then ``K = R0`` is large, while ``R(t)`` drops to about 1 for a while.

p = make_params(1e-4, 0.01, 100.0)
print("R0 =", r_parameter(p, 0.0))
for iv in hidden_entanglement_scan(p, (0.0, 1e6)):
    print(f"R within 10% of 1 for t in [{iv.t_start:.4g}, {iv.t_end:.4g}]"
          f" (eta {iv.eta_start:.4g} .. {iv.eta_end:.4g})")

out = sys.argv[1] if len(sys.argv) > 1 else "r_parameter.png"
fig.tight_layout()
fig.savefig(out, dpi=120)
print("wrote", out)
