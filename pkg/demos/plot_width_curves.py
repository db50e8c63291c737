"""
Relative widths against the control parameter
==============================================

Each particle has two widths in units of its own natural width: a
coincidence width and a single-particle width.  Their product is 1, so one
curve mirrors the other in log scale.
"""

import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from atomphoton.sweeps import log_grid, width_sweep

beta = 1e-8
tab = width_sweep(beta, log_grid(-20, 6, 261))
le = tab.column("log10_eta")

# %%
# Photon: the coincidence width collapses once ``eta < beta``.  Atom: the
# single-particle width blows up as ``1/eta``, and the coincidence width
# shrinks for ``eta > 1``.

fig, axes = plt.subplots(1, 2, figsize=(9, 3.6), sharex=True)
for ax, who in zip(axes, ("ph", "at")):
    ax.plot(le, np.log10(tab.column(f"rel_coinc_{who}")), label="coincidence")
    ax.plot(le, np.log10(tab.column(f"rel_single_{who}")), label="single")
    ax.set_title("photon" if who == "ph" else "atom")
    ax.set_xlabel("log10 eta")
    ax.legend()
axes[0].set_ylabel("log10 relative width")

# product of coincidence and single widths of the other particle
prod = tab.column("rel_coinc_at") * tab.column("rel_single_ph")
print("max |coinc_at * single_ph - 1| =", np.abs(prod - 1).max())

# %%
# At ``beta = 1`` the roles swap under ``eta -> 1/eta``.

mirror = width_sweep(1.0, log_grid(-4, 4, 81))
gap = mirror.column("rel_coinc_ph") - mirror.column("rel_coinc_at")[::-1]
print("beta=1 mirror gap:", np.abs(gap).max())

out = sys.argv[1] if len(sys.argv) > 1 else "width_curves.png"
fig.tight_layout()
fig.savefig(out, dpi=120)
print("wrote", out)
