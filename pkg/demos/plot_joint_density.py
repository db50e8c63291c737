"""
Joint atom-photon density after emission
========================================

The photon travels out at ``c = 1`` with an exponential tail of length
``c/gamma = 1``.  The atom recoils with ``beta`` and keeps a Gaussian envelope
of width ``a(t)``.  Both packets share one argument, so the photon's front is
pinned to where the atom sits.
"""

import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from atomphoton import default_grid, make_params, sample_density
from atomphoton.widths import conditional_width, marginal_width

# %%
# Parameters: a fairly loose atom (eta0 = 0.05), a large recoil so the tilt is
# visible, and a spreading time of 100 decay times.

p = make_params(eta0=0.05, beta=0.1, tau_spr=100.0)
t = 5.0
grid = default_grid(p, t, "full_1d", n=1024)
d = sample_density(grid, t, p, "full_1d")
print(f"grid total = {d.total():.6f}")

# %%
# The density is zero ahead of the light front.  Behind it, the photon
# amplitude decays over ``c/gamma``, and the atom cross-section is Gaussian.

fig, ax = plt.subplots(figsize=(5, 4))
ext = [grid.x[0], grid.x[-1], grid.y[0], grid.y[-1]]
ax.imshow(d.values.T, origin="lower", extent=ext, aspect="auto", cmap="magma")
ax.set_xlabel("x_at")
ax.set_ylabel("x_ph")
ax.set_title(f"|psi|^2 at t = {t:g}")

# %%
# Widths: the coincidence width (a slice) is smaller than the single-particle
# width (the marginal).  Their ratio is the entanglement measure.

for axis in ("x_at", "x_ph"):
    single = marginal_width(d, axis)
    coinc = conditional_width(d, axis)
    print(f"{axis}: single {single:.4f}  coincidence {coinc:.4f}  ratio {single / coinc:.3f}")

out = sys.argv[1] if len(sys.argv) > 1 else "joint_density.png"
fig.tight_layout()
fig.savefig(out, dpi=120)
print("wrote", out)
