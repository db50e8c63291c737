"""
Schmidt number of the Gaussian model
====================================

The grid SVD gives the Schmidt number ``K`` directly.  Here it is compared
with the width ratio at ``t = 0``.  For a Gaussian, ``K`` equals the
marginal-to-conditional width ratio of the sampled state.  That ratio tracks
``R0`` when ``beta`` is small, but not at ``eta0 = beta = 1``.
"""

import numpy as np

from atomphoton import gaussian_schmidt_report, make_params

for eta0, beta in [(0.05, 0.01), (0.2, 0.01), (0.3, 0.1), (1.0, 1.0)]:
    rep = gaussian_schmidt_report(make_params(eta0, beta, 1.0), n=512)
    closed = np.hypot(eta0, beta) * np.hypot(eta0, 1 - beta) / eta0
    print(f"eta0={eta0:<5g} beta={beta:<5g} K_svd={rep.K:.6f} closed-form={closed:.6f}"
          f" R0={rep.R0:.6f} rel diff {rep.k_r0_rel_diff:.2%}")
    for w in rep.warnings:
        print("   warning:", w)

# %%
# The third row is a product state.  ``K_closed^2 - 1`` equals
# ``(eta^2 - beta (1 - beta))^2 / eta^2``, so the sampled Gaussian
# factorizes at ``eta = sqrt(beta (1 - beta))`` even though ``R0 > 1``.

# %%
# Uncertainty products: at ``t = 0`` the conditional products equal ``1/K``.
# For ``t > 0`` the photon product stays above ``max(1/R, 1/K)``.

from atomphoton import uncertainty_products

p = make_params(0.05, 0.1, 100.0)
for t in (0.0, 50.0, 500.0):
    rep = uncertainty_products(p, t)
    print(f"t={t:6g}  cond_ph={rep.products['cond_ph']:.5f}  cond_at={rep.products['cond_at']:.5f}"
          f"  lower={rep.bounds['lower']:.5f}  violations={rep.violations()}")
