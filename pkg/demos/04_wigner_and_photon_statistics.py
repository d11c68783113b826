"""
Wigner functions and Mandel Q
=============================

Evaluates Wigner functions numerically (displaced parity) and in closed form,
and scans the photon statistics of q|alpha> over magnitude and phase.
Pass ``--plot`` to save a heatmap (needs matplotlib).
"""

# %%
import sys

import numpy as np

from polconv.fock import partial_trace_y
from polconv.metrics import (
    mandel_q,
    wigner_numeric,
    wigner_quad_superposition,
    wigner_reduced_x,
    window,
)
from polconv.optics import PipelineInput, run_pipeline
from polconv.states import quad_superposition

alpha = 1j
state, _ = quad_superposition(alpha)
grid = wigner_numeric(state, *window(alpha, 3.0, 41))
print("min W:", grid.min, "at", grid.argmin, "(-2/pi =", -2 / np.pi, ")")
print("integral:", grid.integral)
print("max |numeric - closed|:", np.abs(grid.values - wigner_quad_superposition(alpha, grid.points)).max())

# %%
# Reduced x-polarization state of the output, tilted by a small xi_R.
res = run_pipeline(PipelineInput(0.1 / np.sqrt(2), 0.1 * np.sqrt(2) - 0.1 / np.sqrt(2)))
rho_x = partial_trace_y(res.psi3.density_matrix())
g2 = wigner_numeric(rho_x, *window(res.closed_form.mu_x, 2.0, 41))
print("reduced-x max |numeric - closed|:", np.abs(g2.values - wigner_reduced_x(res.closed_form, g2.points)).max())

# %%
for phi in (0.0, np.pi / 4, np.pi / 2):
    qs = [mandel_q(quad_superposition(m * np.exp(1j * phi))[0]) for m in (0.0, 0.5, 1.0, 2.0, 5.0)]
    print(f"phi = {phi:4.2f}: Q =", np.round(qs, 4))

# %%
if "--plot" in sys.argv:
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(5, 4))
    m = ax.pcolormesh(grid.xvec, grid.yvec, grid.values, cmap="RdBu_r", shading="auto")
    fig.colorbar(m, ax=ax)
    fig.savefig("wigner_quad_i.png", dpi=120)
    print("saved wigner_quad_i.png")
