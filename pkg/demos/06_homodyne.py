"""
Simulated homodyne detection
============================

Quadrature marginals, seeded sampling and a moment check against the
analytic values, with the Wigner-function projection as a cross-check.
"""

# %%
import numpy as np

from polconv.fock import partial_trace_y
from polconv.homodyne import quadrature_marginal, radon_projection, sample, validate_moments
from polconv.optics import PipelineInput, run_pipeline
from polconv.states import coherent

res = run_pipeline(PipelineInput(1, 0))
states = {
    "coherent(1)": coherent(1).density_matrix(),
    "reduced x of the output": partial_trace_y(res.psi3.density_matrix()),
}

for name, rho in states.items():
    for theta in (0.0, np.pi / 2):
        marg = quadrature_marginal(rho, theta)
        rep = validate_moments(sample(marg, seed=2024, count=100_000), rho)
        print(f"{name:>24} theta={theta:4.2f}: mean {rep.mean:+.4f} (analytic {rep.analytic_mean:+.4f}), "
              f"var {rep.variance:.4f} (analytic {rep.analytic_variance:.4f}), passed={rep.passed}")

# %%
rho = states["reduced x of the output"]
xs = np.linspace(-1, 3, 9)
delta = np.abs(radon_projection(rho, 0.0, xs) - quadrature_marginal(rho, 0.0, xs).density).max()
print("marginal vs Wigner projection:", delta)
