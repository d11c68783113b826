"""
Heralding the quadrature operation
==================================

First-order parametric down-conversion followed by idler photon counting
conditions the signal beam.  One idler photon with alpha_i = g xi realises
q = a + a^dag; two realise photon addition.
"""

# %%
from polconv.fock import number
from polconv.optics import PdcConfig, pdc_herald
from polconv.states import coherent, quad_superposition

for xi in (0.5, 1j, 1 + 1j):
    signal = coherent(xi)
    out, weight = pdc_herald(signal, PdcConfig(g=0.05))
    target, _ = quad_superposition(xi, signal.dims[0])
    print(f"xi = {xi}: herald weight {weight:.4e}, fidelity to q|xi> {out.fidelity(target):.12f}")

# %%
for count in (0, 2):
    out, weight = pdc_herald(coherent(0.7), PdcConfig(g=0.05, herald_count=count))
    print(f"{count} idler photons: weight {weight:.4e}, <n> = {out.expect(number(out.dims[0])).real:.4f}")
