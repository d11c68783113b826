"""
Classical nonseparability of the output field
=============================================

The mean field of the output state carries a polarization matrix whose
Schmidt number K lies between 1 (separable) and 2 (maximally nonseparable).
"""

# %%
import numpy as np

from polconv.metrics import extrema_cell, field_expectation, schmidt_number
from polconv.optics import ClosedFormPsi3, PipelineInput

for xi, eta in [(1j, 1), (2j, 4j), (1, 1 + 1j), (10, 10j)]:
    cf = ClosedFormPsi3.from_input(PipelineInput(xi, eta))
    rep = schmidt_number(cf)
    print(f"xi={xi!s:>4} eta={eta!s:>6}: K = {rep.k_closed:.6f} (eigen route {rep.k_eigen:.6f})")

# %%
# Field trace over one optical period.
cf = ClosedFormPsi3.from_input(PipelineInput(0.5 - 1j, 1 + 0.3j))
for phase in np.linspace(0, 2 * np.pi, 7):
    ex, ey = field_expectation(cf, phase)
    print(f"phase {phase:4.2f}:  E_x = {ex:+.3f}  E_y = {ey:+.3f}")

# %%
# Which extremes of negativity and K does a beam reach?
for xi, eta in [(1j, -1), (2j, 4j), (10, 10j), (10 + 0.5j, 20 + 1j)]:
    rec = extrema_cell(PipelineInput(xi, eta))
    print(f"xi={xi!s:>8} eta={eta!s:>8}: cell {rec.cell}, conditions {rec.conditions}")
