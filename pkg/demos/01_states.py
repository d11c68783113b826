"""
Coherent, displaced Fock and quadrature-operated states
=======================================================

Builds the single-mode states on a truncated Fock space and checks a few of
their defining properties numerically.
"""

# %%
import numpy as np

from polconv.fock import default_cutoff, number
from polconv.states import coherent, displaced_fock, quad_superposition

alpha = 0.8 + 0.6j
dim = default_cutoff(abs(alpha), photons=1)
print("cutoff for |alpha| = 1:", dim)

# %%
# A coherent state and the displaced single photon are orthogonal.
coh = coherent(alpha, dim)
dfs = displaced_fock(alpha, 1, dim)
print("<alpha|D(alpha)|1>     =", abs(coh.overlap(dfs)))
print("<n> of the coherent    =", coh.expect(number(dim)).real)
print("<n> of D(alpha)|1>     =", dfs.expect(number(dim)).real, "(|alpha|^2 + 1 = 2)")

# %%
# q = a + a^dag applied to |alpha> mixes the two with weight 2 Re(alpha).
q_state, record = quad_superposition(alpha, dim)
print("norm^2 of q|alpha>     =", record.norm_sq)
print("weight on |alpha>      =", abs(coh.overlap(q_state)) ** 2, "vs", record.coeff_coherent ** 2 / record.norm_sq)
print("tail mass              =", q_state.tail_mass)

# %%
# A purely imaginary displacement leaves only the displaced photon.
q_imag, _ = quad_superposition(1j)
print("fidelity to D(i)|1>    =", q_imag.fidelity(displaced_fock(1j, 1, q_imag.dims[0])))
