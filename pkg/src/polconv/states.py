"""Coherent states, displaced Fock states and the quadrature-operated superposition.

``q|a> = (a + a^dag)|a> = 2 Re(a) |a> + D(a)|1>``, the two terms being
orthogonal, so the squared norm is ``1 + 4 Re(a)^2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .fock import (
    TAIL_THRESHOLD,
    TruncatedState,
    TruncationError,
    basis,
    default_cutoff,
    displacement_matrix,
)


@dataclass(frozen=True)
class CoherentLabel:
    alpha: complex

    @property
    def real(self) -> float:
        return complex(self.alpha).real

    @property
    def imag(self) -> float:
        return complex(self.alpha).imag

    @property
    def magnitude(self) -> float:
        return abs(self.alpha)

    @property
    def phase(self) -> float:
        return float(np.angle(self.alpha))


@dataclass(frozen=True)
class QuadSuperposition:
    """Closed-form record of ``q|a>/sqrt(N)``: coefficients ``2 Re(a)`` on ``|a>`` and 1 on ``D(a)|1>``."""

    label: CoherentLabel

    @property
    def coeff_coherent(self) -> float:
        return 2 * self.label.real

    @property
    def coeff_dfs(self) -> float:
        return 1.0

    @property
    def norm_sq(self) -> float:
        return 1 + 4 * self.label.real ** 2


def coherent_coefficients(alpha: complex, n_levels: int) -> np.ndarray:
    """``exp(-|a|^2/2) a^n / sqrt(n!)`` for ``n < n_levels`` (recursive, no factorial overflow)."""
    alpha = complex(alpha)
    c = np.empty(n_levels, dtype=complex)
    c[0] = math.exp(-abs(alpha) ** 2 / 2)
    for n in range(1, n_levels):
        c[n] = c[n - 1] * alpha / math.sqrt(n)
    return c


def _finish(coeffs: np.ndarray, what: str, threshold: float, check: bool) -> TruncatedState:
    st = TruncatedState(coeffs, ("x",), threshold)
    if check:
        st.require_safe(what)
    return st.normalize()


def _dim_for(alpha: complex, dim: Optional[int], photons: int) -> int:
    return default_cutoff(abs(alpha), photons) if dim is None else dim


def coherent(alpha: complex, dim: Optional[int] = None, *, threshold: float = TAIL_THRESHOLD,
             check: bool = True) -> TruncatedState:
    """Coherent state ``|alpha>`` from its Fock expansion, renormalised on the cutoff."""
    dim = _dim_for(alpha, dim, 0)
    return _finish(coherent_coefficients(alpha, dim), f"coherent({alpha})", threshold, check)


def displaced_fock(alpha: complex, n: int, dim: Optional[int] = None, *, threshold: float = TAIL_THRESHOLD,
                   check: bool = True) -> TruncatedState:
    """``D(alpha)|n>`` using the matrix-exponential displacement."""
    dim = _dim_for(alpha, dim, n)
    if not 0 <= n < dim:
        raise ValueError(f"Fock level {n} outside cutoff {dim}")
    col = displacement_matrix(alpha, dim) @ basis(dim, n)
    return _finish(col, f"displaced_fock({alpha}, {n})", threshold, check)


def quad_superposition_coefficients(alpha: complex, n_levels: int) -> np.ndarray:
    """Unnormalised Fock coefficients of ``(a + a^dag)|alpha>`` in closed form.

    ``<n|a|alpha> = alpha c_n`` and ``<n|a^dag|alpha> = sqrt(n) c_{n-1}``.
    """
    c = coherent_coefficients(alpha, n_levels)
    out = complex(alpha) * c
    out[1:] += np.sqrt(np.arange(1, n_levels)) * c[:-1]
    return out


def quad_superposition(alpha: complex, dim: Optional[int] = None, *, threshold: float = TAIL_THRESHOLD,
                       check: bool = True) -> tuple:
    """Normalised ``(2 Re(a) |a> + D(a)|1>) / sqrt(1 + 4 Re(a)^2)``.

    Returns the numeric state and its :class:`QuadSuperposition` record.
    """
    dim = _dim_for(alpha, dim, 1)
    rec = QuadSuperposition(CoherentLabel(complex(alpha)))
    coh = coherent(alpha, dim, threshold=threshold, check=check)
    dfs = displaced_fock(alpha, 1, dim, threshold=threshold, check=check)
    vec = (rec.coeff_coherent * coh.coeffs + rec.coeff_dfs * dfs.coeffs) / math.sqrt(rec.norm_sq)
    st = TruncatedState(vec, ("x",), threshold)
    if check and not st.is_safe:
        raise TruncationError(f"quad_superposition({alpha}) is truncation-unsafe at cutoff {dim}")
    return st.normalize(), rec
