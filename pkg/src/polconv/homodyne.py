"""Simulated balanced homodyne detection.

Quadrature convention: ``x_theta = (a e^{-i theta} + a^dag e^{i theta}) / 2``,
so the vacuum variance is 1/4 and ``x_0 = Re z`` on the Wigner plane.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.integrate import cumulative_trapezoid, trapezoid

from .fock import TAIL_THRESHOLD, TruncatedState, TruncationError, annihilation
from .metrics import _as_density, wigner_values


@dataclass(frozen=True)
class QuadratureMarginal:
    theta: float
    x: np.ndarray
    density: np.ndarray
    normalization_defect: float

    @property
    def mean(self) -> float:
        return float(trapezoid(self.x * self.density, self.x))

    @property
    def variance(self) -> float:
        m = self.mean
        return float(trapezoid((self.x - m) ** 2 * self.density, self.x))


@dataclass(frozen=True)
class SampleBatch:
    seed: int
    theta: float
    samples: np.ndarray

    @property
    def count(self) -> int:
        return int(self.samples.size)


@dataclass(frozen=True)
class MomentReport:
    count: int
    mean: float
    variance: float
    analytic_mean: float
    analytic_variance: float
    z_mean: float
    z_variance: float
    threshold: float

    @property
    def passed(self) -> bool:
        return abs(self.z_mean) <= self.threshold and abs(self.z_variance) <= self.threshold


def hermite_functions(n_max: int, x: np.ndarray) -> np.ndarray:
    """Rows ``psi_n(x)``, ``n < n_max``: number-state wavefunctions in the ``x = (a + a^dag)/2`` scaling."""
    u = math.sqrt(2) * np.asarray(x, dtype=float)
    out = np.empty((n_max, u.size))
    out[0] = math.pi ** -0.25 * np.exp(-u * u / 2)
    if n_max > 1:
        out[1] = math.sqrt(2) * u * out[0]
    for n in range(1, n_max - 1):
        out[n + 1] = math.sqrt(2 / (n + 1)) * u * out[n] - math.sqrt(n / (n + 1)) * out[n - 1]
    return out * 2 ** 0.25


def quadrature_operator(dim: int, theta: float) -> np.ndarray:
    a = annihilation(dim)
    return (a * np.exp(-1j * theta) + a.conj().T * np.exp(1j * theta)) / 2


def analytic_moments(rho, theta: float, orders=(1, 2, 3, 4)) -> dict:
    """``<x_theta^k>`` from operator matrices; the state is zero-padded so powers act exactly."""
    rho = _as_density(rho)
    d = rho.shape[0]
    pad = d + max(orders)
    big = np.zeros((pad, pad), dtype=complex)
    big[:d, :d] = rho / np.trace(rho).real
    x = quadrature_operator(pad, theta)
    out, p = {}, np.eye(pad, dtype=complex)
    for k in range(1, max(orders) + 1):
        p = p @ x
        if k in orders:
            out[k] = float(np.trace(big @ p).real)
    return out


def default_grid(rho, points: int = 4001) -> np.ndarray:
    rho = _as_density(rho)
    mu = abs(np.trace(rho @ annihilation(rho.shape[0])))
    half = mu + 5
    return np.linspace(-half, half, points)


def quadrature_marginal(rho, theta: float, x: Optional[np.ndarray] = None, *,
                        threshold: float = TAIL_THRESHOLD) -> QuadratureMarginal:
    """``p(x|theta) = <x_theta| rho |x_theta>`` on a uniform grid."""
    rho = _as_density(rho)
    diag = np.real(np.diag(rho))
    if diag[-2:].sum() / diag.sum() >= threshold:
        raise TruncationError(f"state is truncation-unsafe at cutoff {rho.shape[0]}")
    x = default_grid(rho) if x is None else np.asarray(x, dtype=float)
    d = rho.shape[0]
    n = np.arange(d)
    rot = np.exp(-1j * theta * n)[:, None] * rho * np.exp(1j * theta * n)[None, :]
    psi = hermite_functions(d, x)
    dens = np.einsum("mi,mn,ni->i", psi, rot, psi).real
    dens = np.clip(dens, 0.0, None)
    return QuadratureMarginal(float(theta), x, dens, float(abs(trapezoid(dens, x) - 1)))


def radon_projection(rho, theta: float, x: np.ndarray, half_width: float = 4.0, steps: int = 161) -> np.ndarray:
    """Marginal obtained by integrating the numeric Wigner function along the line orthogonal to ``theta``."""
    rho = _as_density(rho)
    x = np.asarray(x, dtype=float)
    mu = complex(np.trace(rho @ annihilation(rho.shape[0])))
    centre = (mu * np.exp(-1j * theta)).imag
    p = np.linspace(centre - half_width, centre + half_width, steps)
    z = np.exp(1j * theta) * (x[:, None] + 1j * p[None, :])
    w = wigner_values(rho, z)
    return trapezoid(w, p, axis=1)


def sample(marginal: QuadratureMarginal, seed: int, count: int) -> SampleBatch:
    """Inverse-CDF sampling with linear interpolation of the tabulated CDF."""
    if count < 1:
        raise ValueError("count must be positive")
    cdf = cumulative_trapezoid(marginal.density, marginal.x, initial=0.0)
    cdf /= cdf[-1]
    rng = np.random.default_rng(seed)
    u = rng.random(count)
    return SampleBatch(int(seed), marginal.theta, np.interp(u, cdf, marginal.x))


def validate_moments(batch: SampleBatch, rho, threshold: float = 4.0) -> MomentReport:
    """Compare sample mean/variance with the state's analytic quadrature moments.

    Standard errors: ``sigma / sqrt(n)`` for the mean and
    ``sqrt((mu_4 - sigma^4) / n)`` for the variance.
    """
    m = analytic_moments(rho, batch.theta)
    mean = m[1]
    var = m[2] - mean ** 2
    mu4 = m[4] - 4 * mean * m[3] + 6 * mean ** 2 * m[2] - 3 * mean ** 4
    n = batch.count
    s_mean = float(np.mean(batch.samples))
    s_var = float(np.var(batch.samples, ddof=1))
    z_mean = (s_mean - mean) / math.sqrt(var / n)
    z_var = (s_var - var) / math.sqrt(max(mu4 - var ** 2, 1e-300) / n)
    return MomentReport(n, s_mean, s_var, mean, var, z_mean, z_var, threshold)
