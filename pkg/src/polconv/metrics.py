"""Nonclassicality measures: negativity, Schmidt number, Mandel Q, Wigner functions.

Most quantities come in two flavours, a closed form in the displacements and
a brute-force number computed on the truncated Fock space, so that each
checks the other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .fock import (
    TAIL_THRESHOLD,
    TruncatedState,
    TruncationError,
    TwoModeDensityMatrix,
    annihilation,
    hermitian_eigenvalues,
    negative_part,
    number,
    partial_transpose_x,
    working_pad,
)
from .optics import ClosedFormPsi3, PipelineInput, closed_form_state, quadrature_operated, run_pipeline
from .states import quad_superposition_coefficients

SQRT2 = math.sqrt(2)
WIGNER_BOUND = 2 / math.pi


class DegeneratePolarizationError(ValueError):
    """The mean field vanishes, so no polarization (and no Schmidt number) is defined."""


# ---------------------------------------------------------------------------
# negativity


def negativity_closed_form(xi_r: float) -> float:
    return 1.0 / (2 + 8 * xi_r ** 2)


def negativity_numeric(rho: TwoModeDensityMatrix) -> float:
    """``|sum of negative eigenvalues|`` of the mode-x partial transpose."""
    return negative_part(hermitian_eigenvalues(partial_transpose_x(rho)))


def partial_transpose_4x4(xi_r: float) -> np.ndarray:
    """Partial transpose of the output state in the displaced basis
    ``{|1,1>, |1,mu_y>, |mu_x*,1>, |mu_x*,mu_y>}``, already divided by ``2N``."""
    c = 2 * SQRT2 * xi_r
    m = np.array([
        [0, 0, 0, -1],
        [0, 1, 0, c],
        [0, 0, 1, -c],
        [-1, c, -c, c * c],
    ], dtype=float)
    return m / (2 * (1 + 4 * xi_r ** 2))


def negativity_4x4(xi_r: float) -> np.ndarray:
    """Ascending eigenvalues of :func:`partial_transpose_4x4`."""
    return hermitian_eigenvalues(partial_transpose_4x4(xi_r))


# ---------------------------------------------------------------------------
# Schmidt number of the mean field


@dataclass(frozen=True)
class SchmidtReport:
    theta: float
    phi_x: float
    phi_y: float
    delta_phi: float
    k_closed: float
    k_eigen: float
    coefficients: np.ndarray
    polarization_matrix: np.ndarray
    intensity: float

    @property
    def k(self) -> float:
        return self.k_closed

    @property
    def k_delta(self) -> float:
        return abs(self.k_closed - self.k_eigen)


def schmidt_from_amplitudes(ex: complex, ey: complex) -> SchmidtReport:
    """Schmidt number of a field whose x/y complex carrier amplitudes are ``ex``, ``ey``.

    Row ``m`` of the coefficient matrix holds the cos and sin carrier
    amplitudes of component ``m``.  Angles use ``atan2`` so signs land in the
    right quadrant.
    """
    ex, ey = complex(ex), complex(ey)
    coeffs = np.array([[ex.real, ex.imag], [ey.real, ey.imag]])
    intensity = float(np.sum(coeffs ** 2))
    if intensity < 1e-12:
        raise DegeneratePolarizationError("zero-intensity field: polarization undefined")
    theta = math.atan2(abs(ey), abs(ex))
    phi_x = math.atan2(ex.imag, ex.real)
    phi_y = math.atan2(ey.imag, ey.real)
    dphi = phi_y - phi_x
    k_closed = 1.0 / (1 - math.sin(dphi) ** 2 * math.sin(2 * theta) ** 2 / 2)
    w = coeffs.T @ coeffs / intensity
    lam = hermitian_eigenvalues(w)
    k_eigen = 1.0 / float(np.sum(lam ** 2))
    return SchmidtReport(theta, phi_x, phi_y, dphi, k_closed, k_eigen, coeffs, w, intensity)


def field_amplitudes(cf: ClosedFormPsi3) -> tuple:
    """Mean annihilation amplitudes ``(<a_x>, <a_y>) = (mu_x + r, mu_y - r)``."""
    return cf.mu_x + cf.r, cf.mu_y - cf.r


def field_amplitudes_numeric(state: TruncatedState) -> tuple:
    """``(<a (x) 1>, <1 (x) a>)`` evaluated on a two-mode state."""
    dx, dy = state.dims
    c = state.coeffs / state.norm
    ax = np.vdot(c, annihilation(dx) @ c)
    ay = np.vdot(c, c @ annihilation(dy).T)
    return complex(ax), complex(ay)


def schmidt_number(cf: ClosedFormPsi3) -> SchmidtReport:
    return schmidt_from_amplitudes(*field_amplitudes(cf))


def field_expectation(cf: ClosedFormPsi3, phase: float) -> tuple:
    """``(E_x, E_y)`` at carrier phase ``omega t - k z`` (field unit 1).

    ``E_m = 2 [|mu_m| cos(phase - phi_m) +/- r cos(phase)]``, + for x, - for y.
    """
    ex = 2 * (abs(cf.mu_x) * math.cos(phase - np.angle(cf.mu_x)) + cf.r * math.cos(phase))
    ey = 2 * (abs(cf.mu_y) * math.cos(phase - np.angle(cf.mu_y)) - cf.r * math.cos(phase))
    return ex, ey


# ---------------------------------------------------------------------------
# Mandel Q  (convention: Var(n)/<n>, so a coherent state gives 1)


def _photon_moments(state) -> tuple:
    if isinstance(state, TruncatedState):
        if state.modes != 1:
            raise ValueError("Mandel Q is defined here for single-mode states")
        n = number(state.dims[0])
        return state.expect(n).real, state.expect(n @ n).real
    rho = np.asarray(state)
    n = number(rho.shape[0])
    tr = np.trace(rho).real
    return np.trace(rho @ n).real / tr, np.trace(rho @ n @ n).real / tr


def mandel_q(state) -> float:
    """``Var(n) / <n>`` from number-operator matrices (state vector or density matrix)."""
    mean, second = _photon_moments(state)
    if mean < 1e-12:
        raise ValueError("Mandel Q undefined for (near-)vacuum input")
    return (second - mean ** 2) / mean


def mandel_q_quad_superposition(alpha: complex, n_levels: int = 200) -> float:
    """Mandel Q of ``q|alpha>`` from its closed-form Fock coefficients."""
    c = quad_superposition_coefficients(alpha, n_levels)
    p = np.abs(c) ** 2
    p /= p.sum()
    n = np.arange(n_levels)
    mean = float(p @ n)
    return float(p @ n ** 2 - mean ** 2) / mean


# ---------------------------------------------------------------------------
# Wigner functions


def wigner_quad_superposition(alpha: complex, z) -> np.ndarray:
    """Closed-form Wigner function of ``q|alpha>/sqrt(N)`` at points ``z``.

    ``(2/(pi N)) (4|z - i Im(alpha)|^2 - 1) exp(-2|z - alpha|^2)``.
    """
    alpha = complex(alpha)
    z = np.asarray(z, dtype=complex)
    n = 1 + 4 * alpha.real ** 2
    return 2 / (math.pi * n) * (4 * np.abs(z - 1j * alpha.imag) ** 2 - 1) * np.exp(-2 * np.abs(z - alpha) ** 2)


def wigner_reduced_x(cf: ClosedFormPsi3, z) -> np.ndarray:
    """Closed-form Wigner function of the x-polarization reduced state."""
    z = np.asarray(z, dtype=complex)
    return (4 * np.abs(z - cf.mu_x + SQRT2 * cf.xi_r) ** 2 / ((1 + 4 * cf.xi_r ** 2) * math.pi)
            * np.exp(-2 * np.abs(z - cf.mu_x) ** 2))


def wigner_coherent(alpha: complex, z) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    return WIGNER_BOUND * np.exp(-2 * np.abs(z - complex(alpha)) ** 2)


@dataclass(frozen=True)
class WignerGrid:
    """``values[j, i] = W(xvec[i] + 1j * yvec[j])``."""

    xvec: np.ndarray
    yvec: np.ndarray
    values: np.ndarray

    @property
    def integral(self) -> float:
        dx = self.xvec[1] - self.xvec[0] if len(self.xvec) > 1 else 1.0
        dy = self.yvec[1] - self.yvec[0] if len(self.yvec) > 1 else 1.0
        return float(self.values.sum() * dx * dy)

    @property
    def min(self) -> float:
        return float(self.values.min())

    @property
    def max(self) -> float:
        return float(self.values.max())

    @property
    def argmin(self) -> complex:
        j, i = np.unravel_index(np.argmin(self.values), self.values.shape)
        return complex(self.xvec[i], self.yvec[j])

    @property
    def points(self) -> np.ndarray:
        return self.xvec[None, :] + 1j * self.yvec[:, None]

    def within_bound(self, slack: float = 1e-6) -> bool:
        return bool(np.all(np.abs(self.values) <= WIGNER_BOUND + slack))


def _as_density(rho) -> np.ndarray:
    if isinstance(rho, TruncatedState):
        if rho.modes != 1:
            raise ValueError("expected a single-mode state")
        return rho.density_matrix()
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim == 1:
        v = rho / np.linalg.norm(rho)
        return np.outer(v, v.conj())
    return rho


class _DisplacedParity:
    """Evaluates ``W(z) = (2/pi) Tr[rho D(2z) Parity]``.

    ``D(z) P D(z)^dag = D(2z) P`` so only the ``d x d`` block of ``D(2z)`` is
    needed.  That block comes from the spectral decomposition of ``a + a^dag``
    on a padded space:  ``D(s e^{i t})_{mn} = (i e^{i t})^{m-n}
    sum_k V_mk V_nk exp(-i s lambda_k)``.
    """

    def __init__(self, rho: np.ndarray, max_abs_z: float):
        d = rho.shape[0]
        size = d + working_pad(2 * max_abs_z, d)
        off = np.sqrt(np.arange(1, size))
        lam, vec = eigh_tridiagonal(np.zeros(size), off)
        self.lam = lam
        self.v = vec[:d]
        n = np.arange(d)
        # X_mn = rho_nm (-1)^n, phases applied per point
        self.base = rho.T * ((-1.0) ** n)[None, :]
        self.dn = n[:, None] - n[None, :]

    def __call__(self, z: np.ndarray, batch: int = 256) -> np.ndarray:
        z = np.asarray(z, dtype=complex).ravel()
        out = np.empty(z.size)
        for s in range(0, z.size, batch):
            beta = 2 * z[s:s + batch]
            ang = np.angle(beta) + math.pi / 2
            x = self.base[None] * np.exp(1j * ang[:, None, None] * self.dn[None])
            diag = np.einsum("mk,bmk->bk", self.v, x @ self.v)
            ph = np.exp(-1j * np.abs(beta)[:, None] * self.lam[None])
            out[s:s + batch] = (WIGNER_BOUND * np.sum(diag * ph, axis=1)).real
        return out


def wigner_values(rho, z, *, threshold: float = TAIL_THRESHOLD) -> np.ndarray:
    """Numeric Wigner function of a single-mode state at arbitrary complex points."""
    rho = _as_density(rho)
    diag = np.real(np.diag(rho))
    if diag[-2:].sum() / diag.sum() >= threshold:
        raise TruncationError(f"state is truncation-unsafe at cutoff {rho.shape[0]}")
    z = np.asarray(z, dtype=complex)
    evaluator = _DisplacedParity(rho / np.trace(rho).real, float(np.max(np.abs(z))) if z.size else 0.0)
    return evaluator(z).reshape(z.shape)


def wigner_numeric(rho, xvec: Sequence[float], yvec: Sequence[float], **kw) -> WignerGrid:
    xvec = np.asarray(xvec, dtype=float)
    yvec = np.asarray(yvec, dtype=float)
    z = xvec[None, :] + 1j * yvec[:, None]
    return WignerGrid(xvec, yvec, wigner_values(rho, z, **kw))


def window(center: complex, half_width: float = 3.0, steps: int = 41) -> tuple:
    """Square grid axes centred on ``center``."""
    c = complex(center)
    return (np.linspace(c.real - half_width, c.real + half_width, steps),
            np.linspace(c.imag - half_width, c.imag + half_width, steps))


# ---------------------------------------------------------------------------
# extremum classification


@dataclass(frozen=True)
class ExtremaRecord:
    negativity: float
    schmidt_k: float
    negativity_extreme: Optional[str]
    schmidt_extreme: Optional[str]
    conditions: tuple

    @property
    def cell(self) -> tuple:
        return self.negativity_extreme, self.schmidt_extreme


def _close(a: float, b: float, tol: float) -> bool:
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


def extremum_conditions(inp: PipelineInput, tol: float = 1e-12, large_xi_r: float = 5.0) -> tuple:
    """Names of the input-condition sets (r = 0 family) that ``inp`` satisfies literally.

    The two asymptotic sets (``xi_R -> inf``) additionally require
    ``|xi_R| >= large_xi_r``.
    """
    xi, eta = inp.xi, inp.eta
    found = []
    if _close(xi.real, 0, tol) and _close(eta.imag, 0, tol):
        if _close(xi.imag, eta.real, tol):
            found.append("xi_R = eta_I = 0, xi_I = +eta_R")
        if _close(xi.imag, -eta.real, tol):
            found.append("xi_R = eta_I = 0, xi_I = -eta_R")
    if _close(xi.real, 0, tol) and _close(eta.real, 0, tol) and not (eta.imag == 0 and xi.imag != 0):
        found.append("xi_R = eta_R = 0, xi_I = k eta_I")
    if abs(xi.real) >= large_xi_r:
        if abs(eta - 1j * xi) <= tol * max(1.0, abs(xi)):
            found.append("xi_R -> inf, eta = +i xi")
        if abs(eta + 1j * xi) <= tol * max(1.0, abs(xi)):
            found.append("xi_R -> inf, eta = -i xi")
        if abs((eta * xi.conjugate()).imag) <= tol * max(1.0, abs(xi) * abs(eta)):
            found.append("xi_R -> inf, eta = k xi")
    return tuple(found)


def extrema_cell(inp: PipelineInput, *, tol: float = 1e-9, asymptotic_tol: float = 1e-3,
                 min_negativity: float = 0.01, large_xi_r: float = 5.0) -> ExtremaRecord:
    """Which negativity / Schmidt-number extremes an input beam reaches.

    Negativity is ``max`` at 1/2 and ``min`` once it drops below
    ``min_negativity``.  K is ``max`` (``min``) within ``tol`` of 2 (1); for
    ``|xi_R| >= large_xi_r`` the looser ``asymptotic_tol`` is used, since
    those extremes are only reached in the limit.
    """
    cf = ClosedFormPsi3.from_input(inp)
    neg = negativity_closed_form(cf.xi_r)
    k = schmidt_number(cf).k
    if _close(neg, 0.5, tol):
        n_ext = "max"
    elif neg <= min_negativity:
        n_ext = "min"
    else:
        n_ext = None
    ktol = asymptotic_tol if abs(cf.xi_r) >= large_xi_r else tol
    if 2 - k <= ktol:
        k_ext = "max"
    elif k - 1 <= ktol:
        k_ext = "min"
    else:
        k_ext = None
    return ExtremaRecord(neg, k, n_ext, k_ext, extremum_conditions(inp, large_xi_r=large_xi_r))


# ---------------------------------------------------------------------------
# aggregate report


@dataclass(frozen=True)
class MetricsReport:
    inputs: PipelineInput
    closed_form: ClosedFormPsi3
    cutoff: int
    negativity_closed: float
    negativity_numeric: Optional[float]
    schmidt: Optional[SchmidtReport]
    mandel_q: float
    mandel_q_closed: float
    field_closed: tuple
    field_numeric: Optional[tuple]
    psi3_fidelity: Optional[float]
    tail_mass: Optional[float]
    warnings: tuple = ()

    @property
    def negativity_delta(self) -> Optional[float]:
        if self.negativity_numeric is None:
            return None
        return abs(self.negativity_numeric - self.negativity_closed)

    @property
    def mandel_q_delta(self) -> float:
        return abs(self.mandel_q - self.mandel_q_closed)

    @property
    def field_delta(self) -> Optional[float]:
        if self.field_numeric is None:
            return None
        return max(abs(a - b) for a, b in zip(self.field_numeric, self.field_closed))


def compute_metrics(inp: PipelineInput, cutoff: Optional[int] = None, *, numeric: bool = True) -> MetricsReport:
    """Run the pipeline and evaluate every measure, closed form next to numeric."""
    cf = ClosedFormPsi3.from_input(inp)
    warnings = []
    try:
        schmidt = schmidt_number(cf)
    except DegeneratePolarizationError as exc:
        schmidt = None
        warnings.append(f"schmidt: {exc}")

    res = run_pipeline(inp, cutoff) if numeric else None
    dim = res.cutoff if res is not None else (cutoff or 0)

    heralded = quadrature_operated(inp.xi, res.cutoff if res is not None else _q_dim(inp.xi))
    q_num = mandel_q(heralded)
    q_closed = mandel_q_quad_superposition(inp.xi)

    neg_num = fid = tail = fnum = None
    if res is not None:
        rho = res.psi3.density_matrix()
        neg_num = negativity_numeric(rho)
        fid = res.psi3.fidelity(closed_form_state(cf, res.cutoff))
        tail = res.psi3.tail_mass
        fnum = field_amplitudes_numeric(res.psi3)
    return MetricsReport(inp, cf, dim, negativity_closed_form(cf.xi_r), neg_num, schmidt,
                         q_num, q_closed, field_amplitudes(cf), fnum, fid, tail, tuple(warnings))


def _q_dim(alpha: complex) -> int:
    from .fock import default_cutoff

    return default_cutoff(abs(alpha), photons=1)
