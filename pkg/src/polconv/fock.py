"""Truncated Fock-space linear algebra.

Single modes live in ``span{|0>, ..., |dim-1>}``.  Two-mode objects use the
flat index ``n_x * dim_y + n_y`` (mode x major), which is what ``np.kron``
produces, so ``tensor(A, B) @ state.vector`` works without reshuffling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.linalg import expm

#: Default bound on the weight carried by the top two levels of a mode.
TAIL_THRESHOLD = 1e-10
#: Eigenvalues above ``-NEG_FLOOR`` are treated as zero when summing negative parts.
NEG_FLOOR = 1e-10

OPERATOR_KINDS = ("annihilation", "creation", "number", "displacement", "quadrature", "identity", "custom")


class TruncationError(ValueError):
    """Raised when a cutoff is too small to hold a state to the requested accuracy."""


def _readonly(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, copy=True)
    arr.flags.writeable = False
    return arr


def _check_dim(dim: int) -> int:
    if int(dim) != dim or dim < 2:
        raise ValueError(f"cutoff dimension must be an integer >= 2, got {dim!r}")
    return int(dim)


def policy_cutoff(alpha_abs: float) -> int:
    """Baseline cutoff ``ceil(|a|^2 + 6|a| + 10)`` for a displacement magnitude."""
    a = abs(alpha_abs)
    return math.ceil(a * a + 6 * a + 10)


def default_cutoff(alpha_abs: float, photons: int = 0, threshold: float = TAIL_THRESHOLD) -> int:
    """Smallest cutoff at or above :func:`policy_cutoff` that is tail-safe.

    The policy value is enough for coherent states; displaced Fock states
    ``D(a)|n>`` have heavier tails, so the dimension is grown until the
    displaced ``|photons>`` state keeps its top-two-level weight below
    ``threshold``.
    """
    dim = policy_cutoff(alpha_abs)
    if alpha_abs == 0:
        return max(dim, photons + 3)
    # one long column; the weight from level dim-2 upward is summed directly
    # (not as 1 - norm) so thresholds far below machine epsilon still work
    probe = 2 * dim + 40
    while True:
        col = _displaced_number_column(abs(alpha_abs), photons, probe)
        tail = np.cumsum((np.abs(col) ** 2)[::-1])[::-1]
        while dim < probe - 2 and tail[dim - 2] >= threshold:
            dim += 1
        if dim < probe - 2:
            return dim
        probe *= 2


def _displaced_number_column(alpha: complex, n: int, levels: int) -> np.ndarray:
    """``<m|D(alpha)|n>`` for ``m < levels`` via ``D|n> = (a^dag - alpha^*)^n |alpha> / sqrt(n!)``."""
    size = levels + n
    c = np.empty(size, dtype=complex)
    c[0] = math.exp(-abs(alpha) ** 2 / 2)
    for m in range(1, size):
        c[m] = c[m - 1] * alpha / math.sqrt(m)
    root = np.sqrt(np.arange(size))
    for k in range(n):
        shifted = np.zeros_like(c)
        shifted[1:] = root[1:] * c[:-1]
        c = (shifted - np.conj(alpha) * c) / math.sqrt(k + 1)
    return c[:levels]


# ---------------------------------------------------------------------------
# operators


def annihilation(dim: int) -> np.ndarray:
    dim = _check_dim(dim)
    return np.diag(np.sqrt(np.arange(1, dim, dtype=float)), 1).astype(complex)


def number(dim: int) -> np.ndarray:
    dim = _check_dim(dim)
    return np.diag(np.arange(dim, dtype=float)).astype(complex)


def working_pad(alpha_abs: float, dim: int) -> int:
    """Extra levels needed so that columns ``0..dim-1`` of ``D(a)`` are exact after cropping."""
    a = abs(alpha_abs)
    return math.ceil(a * a + 6 * a * math.sqrt(dim) + 20)


def displacement_matrix(alpha: complex, dim: int) -> np.ndarray:
    """Matrix elements ``<m|D(alpha)|n>`` for ``m, n < dim``.

    ``expm(alpha a^dag - alpha^* a)`` is evaluated by scaling and squaring on
    an enlarged truncated space and then cropped.  A hard truncation at
    ``dim`` reflects amplitude off the top level and corrupts even the
    low columns at the 1e-7 level; the padding removes that.
    """
    dim = _check_dim(dim)
    alpha = complex(alpha)
    if alpha == 0:
        return np.eye(dim, dtype=complex)
    work = dim + working_pad(abs(alpha), dim)
    a = annihilation(work)
    gen = alpha * a.conj().T - alpha.conjugate() * a
    return expm(gen)[:dim, :dim]


def displacement_band(alpha: complex, dim: int, tol: float = 1e-8) -> int:
    """Number of low levels on which the cropped ``D(alpha) D(-alpha)`` equals I within ``tol``.

    The cropped product misses ``sum_{k >= dim} D(a)_{mk} D(-a)_{kn}``, which is
    bounded by the norm of column ``n`` of ``D(-a)`` beyond the cutoff, so the
    band ends at the first column whose escaping norm reaches ``tol``.
    """
    dim = _check_dim(dim)
    alpha = complex(alpha)
    if alpha == 0:
        return dim
    col = displacement_matrix(-alpha, dim + working_pad(abs(alpha), dim))[dim:, :dim]
    escaped = np.linalg.norm(col, axis=0)
    bad = np.nonzero(escaped >= tol)[0]
    return int(bad[0]) if bad.size else dim


@dataclass(frozen=True)
class ModeOperator:
    """A labelled single-mode operator matrix."""

    matrix: np.ndarray
    label: str
    alpha: Optional[complex] = None

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("operator matrix must be square")
        object.__setattr__(self, "matrix", _readonly(m))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def __matmul__(self, other):
        other = other.matrix if isinstance(other, ModeOperator) else other
        return self.matrix @ other


def make_operator(kind: str, dim: int, alpha: Optional[complex] = None,
                  matrix: Optional[np.ndarray] = None) -> ModeOperator:
    """Build a truncated single-mode operator.

    Parameters
    ----------
    kind : str
        One of ``annihilation``, ``creation``, ``number``, ``displacement``,
        ``quadrature`` (``a + a^dag``), ``identity`` or ``custom``.
    dim : int
        Cutoff dimension, at least 2.
    alpha : complex, optional
        Displacement amplitude; required for (and only for) ``displacement``.
    matrix : ndarray, optional
        The matrix for ``custom`` operators.
    """
    dim = _check_dim(dim)
    if kind not in OPERATOR_KINDS:
        raise ValueError(f"unknown operator kind {kind!r}")
    if (kind == "displacement") != (alpha is not None):
        raise ValueError("alpha is required for displacement and only for displacement")
    a = annihilation(dim)
    if kind == "annihilation":
        m = a
    elif kind == "creation":
        m = a.conj().T
    elif kind == "number":
        m = number(dim)
    elif kind == "quadrature":
        m = a + a.conj().T
    elif kind == "identity":
        m = np.eye(dim, dtype=complex)
    elif kind == "displacement":
        m = displacement_matrix(alpha, dim)
    else:
        if matrix is None or np.shape(matrix) != (dim, dim):
            raise ValueError("custom operators need a dim x dim matrix")
        m = matrix
    return ModeOperator(m, kind, None if alpha is None else complex(alpha))


def tensor(op_x, op_y) -> np.ndarray:
    """Two-mode operator ``op_x (x) op_y`` in the mode-x-major basis."""
    mx = op_x.matrix if isinstance(op_x, ModeOperator) else np.asarray(op_x)
    my = op_y.matrix if isinstance(op_y, ModeOperator) else np.asarray(op_y)
    for m in (mx, my):
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("tensor factors must be square matrices")
    return np.kron(mx, my)


# ---------------------------------------------------------------------------
# states


@dataclass(frozen=True)
class TruncatedState:
    """Pure one- or two-mode state.

    ``coeffs`` has shape ``(dim,)`` for one mode and ``(dim_x, dim_y)`` for
    two modes; ``coeffs[nx, ny]`` is the amplitude of ``|nx, ny>``.
    """

    coeffs: np.ndarray
    labels: tuple = ("x",)
    tail_threshold: float = TAIL_THRESHOLD

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex)
        if c.ndim not in (1, 2):
            raise ValueError("only one- and two-mode states are supported")
        for d in c.shape:
            _check_dim(d)
        labels = tuple(self.labels)
        if len(labels) != c.ndim:
            labels = ("x", "y")[: c.ndim]
        object.__setattr__(self, "coeffs", _readonly(c))
        object.__setattr__(self, "labels", labels)

    @property
    def modes(self) -> int:
        return self.coeffs.ndim

    @property
    def dims(self) -> tuple:
        return self.coeffs.shape

    @property
    def vector(self) -> np.ndarray:
        return self.coeffs.reshape(-1)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.vector))

    @property
    def tail_mass(self) -> float:
        """Weight on the top two levels of any mode (relative to the squared norm)."""
        p = np.abs(self.coeffs) ** 2
        total = p.sum()
        if total == 0:
            return 0.0
        if self.modes == 1:
            return float(p[-2:].sum() / total)
        mask = np.zeros(p.shape, dtype=bool)
        mask[-2:, :] = True
        mask[:, -2:] = True
        return float(p[mask].sum() / total)

    @property
    def is_safe(self) -> bool:
        return self.tail_mass < self.tail_threshold

    def require_safe(self, what: str = "state") -> "TruncatedState":
        if not self.is_safe:
            raise TruncationError(
                f"{what} is truncation-unsafe at cutoff {self.dims}: tail mass {self.tail_mass:.3e}"
            )
        return self

    def normalize(self) -> "TruncatedState":
        n = self.norm
        if n == 0:
            raise ValueError("cannot normalize the zero vector")
        return TruncatedState(self.coeffs / n, self.labels, self.tail_threshold)

    def with_coeffs(self, coeffs) -> "TruncatedState":
        return TruncatedState(coeffs, self.labels, self.tail_threshold)

    def apply(self, matrix: np.ndarray) -> "TruncatedState":
        """Apply an operator matrix acting on the whole (flattened) space."""
        return self.with_coeffs((np.asarray(matrix) @ self.vector).reshape(self.dims))

    def overlap(self, other: "TruncatedState") -> complex:
        """``<self|other>``."""
        if self.dims != other.dims:
            raise ValueError(f"dimension mismatch {self.dims} vs {other.dims}")
        return complex(np.vdot(self.vector, other.vector))

    def fidelity(self, other: "TruncatedState") -> float:
        """Phase-insensitive overlap ``|<self|other>|`` of the normalised states."""
        return abs(self.overlap(other)) / (self.norm * other.norm)

    def expect(self, matrix: np.ndarray) -> complex:
        v = self.vector
        return complex(np.vdot(v, np.asarray(matrix) @ v) / np.vdot(v, v).real)

    def density_matrix(self):
        v = self.vector / self.norm
        rho = np.outer(v, v.conj())
        if self.modes == 1:
            return rho
        return TwoModeDensityMatrix(rho, *self.dims)


def basis(dim: int, n: int) -> np.ndarray:
    dim = _check_dim(dim)
    if not 0 <= n < dim:
        raise ValueError(f"level {n} outside cutoff {dim}")
    v = np.zeros(dim, dtype=complex)
    v[n] = 1
    return v


def product_state(sx: TruncatedState, sy: TruncatedState, labels: Sequence[str] = ("x", "y")) -> TruncatedState:
    if sx.modes != 1 or sy.modes != 1:
        raise ValueError("product_state takes two single-mode states")
    return TruncatedState(np.outer(sx.coeffs, sy.coeffs), tuple(labels), min(sx.tail_threshold, sy.tail_threshold))


# ---------------------------------------------------------------------------
# density matrices


@dataclass(frozen=True)
class TwoModeDensityMatrix:
    matrix: np.ndarray
    dimx: int
    dimy: int
    herm_tol: float = 1e-12
    trace_tol: float = 1e-10

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        n = self.dimx * self.dimy
        if m.shape != (n, n):
            raise ValueError(f"expected a {n}x{n} matrix for dims ({self.dimx}, {self.dimy}), got {m.shape}")
        if np.max(np.abs(m - m.conj().T)) > self.herm_tol:
            raise ValueError("density matrix is not Hermitian")
        tr = np.trace(m).real
        if abs(tr - 1) > self.trace_tol:
            raise ValueError(f"density matrix has trace {tr}")
        object.__setattr__(self, "matrix", _readonly(m))

    @classmethod
    def from_product(cls, rho_x: np.ndarray, rho_y: np.ndarray) -> "TwoModeDensityMatrix":
        return cls(np.kron(rho_x, rho_y), rho_x.shape[0], rho_y.shape[0])

    def tensor4(self) -> np.ndarray:
        """View as ``rho[nx, ny, mx, my]``."""
        return self.matrix.reshape(self.dimx, self.dimy, self.dimx, self.dimy)


def partial_trace_y(rho: TwoModeDensityMatrix) -> np.ndarray:
    """Reduced density matrix of mode x."""
    red = np.einsum("ijkj->ik", rho.tensor4())
    return 0.5 * (red + red.conj().T)


def partial_trace_x(rho: TwoModeDensityMatrix) -> np.ndarray:
    red = np.einsum("ijil->jl", rho.tensor4())
    return 0.5 * (red + red.conj().T)


def partial_transpose_x(rho: TwoModeDensityMatrix) -> np.ndarray:
    """Transpose the mode-x indices: ``<nx ny|.|mx my> -> <mx ny|.|nx my>``.

    The result is Hermitian but in general not positive.
    """
    t = rho.tensor4().transpose(2, 1, 0, 3)
    n = rho.dimx * rho.dimy
    return t.reshape(n, n)


def hermitian_eigenvalues(m: np.ndarray, tol: float = 1e-8) -> np.ndarray:
    """Real eigenvalues of a Hermitian matrix in ascending order."""
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("expected a square matrix")
    scale = max(1.0, float(np.max(np.abs(m)))) if m.size else 1.0
    if np.max(np.abs(m - m.conj().T)) > tol * scale:
        raise ValueError("matrix is not Hermitian")
    return np.linalg.eigvalsh(0.5 * (m + m.conj().T))


def negative_part(eigenvalues: np.ndarray, floor: float = NEG_FLOOR) -> float:
    """``|sum of eigenvalues below -floor|``."""
    ev = np.asarray(eigenvalues)
    return float(-ev[ev < -floor].sum())
