"""Dense complex containers and the kernels shared by every fitting module.

Vectors and matrices are plain complex128 numpy arrays. ``as_vector`` and
``as_matrix`` are the validating constructors; the two small dataclasses
below wrap the arrays whose structure matters (Hessenberg, OrthoBasis).
"""

import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy import linalg as sla

from . import config
from .errors import Breakdown, DimensionMismatch, InputError, RankDeficiency

logger = logging.getLogger(__name__)


def as_vector(values, name: str = 'vector') -> np.ndarray:
    """Return ``values`` as a finite 1-D complex128 array."""
    arr = np.asarray(values, dtype=np.complex128)
    if arr.ndim == 0:
        arr = arr.reshape(1)
    if arr.ndim != 1:
        raise InputError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InputError(f"{name} contains NaN or Inf entries")
    return arr


def as_matrix(values, name: str = 'matrix') -> np.ndarray:
    """Return ``values`` as a finite 2-D complex128 array."""
    arr = np.asarray(values, dtype=np.complex128)
    if arr.ndim != 2:
        raise InputError(f"{name} must be two-dimensional, got shape {arr.shape}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise InputError(f"{name} must have positive dimensions, got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InputError(f"{name} contains NaN or Inf entries")
    return arr


@dataclass(frozen=True)
class Hessenberg:
    """An (n+1) x n upper Hessenberg matrix."""

    matrix: np.ndarray

    def __post_init__(self):
        mat = np.asarray(self.matrix, dtype=np.complex128)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1] + 1:
            raise InputError(f"Hessenberg matrix must be (n+1) x n, got {mat.shape}")
        if np.any(np.tril(mat, -2) != 0):
            raise InputError("entries below the first subdiagonal must be zero")
        object.__setattr__(self, 'matrix', mat)

    @property
    def cols(self) -> int:
        return self.matrix.shape[1]

    def subdiagonal(self) -> np.ndarray:
        return np.diagonal(self.matrix, offset=-1).copy()


@dataclass(frozen=True)
class OrthoBasis:
    """Columns of a nested orthonormal basis Q (m x k)."""

    matrix: np.ndarray

    @property
    def rows(self) -> int:
        return self.matrix.shape[0]

    @property
    def cols(self) -> int:
        return self.matrix.shape[1]

    def orthogonality_error(self) -> float:
        """Return ||Q^H Q - I||_max."""
        q = self.matrix
        gram = q.conj().T @ q
        return float(np.max(np.abs(gram - np.eye(q.shape[1]))))

    def is_orthonormal(self, tol: float = config.ORTHO_TOL) -> bool:
        return self.orthogonality_error() <= tol


def orthogonalize_next(candidate, basis: OrthoBasis, reorth_passes: int = config.DEFAULT_REORTH_PASSES,
                       breakdown_tol: float = config.BREAKDOWN_TOL,
                       step: int = 0) -> Tuple[np.ndarray, np.ndarray, float]:
    """
    Orthonormalize ``candidate`` against the columns of ``basis``.

    Modified Gram-Schmidt, repeated ``reorth_passes`` times. The projection
    coefficients of all passes are summed, so they form the new Hessenberg
    column h_{1..k,k}.

    Args:
        candidate: Vector of length basis.rows.
        basis: Orthonormal columns to project against (may have zero columns).
        reorth_passes: 1 (plain) or 2 (twice is enough).
        breakdown_tol: Relative tail norm that signals dependence.
        step: Arnoldi step, only used in the Breakdown message.

    Returns:
        Tuple of (unit_vector, coeffs, tail_norm)
    """
    if reorth_passes not in (1, 2):
        raise InputError(f"reorth_passes must be 1 or 2, got {reorth_passes}")
    w = as_vector(candidate, 'candidate').copy()
    q = basis.matrix
    if q.shape[0] != w.shape[0]:
        raise DimensionMismatch(f"candidate has length {w.shape[0]} but basis has {q.shape[0]} rows")

    candidate_norm = float(np.linalg.norm(w))
    k = q.shape[1]
    coeffs = np.zeros(k, dtype=np.complex128)
    for _ in range(reorth_passes):
        for j in range(k):
            c = np.vdot(q[:, j], w)
            coeffs[j] += c
            w -= c * q[:, j]

    tail_norm = float(np.linalg.norm(w))
    if tail_norm <= breakdown_tol * candidate_norm or tail_norm == 0.0:
        raise Breakdown(step, tail_norm, candidate_norm)
    return w / tail_norm, coeffs, tail_norm


def project_rhs(basis: OrthoBasis, weights, f) -> np.ndarray:
    """Return y = Q^H diag(weights) f."""
    w = as_vector(weights, 'weights')
    rhs = as_vector(f, 'f')
    if not (w.shape[0] == rhs.shape[0] == basis.rows):
        raise DimensionMismatch(
            f"basis has {basis.rows} rows, weights {w.shape[0]}, f {rhs.shape[0]}"
        )
    return basis.matrix.conj().T @ (w * rhs)


def solve_dense_ls(A, b, rank_tol: float = config.RANK_TOL) -> np.ndarray:
    """
    Solve min ||A c - b||_2 with a Householder QR factorization.

    Raises RankDeficiency (carrying the solution computed anyway) when a
    pivot of R is smaller than rank_tol * ||A||_F.
    """
    a = as_matrix(A, 'A')
    rhs = as_vector(b, 'b')
    rows, cols = a.shape
    if rows < cols:
        raise InputError(f"least squares needs rows >= cols, got {a.shape}")
    if rhs.shape[0] != rows:
        raise DimensionMismatch(f"A has {rows} rows but b has length {rhs.shape[0]}")

    q, r = sla.qr(a, mode='economic')
    qtb = q.conj().T @ rhs
    pivots = np.abs(np.diagonal(r))
    scale = np.linalg.norm(a)
    pivot_ratio = float(pivots.min() / scale) if scale > 0 else 0.0

    if pivot_ratio < rank_tol:
        try:
            with np.errstate(divide='ignore', invalid='ignore', over='ignore'):
                solution = sla.solve_triangular(r, qtb, check_finite=False)
        except sla.LinAlgError:
            # exactly singular R: fall back to the minimum norm solution
            solution = sla.lstsq(r, qtb)[0]
        logger.debug("rank deficient least squares: pivot ratio %.3e", pivot_ratio)
        raise RankDeficiency(
            f"least squares matrix is numerically rank deficient (pivot ratio {pivot_ratio:.3e})",
            solution=solution,
            pivot_ratio=pivot_ratio,
        )
    return sla.solve_triangular(r, qtb)


def numerical_rank(M, tol: float = config.DISPLACEMENT_RANK_TOL) -> int:
    """
    Count singular values above tol * sigma_max.

    Singular values come from LAPACK gesdd (Golub-Kahan bidiagonalization).
    """
    mat = as_matrix(M, 'M')
    sv = sla.svdvals(mat)
    if sv.size == 0 or sv[0] == 0.0:
        return 0
    return int(np.count_nonzero(sv > tol * sv[0]))
