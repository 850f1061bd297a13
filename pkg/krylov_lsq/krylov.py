"""Arnoldi and rational Arnoldi loops plus the matching evaluation recurrences.

The fitting modules differ only in the operator (diagonal or Jordan-like),
the starting vector and the weight vector; the loops below are shared.
"""

import logging
from typing import Tuple

import numpy as np

from . import config
from .errors import InputError, PencilDegeneracy
from .linalg import OrthoBasis, orthogonalize_next
from .nodes import PoleSchedule
from .operators import JordanOperator

logger = logging.getLogger(__name__)


def _start(op: JordanOperator, v: np.ndarray, n: int) -> np.ndarray:
    m = op.dim
    if v.shape[0] != m:
        raise InputError(f"starting vector has length {v.shape[0]} but the operator has dimension {m}")
    if n < 0 or n > m - 1:
        raise InputError(f"degree n must satisfy 0 <= n <= m-1 = {m - 1}, got {n}")
    q = np.zeros((m, n + 1), dtype=np.complex128, order='F')
    q[:, 0], _, _ = orthogonalize_next(v, OrthoBasis(q[:, :0]), 1)
    return q


def polynomial_arnoldi(op: JordanOperator, v: np.ndarray, n: int,
                       reorth_passes: int = config.DEFAULT_REORTH_PASSES,
                       breakdown_tol: float = config.BREAKDOWN_TOL) -> Tuple[np.ndarray, np.ndarray]:
    """
    Orthonormal basis of K_{n+1}(A, v) and the Hessenberg matrix with A Q_n = Q_{n+1} H.

    Returns:
        Tuple of (Q, H) with Q of shape (m, n+1) and H of shape (n+1, n).
    """
    q = _start(op, v, n)
    h = np.zeros((n + 1, n), dtype=np.complex128)
    for k in range(1, n + 1):
        candidate = op.matvec(q[:, k - 1])
        q[:, k], h[:k, k - 1], h[k, k - 1] = orthogonalize_next(
            candidate, OrthoBasis(q[:, :k]), reorth_passes, breakdown_tol, step=k)
    logger.debug("Arnoldi finished: m=%d n=%d", op.dim, n)
    return q, h


def rational_arnoldi(op: JordanOperator, v: np.ndarray, poles: PoleSchedule,
                     reorth_passes: int = config.DEFAULT_REORTH_PASSES,
                     breakdown_tol: float = config.BREAKDOWN_TOL) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Orthonormal basis of K_{n+1}(A, v; poles, shifts) and the pencil with A Q K = Q H.

    Returns:
        Tuple of (Q, H, K) with H and K of shape (n+1, n).
    """
    n = poles.n
    q = _start(op, v, n)
    raw = np.zeros((n + 1, n), dtype=np.complex128)
    for k in range(1, n + 1):
        idx = k - 1
        numerator = op.shifted_apply(poles.eta[idx], poles.rho[idx], q[:, idx])
        candidate = op.solve_shifted(poles.nu[idx], poles.mu[idx], numerator)
        q[:, k], raw[:k, idx], raw[k, idx] = orthogonalize_next(
            candidate, OrthoBasis(q[:, :k]), reorth_passes, breakdown_tol, step=k)

    # K from the raw coefficients first, then H
    eye = np.eye(n + 1, n)
    k_mat = raw * poles.nu[None, :] - eye * poles.eta[None, :]
    h_mat = raw * poles.mu[None, :] - eye * poles.rho[None, :]
    sub_h = np.diagonal(h_mat, offset=-1)
    sub_k = np.diagonal(k_mat, offset=-1)
    degenerate = np.flatnonzero((sub_h == 0) & (sub_k == 0))
    if degenerate.size:
        raise PencilDegeneracy(f"pencil subdiagonals vanish at step {degenerate[0] + 1}")
    logger.debug("rational Arnoldi finished: m=%d n=%d", op.dim, n)
    return q, h_mat, k_mat


def polynomial_recurrence(h: np.ndarray, op: JordanOperator, u0: np.ndarray) -> np.ndarray:
    """Run X U_n = U_{n+1} H forward from u0; returns U of shape (M, n+1)."""
    n = h.shape[1]
    u = np.zeros((op.dim, n + 1), dtype=np.complex128, order='F')
    u[:, 0] = u0
    for k in range(1, n + 1):
        step = op.matvec(u[:, k - 1]) - u[:, :k] @ h[:k, k - 1]
        u[:, k] = step / h[k, k - 1]
    return u


def rational_recurrence(h: np.ndarray, k_mat: np.ndarray, op: JordanOperator, u0: np.ndarray,
                        flipped: bool = False) -> np.ndarray:
    """
    Run X U K = U H forward from u0; returns U of shape (M, n+1).

    The default accumulates sum(h u_j - k X u_j) and solves with
    (k X - h I); ``flipped`` negates both the accumulation and the solved
    operator. The two forms are mathematically identical.
    """
    n = h.shape[1]
    u = np.zeros((op.dim, n + 1), dtype=np.complex128, order='F')
    u[:, 0] = u0
    for k in range(1, n + 1):
        hu = u[:, :k] @ h[:k, k - 1]
        xku = op.matvec(u[:, :k] @ k_mat[:k, k - 1])
        if flipped:
            u[:, k] = op.solve_shifted(-k_mat[k, k - 1], -h[k, k - 1], xku - hu)
        else:
            u[:, k] = op.solve_shifted(k_mat[k, k - 1], h[k, k - 1], hu - xku)
    return u


def sobolev_start(op: JordanOperator, value: float) -> np.ndarray:
    """Vector with ``value`` in the bottom row of every block and zeros elsewhere."""
    u0 = np.zeros(op.dim, dtype=np.complex128)
    u0[op.bottom_rows] = value
    return u0


def derivative_table(values: np.ndarray, orders) -> np.ndarray:
    """
    Unstack Sobolev evaluation output.

    Returns an array of shape (max_order+1, tau): row i holds the i-th
    derivative at every sample, NaN where the sample carries fewer orders.
    """
    orders = np.asarray(orders, dtype=int)
    table = np.full((int(orders.max()) + 1, orders.shape[0]), np.nan, dtype=np.complex128)
    pos = 0
    for j, s in enumerate(orders):
        for i in range(s, -1, -1):
            table[i, j] = values[pos]
            pos += 1
    return table
