"""Explicit basis matrices, direct least squares solves and displacement diagnostics.

These are the "without Arnoldi" comparisons: the same least squares
problems written in the monomial or partial-fraction basis and solved
directly, which is unstable for large n.
"""

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy import special

from . import config
from .errors import FitWarning, InputError, RankDeficiency
from .linalg import as_matrix, as_vector, numerical_rank, solve_dense_ls
from .nodes import NodeSet, PoleSchedule
from .operators import JordanOperator
from .rational_arnoldi import check_poles_off
from .sobolev_poly import sobolev_weights

logger = logging.getLogger(__name__)

BASIS_KINDS = ('vandermonde', 'confluent_vandermonde', 'cauchy_with_ones', 'confluent_cauchy', 'scaled_cauchy')
_PLAIN_KINDS = ('vandermonde', 'cauchy_with_ones')
_POLYNOMIAL_KINDS = ('vandermonde', 'confluent_vandermonde')


@dataclass(frozen=True)
class ExplicitBasisMatrix:
    kind: str
    matrix: np.ndarray


@dataclass
class DirectFit:
    """Result of a direct solve in an explicit basis."""

    values: np.ndarray
    coefficients: np.ndarray
    rank_deficient: bool = False
    warnings: List[FitWarning] = field(default_factory=list)


def _finite_poles(kind: str, poles: Optional[PoleSchedule]) -> np.ndarray:
    if poles is None:
        raise InputError(f"basis kind {kind!r} needs a pole schedule")
    if np.any(poles.nu == 0):
        raise InputError(f"basis kind {kind!r} supports finite poles only")
    return poles.poles


def basis_derivatives(kind: str, t: np.ndarray, order: int, n: Optional[int] = None,
                      poles: Optional[np.ndarray] = None, include_constant: bool = True) -> np.ndarray:
    """
    The ``order``-th derivative of every basis function at points t.

    Monomial kinds use t^0..t^n; Cauchy kinds use 1, 1/(t - xi_k)
    (scaled_cauchy: 1, xi_k/(t - xi_k)).
    """
    t = np.asarray(t, dtype=np.complex128)
    if kind in _POLYNOMIAL_KINDS:
        k = np.arange(n + 1)
        # k!/(k-i)!, zero when k < i
        falling = special.perm(k, order)
        return falling[None, :] * t[:, None] ** np.maximum(k - order, 0)[None, :]

    diff = t[:, None] - poles[None, :]
    cols = (-1) ** order * special.factorial(order) / diff ** (order + 1)
    if kind == 'scaled_cauchy':
        cols = cols * poles[None, :]
    if not include_constant:
        return cols
    constant = np.full((t.shape[0], 1), 1.0 if order == 0 else 0.0, dtype=np.complex128)
    return np.hstack([constant, cols])


def _stacked_rows(kind: str, z: np.ndarray, orders: np.ndarray, n: Optional[int],
                  poles: Optional[np.ndarray], include_constant: bool) -> np.ndarray:
    """Rows for every node, highest derivative first within a node."""
    sizes = orders + 1
    starts = np.concatenate([[0], np.cumsum(sizes)[:-1]])
    first = basis_derivatives(kind, z[:1], 0, n, poles, include_constant)
    out = np.zeros((int(sizes.sum()), first.shape[1]), dtype=np.complex128)
    for i in range(int(orders.max()) + 1):
        carry = orders >= i
        rows = starts[carry] + orders[carry] - i
        out[rows] = basis_derivatives(kind, z[carry], i, n, poles, include_constant)
    return out


def build_basis_matrix(kind: str, nodes: NodeSet, poles: Optional[PoleSchedule] = None,
                       n: Optional[int] = None, include_constant: bool = True) -> ExplicitBasisMatrix:
    """
    Build an explicit basis matrix with derivative rows for confluent kinds.

    Args:
        kind: One of BASIS_KINDS.
        nodes: Fitting nodes; plain kinds need s_j = 0 everywhere.
        poles: Required for Cauchy kinds; the degree is the pole count.
        n: Polynomial degree for monomial kinds.
        include_constant: Cauchy kinds only; False drops the ones column.
    """
    if kind not in BASIS_KINDS:
        raise InputError(f"unknown basis kind {kind!r}; expected one of {', '.join(BASIS_KINDS)}")
    if kind in _PLAIN_KINDS and not nodes.is_plain():
        raise InputError(f"basis kind {kind!r} takes no derivative data; use the confluent variant")

    xi = None
    if kind in _POLYNOMIAL_KINDS:
        if n is None or n < 0:
            raise InputError(f"basis kind {kind!r} needs a degree n >= 0")
    else:
        xi = _finite_poles(kind, poles)
        if n is not None and n != poles.n:
            raise InputError(f"degree {n} does not match the {poles.n} poles")
        n = poles.n
        check_poles_off(poles, nodes.z)

    matrix = _stacked_rows(kind, nodes.z, nodes.orders, n, xi, include_constant)
    return ExplicitBasisMatrix(kind, matrix)


def direct_fit_eval(kind: str, nodes: NodeSet, poles: Optional[PoleSchedule], f, n: Optional[int],
                    sample_points: Sequence[complex], sample_orders=0, include_constant: bool = True,
                    rank_tol: float = config.RANK_TOL) -> DirectFit:
    """
    Solve W B c ~ W f directly and evaluate c in the explicit basis.

    Rank deficiency does not raise: the solution is kept and the result is
    flagged, since the instability is what this comparison measures.

    Returns:
        DirectFit with the stacked sample values (highest derivative first per sample).
    """
    basis = build_basis_matrix(kind, nodes, poles, n, include_constant)
    rhs = as_vector(f, 'f')
    if rhs.shape[0] != nodes.dim:
        raise InputError(f"f has length {rhs.shape[0]} but the node set provides {nodes.dim} data entries")

    weights = sobolev_weights(nodes)
    result = DirectFit(values=np.empty(0, dtype=np.complex128), coefficients=np.empty(0, dtype=np.complex128))
    try:
        coefficients = solve_dense_ls(weights[:, None] * basis.matrix, weights * rhs, rank_tol)
    except RankDeficiency as exc:
        coefficients = exc.solution
        result.rank_deficient = True
        result.warnings.append(FitWarning(str(exc), warning_type='RANK_DEFICIENT', n=basis.matrix.shape[1] - 1))
        logger.warning("direct %s solve: %s", kind, exc)

    x = as_vector(sample_points, 'sample_points')
    orders = np.asarray(sample_orders, dtype=int).reshape(-1)
    if orders.shape[0] == 1 and x.shape[0] > 1:
        orders = np.full(x.shape[0], orders[0])
    xi = None
    if kind not in _POLYNOMIAL_KINDS:
        xi, n = poles.poles, poles.n
        check_poles_off(poles, x, 'evaluation point')
    rows = _stacked_rows(kind, x, orders, n, xi, include_constant)

    with np.errstate(invalid='ignore', over='ignore'):
        result.values = rows @ coefficients
    result.coefficients = coefficients
    return result


def krylov_matrix(op: JordanOperator, v, n: int) -> np.ndarray:
    """[v, A v, ..., A^n v]."""
    cols = [as_vector(v, 'v')]
    for _ in range(n):
        cols.append(op.matvec(cols[-1]))
    return np.column_stack(cols)


def rational_krylov_matrix(op: JordanOperator, v, poles: Sequence[complex]) -> np.ndarray:
    """
    [v, psi_1(A) v, ..., psi_n(A) v] with psi_1 = (A - xi_1)^-1 and
    psi_k = (A - xi_k)^-1 (A - xi_{k-1}) psi_{k-1}.
    """
    xi = np.asarray(poles, dtype=np.complex128).reshape(-1)
    cols = [as_vector(v, 'v')]
    for k, pole in enumerate(xi):
        prev = cols[-1] if k == 0 else op.shifted_apply(1.0, xi[k - 1], cols[-1])
        cols.append(op.solve_shifted(1.0, pole, prev))
    return np.column_stack(cols)


def displacement_residual(kind: str, A, B, aux=None,
                          tol: float = config.DISPLACEMENT_RANK_TOL) -> Tuple[np.ndarray, int]:
    """
    Displacement A B - B S and its numerical rank.

    Args:
        kind: 'poly' (S defaults to the down-shift, ones on the subdiagonal)
            or 'rational' (S = diag(1, xi_1, ..., xi_n), aux gives the poles).
        aux: The shift matrix for 'poly', or the poles / a PoleSchedule for 'rational'.

    Returns:
        Tuple of (residual, rank)
    """
    a = as_matrix(A, 'A')
    b = np.asarray(B, dtype=np.complex128)
    if b.ndim != 2 or a.shape[1] != b.shape[0]:
        raise InputError(f"incompatible shapes {a.shape} and {b.shape}")
    cols = b.shape[1]
    if kind == 'poly':
        shift = np.eye(cols, k=-1) if aux is None else as_matrix(aux, 'shift')
    elif kind == 'rational':
        if aux is None:
            raise InputError("rational displacement needs the poles")
        xi = aux.poles if isinstance(aux, PoleSchedule) else np.asarray(aux, dtype=np.complex128).reshape(-1)
        if xi.shape[0] != cols - 1:
            raise InputError(f"need {cols - 1} poles for {cols} columns, got {xi.shape[0]}")
        shift = np.diag(np.concatenate([[1.0], xi]))
    else:
        raise InputError(f"unknown displacement kind {kind!r}; expected 'poly' or 'rational'")
    if shift.shape != (cols, cols):
        raise InputError(f"shift matrix must be {cols} x {cols}, got {shift.shape}")

    residual = a @ b - b @ shift
    return residual, numerical_rank(residual, tol)
