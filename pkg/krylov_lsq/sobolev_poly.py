"""Weighted Sobolev polynomial least squares: confluent Vandermonde with Arnoldi.

Data for node j is ordered from its highest derivative down to the function
value, f_j^(s_j), ..., f_j'. f_j, and the Krylov operator is the
Jordan-like matrix with one upper bidiagonal block per node.
"""

from dataclasses import dataclass
from typing import ClassVar, Sequence, Tuple

import numpy as np
from scipy import special

from . import config
from .errors import InputError
from .krylov import polynomial_arnoldi, polynomial_recurrence, sobolev_start
from .linalg import Hessenberg, OrthoBasis, as_vector, project_rhs
from .nodes import NodeSet
from .operators import JordanOperator
from .poly_arnoldi import _check_rhs


@dataclass(frozen=True)
class SobolevPolyFitModel:
    hessenberg: Hessenberg
    y: np.ndarray
    p0: float
    orders: np.ndarray

    kind: ClassVar[str] = 'sobolev-poly'

    @property
    def degree(self) -> int:
        return self.hessenberg.cols


def sobolev_weights(nodes: NodeSet) -> np.ndarray:
    """
    Weight vector with entries (prod_{r<=i} alpha_r / i!) w_j.

    Within each node the entries run from i = s_j down to i = 0, matching
    the data layout; the last entry of every block is w_j.
    """
    out = np.empty(nodes.dim, dtype=np.complex128)
    pos = 0
    for wj, s, alpha in zip(nodes.w, nodes.orders, nodes.alphas):
        scale = np.concatenate([[1.0], np.cumprod(alpha)]) / special.factorial(np.arange(s + 1))
        out[pos:pos + s + 1] = (scale * wj)[::-1]
        pos += s + 1
    return out


def _jordan_data(nodes: NodeSet) -> Tuple[JordanOperator, np.ndarray, np.ndarray]:
    op = JordanOperator.from_blocks(nodes.z, nodes.orders, nodes.alphas)
    v = np.zeros(nodes.dim, dtype=np.complex128)
    v[op.bottom_rows] = nodes.w
    return op, v, sobolev_weights(nodes)


def build_jordan(nodes: NodeSet) -> Tuple[JordanOperator, np.ndarray, np.ndarray]:
    """
    Build the Jordan-like operator, starting vector and diagonal weight matrix.

    Returns:
        Tuple of (operator, starting_vector, weight_diag)
    """
    op, v, weights = _jordan_data(nodes)
    return op, v, np.diag(weights)


def fit_sobolev_poly(nodes: NodeSet, f, n: int, reorth_passes: int = config.DEFAULT_REORTH_PASSES,
                     breakdown_tol: float = config.BREAKDOWN_TOL) -> Tuple[SobolevPolyFitModel, OrthoBasis]:
    """
    Fit p in P_n minimizing the weighted Sobolev objective
    sum_j sum_{i=0..s_j} |w_j|^2 |prod alpha / i!|^2 |p^(i)(z_j) - f_j^(i)|^2.

    Returns:
        Tuple of (model, basis)
    """
    rhs = _check_rhs(nodes, f)
    if n < 0 or n >= nodes.dim:
        raise InputError(f"degree n must satisfy 0 <= n <= m-1 = {nodes.dim - 1}, got {n}")

    op, v, weights = _jordan_data(nodes)
    q, h = polynomial_arnoldi(op, v, n, reorth_passes, breakdown_tol)
    basis = OrthoBasis(q)
    y = project_rhs(basis, weights, rhs)
    p0 = 1.0 / float(np.linalg.norm(nodes.w))
    return SobolevPolyFitModel(Hessenberg(h), y, p0, nodes.orders.copy()), basis


def sample_operator(sample_nodes: Sequence[complex], sample_orders: Sequence[int]) -> JordanOperator:
    """Jordan-like operator over sample points, all alphas equal to 1."""
    x = as_vector(sample_nodes, 'sample_nodes')
    orders = np.asarray(sample_orders, dtype=int).reshape(-1)
    if orders.shape[0] == 1 and x.shape[0] > 1:
        orders = np.full(x.shape[0], orders[0])
    return JordanOperator.from_blocks(x, orders)


def unscale_derivatives(op: JordanOperator, values: np.ndarray) -> np.ndarray:
    """Turn Jordan-scaled entries f^(i)/i! into plain derivatives."""
    return values * special.factorial(op.offsets)


def sobolev_poly_basis(model, sample_nodes, sample_orders) -> np.ndarray:
    """Stacked derivatives of the orthonormal polynomials, shape (M, n+1)."""
    op = sample_operator(sample_nodes, sample_orders)
    u = polynomial_recurrence(model.hessenberg.matrix, op, sobolev_start(op, model.p0))
    return u * special.factorial(op.offsets)[:, None]


def eval_sobolev_poly(model, sample_nodes: Sequence[complex], sample_orders: Sequence[int]) -> np.ndarray:
    """
    Evaluate the fit and its derivatives.

    Returns the stacked vector (p^(s_j)(x_j), ..., p'(x_j), p(x_j)) per
    sample. ``sample_orders`` may be a single order used for all samples.
    Works for PolyFitModel too.
    """
    op = sample_operator(sample_nodes, sample_orders)
    u = polynomial_recurrence(model.hessenberg.matrix, op, sobolev_start(op, model.p0))
    return unscale_derivatives(op, u @ model.y)
