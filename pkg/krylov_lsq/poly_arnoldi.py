"""Weighted polynomial least squares by Vandermonde with Arnoldi."""

from dataclasses import dataclass
from typing import ClassVar, Sequence, Tuple

import numpy as np

from . import config
from .errors import InputError
from .krylov import polynomial_arnoldi, polynomial_recurrence
from .linalg import Hessenberg, OrthoBasis, as_vector, project_rhs
from .nodes import NodeSet
from .operators import JordanOperator


@dataclass(frozen=True)
class PolyFitModel:
    """Recurrence, coefficients and p_0 of a weighted polynomial fit."""

    hessenberg: Hessenberg
    y: np.ndarray
    p0: float

    kind: ClassVar[str] = 'poly'

    @property
    def degree(self) -> int:
        return self.hessenberg.cols


def _check_rhs(nodes: NodeSet, f) -> np.ndarray:
    rhs = as_vector(f, 'f')
    if rhs.shape[0] != nodes.dim:
        raise InputError(f"f has length {rhs.shape[0]} but the node set provides {nodes.dim} data entries")
    return rhs


def fit_poly(nodes: NodeSet, f, n: int, reorth_passes: int = config.DEFAULT_REORTH_PASSES,
             breakdown_tol: float = config.BREAKDOWN_TOL) -> Tuple[PolyFitModel, OrthoBasis]:
    """
    Fit p in P_n minimizing sum |w_j|^2 |p(z_j) - f_j|^2.

    Args:
        nodes: Node set without derivative data.
        f: Function values at the nodes.
        n: Degree, at most m-1.
        reorth_passes: 1 or 2 Gram-Schmidt sweeps per step.

    Returns:
        Tuple of (model, basis)
    """
    if not nodes.is_plain():
        raise InputError("fit_poly needs a node set without derivative orders; use fit_sobolev_poly")
    rhs = _check_rhs(nodes, f)
    if n < 0 or n >= nodes.dim:
        raise InputError(f"degree n must satisfy 0 <= n <= m-1 = {nodes.dim - 1}, got {n}")

    op = JordanOperator.diagonal_of(nodes.z)
    q, h = polynomial_arnoldi(op, nodes.w, n, reorth_passes, breakdown_tol)
    basis = OrthoBasis(q)
    y = project_rhs(basis, nodes.w, rhs)
    p0 = 1.0 / float(np.linalg.norm(nodes.w))
    return PolyFitModel(Hessenberg(h), y, p0), basis


def poly_basis(model: PolyFitModel, points: Sequence[complex]) -> np.ndarray:
    """Values p_k(x_j) of the orthonormal polynomials, shape (M, n+1)."""
    x = as_vector(points, 'points')
    op = JordanOperator.diagonal_of(x)
    return polynomial_recurrence(model.hessenberg.matrix, op, np.full(x.shape[0], model.p0, dtype=np.complex128))


def eval_poly(model: PolyFitModel, points: Sequence[complex]) -> np.ndarray:
    """Evaluate the fitted polynomial at ``points``."""
    return poly_basis(model, points) @ model.y

