"""Weighted Sobolev rational least squares by rational Arnoldi on a Jordan-like operator."""

from dataclasses import dataclass
from typing import ClassVar, Sequence, Tuple

import numpy as np

from . import config
from .krylov import rational_arnoldi, rational_recurrence, sobolev_start
from .linalg import Hessenberg, OrthoBasis, project_rhs
from .nodes import NodeSet, PoleSchedule
from .rational_arnoldi import _validate, check_poles_off
from .sobolev_poly import _jordan_data, sample_operator, unscale_derivatives


@dataclass(frozen=True)
class SobolevRationalFitModel:
    h: Hessenberg
    k: Hessenberg
    y: np.ndarray
    r0: float
    poles: PoleSchedule
    orders: np.ndarray

    kind: ClassVar[str] = 'sobolev-rational'

    @property
    def degree(self) -> int:
        return self.h.cols


def fit_sobolev_rational(nodes: NodeSet, f, poles: PoleSchedule,
                         reorth_passes: int = config.DEFAULT_REORTH_PASSES,
                         breakdown_tol: float = config.BREAKDOWN_TOL) -> Tuple[SobolevRationalFitModel, OrthoBasis]:
    """
    Fit r in R_n with the given poles to values and derivatives.

    The objective sums i = 0..s_j, so function values always take part.
    Shifted solves with the Jordan-like operator are banded back-substitutions.

    Returns:
        Tuple of (model, basis)
    """
    rhs = _validate(nodes, f, poles)
    op, v, weights = _jordan_data(nodes)
    q, h, k = rational_arnoldi(op, v, poles, reorth_passes, breakdown_tol)
    basis = OrthoBasis(q)
    y = project_rhs(basis, weights, rhs)
    r0 = 1.0 / float(np.linalg.norm(nodes.w))
    return SobolevRationalFitModel(Hessenberg(h), Hessenberg(k), y, r0, poles, nodes.orders.copy()), basis


def _sample_basis(model, sample_nodes, sample_orders):
    op = sample_operator(sample_nodes, sample_orders)
    check_poles_off(model.poles, op.diagonal, 'evaluation point')
    u = rational_recurrence(model.h.matrix, model.k.matrix, op, sobolev_start(op, model.r0), flipped=True)
    return op, u


def sobolev_rational_basis(model, sample_nodes, sample_orders) -> np.ndarray:
    """Stacked derivatives of the orthonormal rational functions, shape (M, n+1)."""
    op, u = _sample_basis(model, sample_nodes, sample_orders)
    return unscale_derivatives(op, u.T).T


def eval_sobolev_rational(model, sample_nodes: Sequence[complex], sample_orders: Sequence[int]) -> np.ndarray:
    """
    Evaluate the fit and its derivatives.

    Returns the stacked vector (r^(s_j)(x_j), ..., r'(x_j), r(x_j)) per
    sample. Works for RationalFitModel too.
    """
    op, u = _sample_basis(model, sample_nodes, sample_orders)
    return unscale_derivatives(op, u @ model.y)
