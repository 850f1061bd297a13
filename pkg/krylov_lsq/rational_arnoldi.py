"""Weighted rational least squares with prescribed poles by rational Arnoldi."""

import logging
from dataclasses import dataclass
from typing import ClassVar, Sequence, Tuple

import numpy as np

from . import config
from .errors import InputError, PoleNodeCollision
from .krylov import rational_arnoldi, rational_recurrence
from .linalg import Hessenberg, OrthoBasis, as_vector, project_rhs
from .nodes import NodeSet, PoleSchedule
from .operators import JordanOperator
from .poly_arnoldi import _check_rhs

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RationalFitModel:
    """Hessenberg pencil (H, K), coefficients, r_0 and the poles of a rational fit."""

    h: Hessenberg
    k: Hessenberg
    y: np.ndarray
    r0: float
    poles: PoleSchedule

    kind: ClassVar[str] = 'rational'

    @property
    def degree(self) -> int:
        return self.h.cols

    def subdiagonal_ratios(self) -> np.ndarray:
        """H_{k+1,k} / K_{k+1,k}; equals xi_k for finite poles."""
        sub_k = self.k.subdiagonal()
        ratios = np.full(sub_k.shape, complex('inf'), dtype=np.complex128)
        finite = sub_k != 0
        ratios[finite] = self.h.subdiagonal()[finite] / sub_k[finite]
        return ratios


def check_poles_off(poles: PoleSchedule, points: np.ndarray, what: str = 'node'):
    finite = poles.finite_poles()
    if finite.size and np.any(np.isin(points, finite)):
        hit = points[np.isin(points, finite)][0]
        raise PoleNodeCollision(f"pole {hit} coincides with a {what}")


def _validate(nodes: NodeSet, f, poles: PoleSchedule) -> np.ndarray:
    rhs = _check_rhs(nodes, f)
    if poles.n > nodes.dim - 1:
        raise InputError(f"{poles.n} poles need at least {poles.n + 1} data entries, got {nodes.dim}")
    check_poles_off(poles, nodes.z)
    return rhs


def fit_rational(nodes: NodeSet, f, poles: PoleSchedule, reorth_passes: int = config.DEFAULT_REORTH_PASSES,
                 breakdown_tol: float = config.BREAKDOWN_TOL) -> Tuple[RationalFitModel, OrthoBasis]:
    """
    Fit r in R_n with the given poles minimizing sum |w_j|^2 |r(z_j) - f_j|^2.

    The degree n is the number of poles.

    Returns:
        Tuple of (model, basis)
    """
    if not nodes.is_plain():
        raise InputError("fit_rational needs a node set without derivative orders; use fit_sobolev_rational")
    rhs = _validate(nodes, f, poles)

    op = JordanOperator.diagonal_of(nodes.z)
    q, h, k = rational_arnoldi(op, nodes.w, poles, reorth_passes, breakdown_tol)
    basis = OrthoBasis(q)
    y = project_rhs(basis, nodes.w, rhs)
    r0 = 1.0 / float(np.linalg.norm(nodes.w))
    logger.debug("rational fit with %d poles on %d nodes", poles.n, nodes.size)
    return RationalFitModel(Hessenberg(h), Hessenberg(k), y, r0, poles), basis


def rational_basis(model, points: Sequence[complex]) -> np.ndarray:
    """Values r_k(x_j) of the orthonormal rational functions, shape (M, n+1)."""
    x = as_vector(points, 'points')
    check_poles_off(model.poles, x, 'evaluation point')
    op = JordanOperator.diagonal_of(x)
    return rational_recurrence(model.h.matrix, model.k.matrix, op,
                               np.full(x.shape[0], model.r0, dtype=np.complex128))


def eval_rational(model, points: Sequence[complex]) -> np.ndarray:
    """Evaluate the fitted rational function at ``points``."""
    return rational_basis(model, points) @ model.y
