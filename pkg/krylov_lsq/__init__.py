"""
Krylov Least Squares
Weighted polynomial, Sobolev polynomial, rational and Sobolev rational
least squares fitting through (rational) Arnoldi orthogonalization.
"""

from .baselines import build_basis_matrix, direct_fit_eval, displacement_residual
from .datasets import load_dataset, save_dataset
from .errors import (Breakdown, ConvergenceError, DatasetError, FitWarning, InputError, KrylovLSQError,
                     PencilDegeneracy, PoleNodeCollision, RankDeficiency)
from .experiments import ExperimentConfig, emit_report, run_experiment
from .nodes import (NodeSet, PoleSchedule, chebyshev_first_kind, clustered_nodes, conjugate_pair_poles,
                    legendre_gauss, tapered_real_poles)
from .poly_arnoldi import eval_poly, fit_poly
from .rational_arnoldi import eval_rational, fit_rational
from .sobolev_poly import build_jordan, eval_sobolev_poly, fit_sobolev_poly
from .sobolev_rational import eval_sobolev_rational, fit_sobolev_rational

__version__ = "1.0.0"
__all__ = [
    "NodeSet", "PoleSchedule",
    "chebyshev_first_kind", "legendre_gauss", "clustered_nodes", "tapered_real_poles", "conjugate_pair_poles",
    "fit_poly", "eval_poly",
    "build_jordan", "fit_sobolev_poly", "eval_sobolev_poly",
    "fit_rational", "eval_rational",
    "fit_sobolev_rational", "eval_sobolev_rational",
    "build_basis_matrix", "direct_fit_eval", "displacement_residual",
    "load_dataset", "save_dataset",
    "ExperimentConfig", "run_experiment", "emit_report",
    "KrylovLSQError", "InputError", "DatasetError", "Breakdown", "PoleNodeCollision", "PencilDegeneracy",
    "RankDeficiency", "ConvergenceError", "FitWarning",
]
