"""Exceptions and warning records raised or collected while fitting."""

from typing import Optional

import numpy as np


class KrylovLSQError(Exception):
    """Base class for every error raised by krylov_lsq."""


class InputError(KrylovLSQError, ValueError):
    """Invalid shapes, non-finite data or out-of-range parameters."""


class DimensionMismatch(InputError):
    pass


class DuplicateNodes(InputError):
    pass


class DatasetError(InputError):
    """A dataset file could not be parsed."""

    def __init__(self, message: str, line_number: Optional[int] = None):
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)


class Breakdown(KrylovLSQError):
    """The next Krylov vector is numerically dependent on the basis."""

    def __init__(self, step: int, tail_norm: float, candidate_norm: float):
        self.step = step
        self.tail_norm = tail_norm
        self.candidate_norm = candidate_norm
        super().__init__(
            f"Arnoldi breakdown at step {step}: tail norm {tail_norm:.3e} "
            f"relative to candidate norm {candidate_norm:.3e}"
        )


class PoleNodeCollision(KrylovLSQError):
    """A shifted solve (nu*A - mu*I) is singular: a pole sits on a node."""


class PencilDegeneracy(KrylovLSQError):
    """Both subdiagonal entries of the Hessenberg pencil vanish."""


class RankDeficiency(KrylovLSQError):
    """A triangular pivot fell below the rank tolerance.

    The least squares solution computed anyway is kept on ``solution`` so
    callers comparing unstable baselines can still use it.
    """

    def __init__(self, message: str, solution: np.ndarray, pivot_ratio: float):
        self.solution = solution
        self.pivot_ratio = pivot_ratio
        super().__init__(message)


class ConvergenceError(KrylovLSQError):
    pass


class FitWarning:
    """Represents a non-fatal condition met during a fit or an experiment."""

    def __init__(self, message: str, warning_type: str = 'GENERAL', n: Optional[int] = None):
        self.message = message
        self.warning_type = warning_type
        self.n = n

    def __str__(self):
        if self.n is not None:
            return f"WARNING (n={self.n}, {self.warning_type}): {self.message}"
        return f"WARNING ({self.warning_type}): {self.message}"

    def __repr__(self):
        return f"FitWarning({self.message!r}, warning_type={self.warning_type!r}, n={self.n!r})"
